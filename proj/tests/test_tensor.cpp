// Copyright 2026 The pepslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pepslab/pepslab.hpp"

namespace {

using namespace pepslab;

double max_diff(const std::vector<cplx>& a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Tensor, ConstructorRejectsBadInput) {
  EXPECT_THROW(Tensor({{"a", 2}}, {1.0, 2.0, 3.0}), ValidationError);
  EXPECT_THROW(Tensor({{"a", 2}, {"a", 2}}, std::vector<cplx>(4)), ValidationError);
  EXPECT_THROW(Tensor({{"a", 0}}, {}), ValidationError);
  EXPECT_THROW(Tensor({{"a", 1}}, {cplx{std::numeric_limits<double>::quiet_NaN(), 0.0}}), ValidationError);
  EXPECT_THROW(Tensor({{"a", 1}}, {cplx{std::numeric_limits<double>::infinity(), 0.0}}), ValidationError);
}

TEST(Tensor, IdentityComposition) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const Tensor a = Tensor::matrix(id, "i", "j");
  const Tensor b = Tensor::matrix(id, "j", "k");
  const Tensor c = contract(a, b, std::vector<LegPair>{{"j", "j"}});
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"i", "k"}));
  EXPECT_EQ(max_abs_difference(c, Tensor::matrix(id, "i", "k")), 0.0);
}

TEST(Tensor, UnitVectorSelfContraction) {
  Rng rng(3);
  Tensor v = random_tensor({{"a", 3}, {"b", 2}}, rng);
  v = scaled(v, 1.0 / frobenius_norm(v));
  const Tensor s = contract(v, conj(v), std::vector<LegPair>{{"a", "a"}, {"b", "b"}});
  EXPECT_NEAR(s.value().real(), 1.0, 1e-14);
  EXPECT_NEAR(s.value().imag(), 0.0, 1e-14);
}

TEST(Tensor, ContractMatchesLoopOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Tensor a = random_tensor({{"x", 2}, {"y", 3}, {"j", 4}}, rng);
    const Tensor b = random_tensor({{"j", 4}, {"z", 2}, {"w", 5}}, rng);
    const Tensor c = contract(a, b, std::vector<LegPair>{{"j", "j"}});
    EXPECT_EQ(c.labels(), (std::vector<std::string>{"x", "y", "z", "w"}));
    EXPECT_LT(max_diff(oracle::contract_last_first(a, b), c.data()), 1e-13);
  }
}

TEST(Tensor, ContractRejectsMismatches) {
  Rng rng(1);
  const Tensor a = random_tensor({{"x", 2}, {"j", 3}}, rng);
  const Tensor b = random_tensor({{"j", 4}}, rng);
  EXPECT_THROW(contract(a, b, std::vector<LegPair>{{"j", "j"}}), ValidationError);
  EXPECT_THROW(contract(a, b, std::vector<LegPair>{{"q", "j"}}), ValidationError);
  const Tensor c = random_tensor({{"j", 3}, {"k", 3}}, rng);
  EXPECT_THROW(contract(a, c, std::vector<LegPair>{{"j", "j"}, {"j", "k"}}), ValidationError);
}

TEST(Tensor, Bilinearity) {
  Rng rng(5);
  const Tensor a = random_tensor({{"x", 3}, {"j", 4}}, rng);
  const Tensor a2 = random_tensor({{"x", 3}, {"j", 4}}, rng);
  const Tensor b = random_tensor({{"j", 4}, {"y", 2}}, rng);
  const cplx alpha{0.3, -1.2}, beta{2.0, 0.5};
  const std::vector<LegPair> p{{"j", "j"}};
  const Tensor lhs = contract(linear_combination(alpha, a, beta, a2), b, p);
  const Tensor rhs = linear_combination(alpha, contract(a, b, p), beta, contract(a2, b, p));
  EXPECT_LT(max_abs_difference(lhs, rhs), 1e-12);
}

TEST(Tensor, Associativity) {
  Rng rng(6);
  const Tensor a = random_tensor({{"x", 2}, {"i", 3}}, rng);
  const Tensor b = random_tensor({{"i", 3}, {"j", 4}}, rng);
  const Tensor c = random_tensor({{"j", 4}, {"y", 2}}, rng);
  const Tensor left = contract(contract(a, b, std::vector<LegPair>{{"i", "i"}}), c, std::vector<LegPair>{{"j", "j"}});
  const Tensor right = contract(a, contract(b, c, std::vector<LegPair>{{"j", "j"}}), std::vector<LegPair>{{"i", "i"}});
  EXPECT_LT(max_abs_difference(left, right), 1e-12);
}

TEST(Tensor, PermuteIdentityAndInvolution) {
  Rng rng(7);
  const Tensor t = random_tensor({{"a", 2}, {"b", 3}, {"c", 4}}, rng);
  const std::vector<std::size_t> id{0, 1, 2}, swap{1, 0, 2};
  const Tensor same = permute_legs(t, std::span<const std::size_t>(id));
  EXPECT_EQ(same.legs(), t.legs());
  EXPECT_TRUE(std::equal(same.data().begin(), same.data().end(), t.data().begin()));
  const Tensor twice = permute_legs(permute_legs(t, std::span<const std::size_t>(swap)), std::span<const std::size_t>(swap));
  EXPECT_EQ(max_abs_difference(twice, t), 0.0);
  EXPECT_EQ(twice.legs(), t.legs());
  const std::vector<std::size_t> bad{0, 0, 2};
  EXPECT_THROW(permute_legs(t, std::span<const std::size_t>(bad)), ValidationError);
}

TEST(Tensor, PermuteThenContractEqualsDirect) {
  Rng rng(8);
  const Tensor a = random_tensor({{"a", 2}, {"b", 3}, {"c", 4}}, rng);
  const Tensor b = random_tensor({{"c", 4}, {"d", 2}}, rng);
  const Tensor direct = contract(a, b, std::vector<LegPair>{{"c", "c"}});
  const Tensor pa = permute_legs(a, std::vector<std::string>{"c", "b", "a"});
  const Tensor via = permute_legs(contract(pa, b, std::vector<LegPair>{{"c", "c"}}), std::vector<std::string>{"a", "b", "d"});
  EXPECT_LT(max_abs_difference(direct, via), 1e-13);
}

TEST(Tensor, FuseSplitRoundTrip) {
  Rng rng(9);
  const Tensor t = random_tensor({{"a", 2}, {"b", 3}, {"c", 4}}, rng);
  const Tensor f = fuse_legs(t, {"a", "c"}, "ac");
  EXPECT_EQ(f.dim_of("ac"), 8u);
  const Tensor back = permute_legs(split_leg(f, "ac", {{"a", 2}, {"c", 4}}), std::vector<std::string>{"a", "b", "c"});
  EXPECT_EQ(max_abs_difference(back, t), 0.0);
  const Tensor single = fuse_legs(t, {"b"}, "bb");
  EXPECT_EQ(single.labels(), (std::vector<std::string>{"a", "bb", "c"}));
  EXPECT_TRUE(std::equal(single.data().begin(), single.data().end(), t.data().begin()));
  EXPECT_THROW(fuse_legs(t, {"zz"}, "q"), ValidationError);
}

TEST(Tensor, MatrixVectorViaFusedLegs) {
  Rng rng(10);
  const Tensor m = random_tensor({{"r", 3}, {"a", 2}, {"b", 2}}, rng);
  const Tensor v = random_tensor({{"a", 2}, {"b", 2}}, rng);
  const Tensor fm = fuse_legs(m, {"a", "b"}, "ab");
  const Tensor fv = fuse_legs(v, {"a", "b"}, "ab");
  const Tensor y = contract(fm, fv, std::vector<LegPair>{{"ab", "ab"}});
  for (std::size_t r = 0; r < 3; ++r) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) s += m.at({r, a, b}) * v.at({a, b});
    }
    EXPECT_LT(std::abs(y.at({r}) - s), 1e-14);
  }
}

TEST(Tensor, SelectFixesIndex) {
  Rng rng(12);
  const Tensor t = random_tensor({{"a", 2}, {"b", 3}}, rng);
  const Tensor s = select(t, "b", 2);
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"a"}));
  EXPECT_EQ(s.at({1}), t.at({1, 2}));
}

TEST(SingularValues, Examples) {
  const auto id = singular_values(Eigen::MatrixXcd::Identity(4, 4));
  ASSERT_EQ(id.values.size(), 4u);
  for (double s : id.values) EXPECT_NEAR(s, 1.0, 1e-14);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  d(2, 2) = 2.0;
  const auto s = singular_values(d);
  EXPECT_NEAR(s.values[0], 3.0, 1e-14);
  EXPECT_NEAR(s.values[1], 2.0, 1e-14);
  EXPECT_NEAR(s.values[2], 1.0, 1e-14);
}

TEST(SingularValues, GramOracleAndFrobenius) {
  Rng rng(13);
  const Eigen::MatrixXcd m = random_gaussian_matrix(4, 6, rng);
  const auto s = singular_values(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m * m.adjoint());
  ASSERT_EQ(s.values.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.values[i] * s.values[i], es.eigenvalues()(3 - static_cast<Eigen::Index>(i)), 1e-12);
  }
  for (std::size_t i = 1; i < s.values.size(); ++i) EXPECT_GE(s.values[i - 1], s.values[i]);
  const Tensor t = from_matrix(m, {{"r", 4}}, {{"c1", 2}, {"c2", 3}});
  EXPECT_NEAR(frobenius_norm(t), singular_values(t, {"r"}, {"c1", "c2"}).l2_norm(), 1e-12 * frobenius_norm(t));
  // relabeling within the same partition does not change the spectrum
  const auto a = singular_values(t, {"r"}, {"c1", "c2"});
  const auto b = singular_values(t, {"r"}, {"c2", "c1"});
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
  EXPECT_THROW(singular_values(t, {"r"}, {"c1"}), ValidationError);
}

TEST(ConditionNumber, Examples) {
  Rng rng(14);
  EXPECT_NEAR(*condition_number(singular_values(random_unitary(5, rng))), 1.0, 1e-12);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.25;
  EXPECT_NEAR(*condition_number(singular_values(d)), 4.0, 1e-14);
  d(1, 1) = 1e-16;
  EXPECT_FALSE(condition_number(singular_values(d)).has_value());
}

TEST(LeftInverse, Examples) {
  Rng rng(15);
  const Eigen::MatrixXcd iso = random_isometry(6, 3, rng);
  EXPECT_LT((left_inverse(iso) - iso.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  const Eigen::MatrixXcd di = left_inverse(d);
  EXPECT_NEAR(di(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(di(1, 1).real(), 1.0, 1e-15);
  const Eigen::MatrixXcd m = random_gaussian_matrix(16, 8, rng);
  EXPECT_LT((left_inverse(m) * m - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(left_inverse(Eigen::MatrixXcd::Zero(3, 2)), NonInjectiveError);
}

}  // namespace
