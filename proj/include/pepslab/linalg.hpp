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

#ifndef PEPSLAB_LINALG_HPP_
#define PEPSLAB_LINALG_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "pepslab/tensor.hpp"

namespace pepslab {

/// Relative threshold below which a singular value counts as zero when
/// deciding injectivity.
inline constexpr double kRankThreshold = 1e-14;

/// Singular values sorted non-increasing; all non-negative.
struct SingularSpectrum {
  std::vector<double> values;

  double largest() const { return values.empty() ? 0.0 : values.front(); }
  double smallest() const { return values.empty() ? 0.0 : values.back(); }
  double l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
};

inline SingularSpectrum singular_values(const Eigen::MatrixXcd& m) {
  SingularSpectrum s;
  if (m.size() == 0) return s;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd& v = svd.singularValues();
  s.values.assign(v.data(), v.data() + v.size());
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  for (double& x : s.values) x = std::max(x, 0.0);
  return s;
}

inline void check_partition(const Tensor& t, const std::vector<std::string>& row_legs,
                            const std::vector<std::string>& col_legs) {
  if (row_legs.size() + col_legs.size() != t.rank()) {
    throw ValidationError("row and column legs must partition the tensor legs");
  }
  std::vector<bool> seen(t.rank(), false);
  for (const auto* group : {&row_legs, &col_legs}) {
    for (const auto& l : *group) {
      std::size_t i = t.index_of(l);
      if (seen[i]) throw ValidationError("leg '" + l + "' listed twice in partition");
      seen[i] = true;
    }
  }
}

/// Singular values of `t` viewed as a matrix from `col_legs` to `row_legs`.
inline SingularSpectrum singular_values(const Tensor& t, const std::vector<std::string>& row_legs,
                                        const std::vector<std::string>& col_legs) {
  check_partition(t, row_legs, col_legs);
  return singular_values(to_matrix(t, row_legs, col_legs));
}

/*
 * sigma_1 / sigma_min over the min(rows, cols) singular values of the matrix
 * view. Returns nullopt when the smallest one is below kRankThreshold*sigma_1,
 * i.e. the view is numerically rank deficient ("non-injective").
 */
inline std::optional<double> condition_number(const SingularSpectrum& s) {
  if (s.values.empty() || s.largest() <= 0.0) return std::nullopt;
  if (s.smallest() <= kRankThreshold * s.largest()) return std::nullopt;
  return s.largest() / s.smallest();
}

inline std::optional<double> condition_number(const Tensor& t, const std::vector<std::string>& row_legs,
                                              const std::vector<std::string>& col_legs) {
  return condition_number(singular_values(t, row_legs, col_legs));
}

/// Left inverse via the SVD, inverting singular values above
/// `rel_threshold * sigma_1`. Throws if the matrix is not injective.
inline Eigen::MatrixXcd left_inverse(const Eigen::MatrixXcd& m, double rel_threshold = 1e-12) {
  if (m.rows() < m.cols()) throw NonInjectiveError("map has more inputs than outputs");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) throw NonInjectiveError("zero map is not injective");
  Eigen::VectorXd inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= rel_threshold * s(0)) {
      throw NonInjectiveError("map is numerically rank deficient (sigma_min/sigma_1 = " +
                              std::to_string(s(s.size() - 1) / s(0)) + ")");
    }
    inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// Kronecker product, a most significant.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace pepslab

#endif  // PEPSLAB_LINALG_HPP_
