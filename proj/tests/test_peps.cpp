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
#include <numbers>

#include "oracles.hpp"
#include "pepslab/pepslab.hpp"

namespace {

using namespace pepslab;

std::vector<std::size_t> phys_dims(const PepsNetwork& net) {
  std::vector<std::size_t> d;
  for (std::size_t v = 0; v < net.num_sites(); ++v) d.push_back(net.physical_dim(v));
  return d;
}

Eigen::MatrixXcd pauli_z(std::size_t d) {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = i % 2 == 0 ? 1.0 : -1.0;
  return z;
}

// --- lattice ---------------------------------------------------------------

TEST(Lattice, OpenGridCanonicalEdges) {
  const auto g = LatticeGraph::open_grid(2, 3, 2);
  EXPECT_EQ(g.num_vertices(), 6u);
  ASSERT_EQ(g.edges().size(), 7u);
  // site 0: right (0,1), down (0,3); site 1: right (1,2), down (1,4); ...
  EXPECT_EQ(g.edge(0), (Edge{0, 1, 2}));
  EXPECT_EQ(g.edge(1), (Edge{0, 3, 2}));
  EXPECT_EQ(g.edge(2), (Edge{1, 2, 2}));
  EXPECT_EQ(g.edge(6), (Edge{4, 5, 2}));
  EXPECT_EQ(LatticeGraph::edge_label(3), "e3");
}

TEST(Lattice, PeriodicGridHasWrapEdges) {
  const auto g = LatticeGraph::periodic_grid(3, 3, 2);
  EXPECT_EQ(g.edges().size(), 18u);
  for (std::size_t v = 0; v < 9; ++v) EXPECT_EQ(g.degree(v), 4u);
  EXPECT_THROW(LatticeGraph::periodic_grid(1, 3, 2), ValidationError);
}

TEST(Lattice, ExplicitGraphValidation) {
  EXPECT_THROW(LatticeGraph::explicit_graph(2, {{0, 0, 2}}), ValidationError);
  EXPECT_THROW(LatticeGraph::explicit_graph(2, {{0, 1, 0}}), ValidationError);
  EXPECT_THROW(LatticeGraph::explicit_graph(2, {{0, 2, 2}}), ValidationError);
  std::vector<Edge> wrong{{0, 1, 2}, {0, 2, 2}};
  EXPECT_THROW(LatticeGraph::grid_with_edges(Geometry::open_grid, 1, 3, wrong), ValidationError);
}

TEST(Network, CanonicalLegOrder) {
  const auto g = LatticeGraph::open_grid(2, 2, 2);
  Rng rng(1);
  // site 3 touches edges to 1 (e2 is 1-3) and 2 (e3 is 2-3); give legs scrambled
  std::vector<Tensor> ts;
  for (std::size_t v = 0; v < 4; ++v) {
    std::vector<Leg> legs{{kPhysLeg, 2}};
    const auto& inc = g.incident_edges(v);
    for (auto it = inc.rbegin(); it != inc.rend(); ++it) legs.push_back({LatticeGraph::edge_label(*it), 2});
    ts.push_back(random_tensor(legs, rng));
  }
  const PepsNetwork net(g, ts);
  for (std::size_t v = 0; v < 4; ++v) {
    const auto labels = net.tensor(v).labels();
    EXPECT_EQ(labels.back(), kPhysLeg);
    std::vector<std::size_t> nbrs;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
      nbrs.push_back(g.edge(std::stoul(labels[i].substr(1))).other(v));
    }
    EXPECT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
  }
  // missing or mis-sized legs are rejected
  std::vector<Tensor> bad = ts;
  bad[0] = random_tensor({{kPhysLeg, 2}, {"e0", 3}, {"e1", 2}}, rng);
  EXPECT_THROW(PepsNetwork(g, bad), ValidationError);
  bad[0] = random_tensor({{kPhysLeg, 2}, {"e0", 2}}, rng);
  EXPECT_THROW(PepsNetwork(g, bad), ValidationError);
}

// --- peps-model ------------------------------------------------------------

TEST(LinkState, Examples) {
  const Tensor one = link_state(1);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.data()[0], cplx{1.0});
  const Tensor two = link_state(2);
  EXPECT_NEAR(two.at({0, 0}).real(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(two.at({0, 1}), cplx{0.0});
  const Tensor n = contract(two, conj(two), std::vector<LegPair>{{"a", "a"}, {"b", "b"}});
  EXPECT_NEAR(n.value().real(), 1.0, 1e-15);
}

TEST(Injectivity, Examples) {
  const auto g = LatticeGraph::open_grid(2, 2, 2);
  std::vector<Tensor> ts;
  for (std::size_t v = 0; v < 4; ++v) {
    ts.push_back(site_tensor_from_map(g, v, Eigen::MatrixXcd::Identity(4, 4)));
  }
  const PepsNetwork id(g, ts);
  EXPECT_NEAR(peps_injectivity(id), 1.0, 1e-14);
  EXPECT_NEAR(peps_norm(id), 1.0, 1e-12);

  const auto single = LatticeGraph::explicit_graph(1, {});
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 1);
  d(0, 0) = 1.0;
  const PepsNetwork one(single, {site_tensor_from_map(single, 0, d)});
  EXPECT_NEAR(peps_injectivity(one), 1.0, 1e-14);

  const auto pair = LatticeGraph::explicit_graph(2, {{0, 1, 2}});
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 0.3;
  const PepsNetwork p(pair, {site_tensor_from_map(pair, 0, m), site_tensor_from_map(pair, 1, Eigen::MatrixXcd::Identity(2, 2))});
  EXPECT_NEAR(peps_injectivity(p), 0.3, 1e-14);

  // physical dim below the virtual dim is reported per site
  Rng rng(2);
  const PepsNetwork low = random_gaussian_network(g, 2, 3);
  const auto rep = injectivity_report(low);
  for (const auto& s : rep) {
    EXPECT_FALSE(s.injective);
    EXPECT_FALSE(s.reason.empty());
  }
  EXPECT_EQ(peps_injectivity(low), 0.0);
}

TEST(Injectivity, PhaseAndRelabelInvariance) {
  const PepsNetwork net = generate_random_network(2, 2, 2, 6, 0.6, 4);
  const double base = peps_injectivity(net);
  const PepsNetwork phased = net.with_tensor(1, scaled(net.tensor(1), std::polar(1.0, 0.7)));
  EXPECT_NEAR(peps_injectivity(phased), base, 1e-12);
  const Tensor t = net.tensor(2);
  std::vector<std::string> rev = t.labels();
  std::reverse(rev.begin(), rev.end());
  EXPECT_NEAR(peps_injectivity(net.with_tensor(2, permute_legs(t, rev))), base, 1e-12);
}

TEST(Generate, PrescribedInjectivityAndDeterminism) {
  EXPECT_NEAR(peps_injectivity(generate_random_network(2, 3, 2, 0, 1.0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(peps_injectivity(generate_random_network(2, 3, 2, 0, 0.5, 1)), 0.5, 1e-10);
  const auto a = generate_random_network(2, 2, 2, 5, 0.7, 99);
  const auto b = generate_random_network(2, 2, 2, 5, 0.7, 99);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_THROW(generate_random_network(2, 2, 2, 3, 0.5, 1), ValidationError);
  EXPECT_THROW(generate_random_network(2, 2, 2, 4, 0.0, 1), ValidationError);
}

TEST(Norm, MatchesStateVectorOracle) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = seed % 2 ? LatticeGraph::open_grid(2, 2, 2) : LatticeGraph::open_grid(2, 3, 2);
    const PepsNetwork net = random_gaussian_network(g, 2 + seed % 3, seed);
    const Eigen::VectorXcd psi = oracle::state_vector(net);
    EXPECT_NEAR(peps_norm(net), psi.squaredNorm(), 1e-10 * psi.squaredNorm());
  }
}

TEST(Norm, SingleVertexUnitVector) {
  const auto g = LatticeGraph::explicit_graph(1, {});
  Eigen::MatrixXcd v(3, 1);
  v << 0.6, cplx{0.0, 0.8}, 0.0;
  EXPECT_NEAR(peps_norm(PepsNetwork(g, {site_tensor_from_map(g, 0, v)})), 1.0, 1e-15);
}

TEST(Norm, IsometricNetworksAreNormalized) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EXPECT_NEAR(peps_norm(generate_random_network(4, 4, 2, 0, 1.0, seed)), 1.0, 1e-10);
  }
}

TEST(Norm, ScalingOneTensor) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 2, 2), 3, 8);
  const cplx c{0.7, -1.1};
  const PepsNetwork s = net.with_tensor(2, scaled(net.tensor(2), c));
  EXPECT_NEAR(peps_norm(s), std::norm(c) * peps_norm(net), 1e-12 * peps_norm(s));
  const Observable obs = Observable::single_site(1, pauli_z(3));
  EXPECT_NEAR(peps_nev(s, obs).value, peps_nev(net, obs).value, 1e-12);
}

TEST(Norm, SweepDirectionInvariance) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(3, 3, 2), 2, 9);
  ContractionOptions cols, rows, ids;
  cols.order = SweepOrder::columns;
  rows.order = SweepOrder::rows;
  ids.order = SweepOrder::vertex_id;
  const double a = peps_norm(net, cols), b = peps_norm(net, rows), c = peps_norm(net, ids);
  EXPECT_NEAR(a, b, 1e-10 * a);
  EXPECT_NEAR(a, c, 1e-10 * a);
}

TEST(Norm, PeriodicAndExplicitAgreeWithOracle) {
  const PepsNetwork per = random_gaussian_network(LatticeGraph::periodic_grid(2, 2, 2), 2, 10);
  const double n = oracle::state_vector(per).squaredNorm();
  EXPECT_NEAR(peps_norm(per), n, 1e-10 * n);
  const auto tri = LatticeGraph::explicit_graph(3, {{0, 1, 2}, {1, 2, 3}, {0, 2, 2}});
  const PepsNetwork t = random_gaussian_network(tri, 3, 11);
  const double m = oracle::state_vector(t).squaredNorm();
  EXPECT_NEAR(peps_norm(t), m, 1e-10 * m);
}

TEST(Norm, GuardAndForce) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 2, 2), 2, 12);
  ContractionOptions tight;
  tight.max_boundary = 4;
  try {
    peps_norm(net, tight);
    FAIL() << "guard did not trigger";
  } catch (const GuardError& e) {
    EXPECT_NE(std::string(e.what()).find("too large for exact contraction"), std::string::npos);
  }
  tight.force = true;
  EXPECT_NEAR(peps_norm(net, tight), peps_norm(net), 1e-12);
}

TEST(Nev, Examples) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 2, 2), 3, 13);
  EXPECT_NEAR(peps_nev(net, Observable::single_site(2, Eigen::MatrixXcd::Identity(3, 3))).value, 1.0, 1e-12);

  // bond dims 1: a product state
  const auto g = LatticeGraph::open_grid(2, 2, 1);
  Rng rng(14);
  std::vector<Tensor> ts;
  std::vector<Eigen::MatrixXcd> vs;
  for (std::size_t v = 0; v < 4; ++v) {
    vs.push_back(random_gaussian_matrix(3, 1, rng));
    ts.push_back(site_tensor_from_map(g, v, vs.back()));
  }
  const PepsNetwork prod(g, ts);
  const Eigen::MatrixXcd o = random_hermitian(3, rng);
  const cplx expect = (vs[1].adjoint() * o * vs[1])(0, 0) / vs[1].squaredNorm();
  EXPECT_NEAR(peps_nev(prod, Observable::single_site(1, o)).value, expect.real(), 1e-12);
}

TEST(Nev, MatchesOracleOnInjectiveNetwork) {
  const PepsNetwork net = generate_random_network(2, 3, 2, 0, 0.5, 15);
  const Eigen::VectorXcd psi = oracle::state_vector(net);
  const auto dims = phys_dims(net);
  const Observable z = Observable::single_site(4, pauli_z(dims[4]));
  const auto r = peps_nev(net, z);
  EXPECT_NEAR(r.value, oracle::expectation(psi, dims, {4}, pauli_z(dims[4])).real(), 1e-10);
  EXPECT_LE(r.imag_residue, 1e-10);
}

TEST(Nev, MultiSiteObservables) {
  Rng rng(16);
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 3, 2), 2, 16);
  const Eigen::VectorXcd psi = oracle::state_vector(net);
  const auto dims = phys_dims(net);
  for (const std::vector<std::size_t>& sup :
       {std::vector<std::size_t>{0, 1}, {5, 0}, {1, 3, 5}, {0, 2, 3, 4}}) {
    const std::size_t dim = std::size_t{1} << sup.size();
    const Eigen::MatrixXcd o = random_hermitian(dim, rng);
    const auto r = peps_nev(net, Observable::from_matrix(sup, std::vector<std::size_t>(sup.size(), 2), o));
    EXPECT_NEAR(r.value, oracle::expectation(psi, dims, sup, o).real(), 1e-10);
    EXPECT_LE(r.imag_residue, 1e-10);
  }
}

TEST(Nev, ObservableValidation) {
  Rng rng(17);
  Eigen::MatrixXcd m = random_gaussian_matrix(2, 2, rng);
  EXPECT_THROW(Observable::single_site(0, m), ValidationError);
  EXPECT_THROW(Observable::from_matrix({0, 0}, {2, 2}, Eigen::MatrixXcd::Identity(4, 4)), ValidationError);
  EXPECT_THROW(Observable::from_matrix({0, 1, 2, 3, 4}, {1, 1, 1, 1, 1}, Eigen::MatrixXcd::Identity(1, 1)),
               ValidationError);
}

TEST(Nev, NullStateIsAnError) {
  const auto g = LatticeGraph::open_grid(1, 2, 2);
  const PepsNetwork net(g, {Tensor::zeros({{"e0", 2}, {kPhysLeg, 2}}), Tensor::zeros({{"e0", 2}, {kPhysLeg, 2}})});
  EXPECT_THROW(peps_nev(net, Observable::single_site(0, pauli_z(2))), NumericalError);
}

TEST(Decision, Thresholds) {
  EXPECT_EQ(decide(0.9), Decision::accept);
  EXPECT_EQ(decide(2.0 / 3.0), Decision::accept);
  EXPECT_EQ(decide(1.0 / 3.0), Decision::reject);
  EXPECT_EQ(decide(0.1), Decision::reject);
  EXPECT_EQ(decide(0.5), Decision::undetermined);
  EXPECT_EQ(to_string(Decision::undetermined), "undetermined");
}

// --- contraction -----------------------------------------------------------

TEST(DoubleLayer, MatchesLoopOracle) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 2, 2), 3, 18);
  Rng rng(18);
  const Eigen::MatrixXcd o = random_hermitian(3, rng);
  for (std::size_t v = 0; v < 4; ++v) {
    const Tensor e = double_layer(net, v);
    const auto ref = oracle::double_layer(net.tensor(v));
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_LT(std::abs(e.data()[i] - ref[i]), 1e-12);
    const Tensor eo = double_layer(net, v, &o);
    const auto refo = oracle::double_layer(net.tensor(v), &o);
    for (std::size_t i = 0; i < refo.size(); ++i) EXPECT_LT(std::abs(eo.data()[i] - refo[i]), 1e-12);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_LT(max_abs_difference(double_layer(net, v, &id), e), 1e-13);
  }
}

TEST(DoubleLayer, HermitianAcrossBipartition) {
  const PepsNetwork net = random_gaussian_network(LatticeGraph::open_grid(2, 2, 2), 3, 19);
  const Tensor e = double_layer(net, 0);
  // split fused legs back into (bra, ket) and swap roles: E[b,k] = conj(E[k,b])
  const auto labels = virtual_labels(net.graph(), 0);
  Tensor split = e;
  for (const auto& l : labels) split = split_leg(split, l, {{"b" + l, 2}, {"k" + l, 2}});
  std::vector<std::string> bras, kets;
  for (const auto& l : labels) {
    bras.push_back("b" + l);
    kets.push_back("k" + l);
  }
  const Eigen::MatrixXcd m = to_matrix(split, bras, kets);
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DoubleLayer, IsometryClosesToOne) {
  const auto g = LatticeGraph::explicit_graph(3, {{0, 1, 2}, {1, 2, 2}});
  const PepsNetwork net = generate_random_network(g, 5, 1.0, 20);
  // the middle site alone with both links closed by the maximally mixed state
  EXPECT_NEAR(contract_region(net, {1}, nullptr, {}).real(), 1.0, 1e-12);
}

TEST(Patch, RingGeometry) {
  const auto g = LatticeGraph::open_grid(5, 5, 2);
  const PatchSpec p = make_patch(g, {g.site(2, 2)}, 1);
  EXPECT_EQ(p.ring.size(), 8u);
  EXPECT_EQ(p.interior, (std::vector<std::size_t>{g.site(2, 2)}));
  EXPECT_THROW(make_patch(g, {g.site(1, 1)}, 2), ValidationError);
  const auto big = LatticeGraph::open_grid(8, 8, 2);
  for (std::size_t l = 1; l <= 3; ++l) {
    const PatchSpec q = make_patch(big, {big.site(3, 3), big.site(3, 4)}, l);
    EXPECT_TRUE(oracle::ring_separates(big, q.ring, q.interior));
    for (std::size_t y : q.ring) {
      const auto [r, c] = big.coords(y);
      auto cheb = [&](std::size_t xr, std::size_t xc) {
        const std::size_t dr = r > xr ? r - xr : xr - r, dc = c > xc ? c - xc : xc - c;
        return std::max(dr, dc);
      };
      const std::size_t dist = std::min(cheb(3, 3), cheb(3, 4));
      EXPECT_GE(dist, l);
    }
  }
}

TEST(Patch, FullCoverageIsExact) {
  const PepsNetwork net = generate_random_network(3, 3, 2, 0, 0.8, 21);
  const Observable obs = Observable::single_site(4, pauli_z(16));
  EXPECT_NEAR(patch_nev(net, obs, 2).value, peps_nev(net, obs).value, 1e-12);
}

TEST(Patch, ProductStateIsExactForAnyRadius) {
  const auto g = LatticeGraph::open_grid(5, 5, 1);
  Rng rng(22);
  std::vector<Tensor> ts;
  for (std::size_t v = 0; v < 25; ++v) ts.push_back(site_tensor_from_map(g, v, random_gaussian_matrix(2, 1, rng)));
  const PepsNetwork net(g, ts);
  const Observable obs = Observable::single_site(12, pauli_z(2));
  const double exact = peps_nev(net, obs).value;
  EXPECT_NEAR(patch_nev(net, obs, 1).value, exact, 1e-12);
  EXPECT_NEAR(patch_nev(net, obs, 2).value, exact, 1e-12);
}

TEST(Patch, ErrorShrinksWithRadius) {
  const PepsNetwork net = generate_random_network(7, 7, 2, 0, 0.95, 23);
  const Observable obs = Observable::single_site(24, pauli_z(16));
  const double exact = peps_nev(net, obs).value;
  double prev = 1e9;
  for (std::size_t l = 1; l <= 3; ++l) {
    const double err = std::abs(patch_nev(net, obs, l).value - exact);
    EXPECT_LE(err, prev + 1e-3);
    prev = err;
  }
  EXPECT_LE(prev, 0.05);
}

}  // namespace
