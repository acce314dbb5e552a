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

#ifndef PEPSLAB_PEPS_HPP_
#define PEPSLAB_PEPS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepslab/lattice.hpp"
#include "pepslab/linalg.hpp"
#include "pepslab/random.hpp"
#include "pepslab/tensor.hpp"

namespace pepslab {

inline const std::string kPhysLeg = "phys";

/// Canonical leg order of the tensor at `v`: incident edge labels, then "phys".
inline std::vector<std::string> canonical_labels(const LatticeGraph& g, std::size_t v) {
  std::vector<std::string> labels;
  for (std::size_t e : g.incident_edges(v)) labels.push_back(LatticeGraph::edge_label(e));
  labels.push_back(kPhysLeg);
  return labels;
}

inline std::vector<std::string> virtual_labels(const LatticeGraph& g, std::size_t v) {
  std::vector<std::string> labels;
  for (std::size_t e : g.incident_edges(v)) labels.push_back(LatticeGraph::edge_label(e));
  return labels;
}

/// Puts an edge-labelled site tensor into canonical leg order, checking dims.
inline Tensor canonicalize_site_tensor(const LatticeGraph& g, std::size_t v, const Tensor& t) {
  const auto labels = canonical_labels(g, v);
  if (t.rank() != labels.size()) {
    throw ValidationError("tensor at vertex " + std::to_string(v) + " has " + std::to_string(t.rank()) +
                          " legs, expected " + std::to_string(labels.size()));
  }
  Tensor p = permute_legs(t, labels);
  const auto& inc = g.incident_edges(v);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (p.leg(i).dim != g.edge(inc[i]).bond_dim) {
      throw ValidationError("virtual leg " + labels[i] + " at vertex " + std::to_string(v) +
                            " does not match the bond dimension");
    }
  }
  return p;
}

/*
 * A PEPS: a graph and one tensor per vertex. Tensor legs are the virtual legs
 * (one per incident edge, labelled by edge, dim D_e) in canonical order
 * followed by the physical leg "phys".
 */
class PepsNetwork {
 public:
  PepsNetwork() = default;

  PepsNetwork(LatticeGraph graph, std::vector<Tensor> tensors)
      : graph_(std::move(graph)), tensors_(std::move(tensors)) {
    if (tensors_.size() != graph_.num_vertices()) {
      throw ValidationError("network needs exactly one tensor per vertex");
    }
    for (std::size_t v = 0; v < tensors_.size(); ++v) {
      tensors_[v] = canonicalize_site_tensor(graph_, v, tensors_[v]);
    }
  }

  const LatticeGraph& graph() const { return graph_; }
  std::size_t num_sites() const { return tensors_.size(); }
  const Tensor& tensor(std::size_t v) const { return tensors_.at(v); }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  std::size_t physical_dim(std::size_t v) const { return tensors_.at(v).dim_of(kPhysLeg); }

  std::size_t virtual_dim(std::size_t v) const {
    std::size_t d = 1;
    for (std::size_t e : graph_.incident_edges(v)) d *= graph_.edge(e).bond_dim;
    return d;
  }

  PepsNetwork with_tensor(std::size_t v, Tensor t) const {
    PepsNetwork out = *this;
    out.tensors_.at(v) = canonicalize_site_tensor(graph_, v, t);
    return out;
  }

  /// Site tensor as the matrix of the map virtual -> physical.
  Eigen::MatrixXcd site_map(std::size_t v) const {
    return to_matrix(tensors_.at(v), {kPhysLeg}, virtual_labels(graph_, v));
  }

  friend bool operator==(const PepsNetwork&, const PepsNetwork&) = default;

 private:
  LatticeGraph graph_;
  std::vector<Tensor> tensors_;
};

inline std::string out_label(std::size_t k) { return "out" + std::to_string(k); }
inline std::string in_label(std::size_t k) { return "in" + std::to_string(k); }

/*
 * Local operator on a few sites. The operator tensor has legs
 * out0..out{k-1}, in0..in{k-1}; leg k belongs to support[k] and has that
 * site's physical dimension. As a matrix (outs fused as rows) it is <out|O|in>.
 */
struct Observable {
  static constexpr std::size_t kMaxSupport = 4;

  std::vector<std::size_t> support;
  Tensor op;
  bool hermitian = true;

  Observable() = default;

  Observable(std::vector<std::size_t> support_sites, Tensor op_tensor, bool require_hermitian = true)
      : support(std::move(support_sites)) {
    const std::size_t k = support.size();
    if (k == 0 || k > kMaxSupport) throw ValidationError("observable support must have 1 to 4 sites");
    std::vector<std::size_t> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("observable support sites must be distinct");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back(out_label(i));
    for (std::size_t i = 0; i < k; ++i) labels.push_back(in_label(i));
    if (op_tensor.rank() != 2 * k) throw ValidationError("observable operator must have 2 legs per support site");
    op = permute_legs(op_tensor, labels);
    for (std::size_t i = 0; i < k; ++i) {
      if (op.dim_of(out_label(i)) != op.dim_of(in_label(i))) {
        throw ValidationError("observable input and output legs differ in dimension");
      }
    }
    const Eigen::MatrixXcd m = matrix();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    hermitian = is_hermitian(m, 1e-12 * scale);
    if (require_hermitian && !hermitian) throw ValidationError("observable operator is not Hermitian");
  }

  /// Single-site observable from a d x d matrix.
  static Observable single_site(std::size_t site, const Eigen::MatrixXcd& m) {
    return Observable({site}, Tensor::matrix(m, out_label(0), in_label(0)));
  }

  /// Observable from a matrix acting on the tensor product of the support
  /// spaces, first support site most significant.
  static Observable from_matrix(std::vector<std::size_t> sites, const std::vector<std::size_t>& dims,
                                const Eigen::MatrixXcd& m, bool require_hermitian = true) {
    if (sites.size() != dims.size()) throw ValidationError("one dimension per support site required");
    std::vector<Leg> rows, cols;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      rows.push_back({out_label(i), dims[i]});
      cols.push_back({in_label(i), dims[i]});
    }
    return Observable(std::move(sites), pepslab::from_matrix(m, rows, cols), require_hermitian);
  }

  std::size_t size() const { return support.size(); }

  Eigen::MatrixXcd matrix() const {
    std::vector<std::string> rows, cols;
    for (std::size_t i = 0; i < support.size(); ++i) {
      rows.push_back(out_label(i));
      cols.push_back(in_label(i));
    }
    return to_matrix(op, rows, cols);
  }
};

/// (1/sqrt(D)) sum_i |ii> on legs (a, b).
inline Tensor link_state(std::size_t bond_dim, const std::string& label_a = "a",
                         const std::string& label_b = "b") {
  if (bond_dim == 0) throw ValidationError("bond dimension must be >= 1");
  Tensor t = Tensor::zeros({{label_a, bond_dim}, {label_b, bond_dim}});
  const double amp = 1.0 / std::sqrt(static_cast<double>(bond_dim));
  for (std::size_t i = 0; i < bond_dim; ++i) t.at({i, i}) = amp;
  return t;
}

struct SiteInjectivity {
  std::size_t site = 0;
  /// sigma_min / sigma_1 of the map virtual -> physical; 0 when not injective.
  double delta = 0.0;
  bool injective = false;
  std::string reason;
};

inline SiteInjectivity site_injectivity(const PepsNetwork& net, std::size_t v) {
  SiteInjectivity s;
  s.site = v;
  const std::size_t d = net.physical_dim(v), r = net.virtual_dim(v);
  if (d < r) {
    s.reason = "physical dimension " + std::to_string(d) + " is smaller than the virtual dimension " +
               std::to_string(r);
    return s;
  }
  const SingularSpectrum spec = singular_values(net.site_map(v));
  const auto kappa = condition_number(spec);
  if (!kappa) {
    s.reason = "numerically rank deficient";
    return s;
  }
  s.delta = 1.0 / *kappa;
  s.injective = true;
  return s;
}

inline std::vector<SiteInjectivity> injectivity_report(const PepsNetwork& net) {
  std::vector<SiteInjectivity> out;
  for (std::size_t v = 0; v < net.num_sites(); ++v) out.push_back(site_injectivity(net, v));
  return out;
}

/// min over sites of sigma_min(T_x)/sigma_1(T_x); 0 if any site is not injective.
inline double peps_injectivity(const PepsNetwork& net) {
  double delta = 1.0;
  for (const auto& s : injectivity_report(net)) delta = std::min(delta, s.delta);
  return delta;
}

/// Rescales every tensor so that sigma_1(T_x) = 1.
inline PepsNetwork normalize_sigma1(const PepsNetwork& net) {
  PepsNetwork out = net;
  for (std::size_t v = 0; v < net.num_sites(); ++v) {
    const double s1 = singular_values(net.site_map(v)).largest();
    if (s1 > 0.0) out = out.with_tensor(v, scaled(net.tensor(v), 1.0 / s1));
  }
  return out;
}

/// Builds the canonical site tensor from the matrix of the map virtual -> physical.
inline Tensor site_tensor_from_map(const LatticeGraph& g, std::size_t v, const Eigen::MatrixXcd& map) {
  std::vector<Leg> virt;
  for (std::size_t e : g.incident_edges(v)) virt.push_back({LatticeGraph::edge_label(e), g.edge(e).bond_dim});
  if (static_cast<std::size_t>(map.cols()) != Tensor::volume(virt)) {
    throw ValidationError("site map has the wrong number of columns");
  }
  const Tensor phys_major = from_matrix(map, {{kPhysLeg, static_cast<std::size_t>(map.rows())}}, virt);
  return permute_legs(phys_major, canonical_labels(g, v));
}

/// Network with i.i.d. complex Gaussian entries.
inline PepsNetwork random_gaussian_network(const LatticeGraph& g, std::size_t phys_dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Tensor> tensors;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<Leg> legs;
    for (std::size_t e : g.incident_edges(v)) legs.push_back({LatticeGraph::edge_label(e), g.edge(e).bond_dim});
    legs.push_back({kPhysLeg, phys_dim});
    tensors.push_back(random_tensor(std::move(legs), rng));
  }
  return PepsNetwork(g, std::move(tensors));
}

/*
 * Test-instance factory: T_x = U diag(s) V^dagger with Haar isometry U,
 * Haar unitary V and s linearly spaced from 1 down to delta_target, so every
 * site has sigma_1 = 1 and condition number exactly 1/delta_target.
 * phys_dim = 0 gives each site a physical dimension equal to its virtual
 * dimension.
 */
inline PepsNetwork generate_random_network(const LatticeGraph& g, std::size_t phys_dim, double delta_target,
                                           std::uint64_t seed) {
  if (!(delta_target > 0.0 && delta_target <= 1.0)) throw ValidationError("delta_target must lie in (0, 1]");
  Rng rng(seed);
  std::vector<Tensor> tensors;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::size_t r = 1;
    for (std::size_t e : g.incident_edges(v)) r *= g.edge(e).bond_dim;
    const std::size_t d = phys_dim == 0 ? r : phys_dim;
    if (d < r) {
      throw ValidationError("physical dimension " + std::to_string(d) + " is below the required rank " +
                            std::to_string(r) + " at vertex " + std::to_string(v));
    }
    Eigen::VectorXd s(r);
    for (std::size_t i = 0; i < r; ++i) {
      s(i) = r == 1 ? 1.0 : 1.0 - (1.0 - delta_target) * static_cast<double>(i) / static_cast<double>(r - 1);
    }
    const Eigen::MatrixXcd u = random_isometry(d, r, rng);
    const Eigen::MatrixXcd w = random_unitary(r, rng);
    tensors.push_back(site_tensor_from_map(g, v, u * s.asDiagonal() * w.adjoint()));
  }
  return PepsNetwork(g, std::move(tensors));
}

inline PepsNetwork generate_random_network(std::size_t rows, std::size_t cols, std::size_t bond_dim,
                                           std::size_t phys_dim, double delta_target, std::uint64_t seed) {
  return generate_random_network(LatticeGraph::open_grid(rows, cols, bond_dim), phys_dim, delta_target, seed);
}

}  // namespace pepslab

#endif  // PEPSLAB_PEPS_HPP_
