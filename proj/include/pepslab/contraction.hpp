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

#ifndef PEPSLAB_CONTRACTION_HPP_
#define PEPSLAB_CONTRACTION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pepslab/peps.hpp"
#include "pepslab/tensor.hpp"

namespace pepslab {

/*
 * Site visiting order of the exact contraction.
 *   columns   : left -> right over columns, bottom -> top within a column.
 *   rows      : top -> bottom over rows, left -> right within a row.
 *   vertex_id : ascending vertex id (explicit graphs).
 *   automatic : columns when rows <= cols, rows otherwise; vertex_id for
 *               explicit graphs. Keeps the boundary at the short side.
 */
enum class SweepOrder { automatic, columns, rows, vertex_id };

struct ContractionOptions {
  SweepOrder order = SweepOrder::automatic;
  /// Largest intermediate tensor (entries) the sweep may create. For grids the
  /// intermediate is the boundary between swept and unswept sites.
  double max_boundary = static_cast<double>(1u << 20);
  bool force = false;
};

inline std::vector<std::size_t> sweep_order(const LatticeGraph& g, SweepOrder order) {
  if (!g.is_grid() || order == SweepOrder::vertex_id) {
    std::vector<std::size_t> ids(g.num_vertices());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
  }
  if (order == SweepOrder::automatic) order = g.rows() <= g.cols() ? SweepOrder::columns : SweepOrder::rows;
  std::vector<std::size_t> ids;
  if (order == SweepOrder::columns) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      for (std::size_t r = g.rows(); r-- > 0;) ids.push_back(g.site(r, c));
    }
  } else {
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) ids.push_back(g.site(r, c));
    }
  }
  return ids;
}

inline std::string bra_label(const std::string& label) { return "b:" + label; }

/// Fuses every (b:label, label) pair into one leg named label, bra index major.
inline Tensor fuse_bra_ket(const Tensor& t, const std::vector<std::string>& labels) {
  Tensor out = t;
  for (const auto& l : labels) out = fuse_legs(out, {bra_label(l), l}, l);
  return out;
}

/*
 * Double-layer tensor E_x = sum_{p,p'} conj(T_x[b, p]) O[p, p'] T_x[k, p'] with
 * each edge's (bra, ket) pair fused into one leg of dim D_e^2 labelled by the
 * edge, in canonical order. Without `op` this is T_x^dagger T_x.
 */
inline Tensor double_layer(const PepsNetwork& net, std::size_t site, const Eigen::MatrixXcd* op = nullptr) {
  const Tensor& ket = net.tensor(site);
  const auto virt = virtual_labels(net.graph(), site);
  std::vector<LegPair> bra_names;
  for (const auto& l : virt) bra_names.emplace_back(l, bra_label(l));
  bra_names.emplace_back(kPhysLeg, "bp");
  const Tensor bra = conj(ket).relabeled(bra_names);
  Tensor mid = ket;
  if (op != nullptr) {
    const std::size_t d = net.physical_dim(site);
    if (static_cast<std::size_t>(op->rows()) != d || static_cast<std::size_t>(op->cols()) != d) {
      throw ValidationError("observable factor does not match the physical dimension of site " +
                            std::to_string(site));
    }
    mid = contract(Tensor::matrix(*op, "bp", "opin"), ket, std::vector<LegPair>{{"opin", kPhysLeg}});
  } else {
    mid = ket.relabeled(kPhysLeg, "bp");
  }
  const Tensor e = contract(bra, mid, std::vector<LegPair>{{"bp", "bp"}});
  return fuse_bra_ket(e, virt);
}

/*
 * Joint double layer of the observable's support sites with the observable
 * sandwiched between bra and ket layers. Edges internal to the support are
 * contracted; the remaining fused legs are labelled by edge.
 */
inline Tensor observable_block(const PepsNetwork& net, const Observable& obs) {
  const std::size_t k = obs.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t v = obs.support[i];
    if (v >= net.num_sites()) throw ValidationError("observable support site out of range");
    if (obs.op.dim_of(in_label(i)) != net.physical_dim(v)) {
      throw ValidationError("observable leg dimension does not match site " + std::to_string(v));
    }
  }
  if (k == 1) {
    const Eigen::MatrixXcd m = obs.matrix();
    return double_layer(net, obs.support[0], &m);
  }
  Tensor ket = Tensor::scalar(1.0);
  for (std::size_t i = 0; i < k; ++i) {
    ket = contract_shared(ket, net.tensor(obs.support[i]).relabeled(kPhysLeg, in_label(i)));
  }
  std::vector<LegPair> op_pairs;
  for (std::size_t i = 0; i < k; ++i) op_pairs.emplace_back(in_label(i), in_label(i));
  const Tensor mid = contract(obs.op, ket, op_pairs);

  std::vector<std::string> open;
  std::vector<LegPair> bra_names;
  for (const Leg& l : ket.legs()) {
    if (l.label.rfind("in", 0) == 0) {
      bra_names.emplace_back(l.label, "out" + l.label.substr(2));
    } else {
      open.push_back(l.label);
      bra_names.emplace_back(l.label, bra_label(l.label));
    }
  }
  const Tensor bra = conj(ket).relabeled(bra_names);
  std::vector<LegPair> out_pairs;
  for (std::size_t i = 0; i < k; ++i) out_pairs.emplace_back(out_label(i), out_label(i));
  return fuse_bra_ket(contract(bra, mid, out_pairs), open);
}

/// Peak intermediate size of absorbing `blocks` in sequence.
inline double planned_peak_volume(const std::vector<Tensor>& blocks) {
  std::map<std::string, std::size_t> open;
  double peak = 1.0;
  for (const Tensor& b : blocks) {
    for (const Leg& l : b.legs()) {
      auto it = open.find(l.label);
      if (it != open.end()) {
        open.erase(it);
      } else {
        open.emplace(l.label, l.dim);
      }
    }
    double vol = 1.0;
    for (const auto& [_, d] : open) vol *= static_cast<double>(d);
    peak = std::max(peak, vol);
  }
  return peak;
}

/*
 * Absorbs the blocks one after the other into a running tensor, contracting
 * every label shared with it. Labels shared between two blocks must denote
 * the same bond. Refuses to start when the planned peak exceeds the guard.
 */
inline Tensor contract_in_order(const std::vector<Tensor>& blocks, const ContractionOptions& opts) {
  const double peak = planned_peak_volume(blocks);
  if (peak > opts.max_boundary && !opts.force) {
    throw GuardError("too large for exact contraction: boundary dimension " + std::to_string(peak) +
                     " exceeds the guard " + std::to_string(opts.max_boundary));
  }
  Tensor acc = Tensor::scalar(1.0);
  for (const Tensor& b : blocks) acc = contract_shared(acc, b);
  return acc;
}

/// Closes the fused leg of `label` with the maximally mixed state 1/D.
inline Tensor close_with_mixed(const Tensor& t, const std::string& label, std::size_t bond_dim) {
  std::vector<cplx> v(bond_dim * bond_dim);
  for (std::size_t i = 0; i < bond_dim; ++i) v[i * bond_dim + i] = 1.0 / static_cast<double>(bond_dim);
  const std::size_t dim = v.size();
  return contract(t, Tensor({{"__mix", dim}}, std::move(v)), std::vector<LegPair>{{label, "__mix"}});
}

/*
 * <Psi|O|Psi> (or <Psi|Psi> when obs is null) restricted to `region`, in the
 * double-layer picture with link states (1/sqrt(D)) sum |ii>. Edges leaving
 * the region are closed with the maximally mixed state 1/D_e on the exposed
 * virtual pair. With region = all sites this is the exact value.
 */
inline cplx contract_region(const PepsNetwork& net, const std::vector<std::size_t>& region, const Observable* obs,
                            const ContractionOptions& opts) {
  const LatticeGraph& g = net.graph();
  std::vector<int> in_region(net.num_sites(), 0);
  for (std::size_t v : region) {
    if (v >= net.num_sites()) throw ValidationError("region site out of range");
    in_region[v] = 1;
  }
  std::vector<int> in_support(net.num_sites(), 0);
  if (obs != nullptr) {
    for (std::size_t v : obs->support) {
      if (v >= net.num_sites() || !in_region[v]) throw ValidationError("observable support lies outside the region");
      in_support[v] = 1;
    }
  }

  std::vector<std::size_t> order;
  for (std::size_t v : sweep_order(g, opts.order)) {
    if (in_region[v]) order.push_back(v);
  }

  auto close_boundary = [&](Tensor t) {
    for (const Leg& l : std::vector<Leg>(t.legs())) {
      const std::size_t e = std::stoul(l.label.substr(1));
      const Edge& edge = g.edge(e);
      if (!in_region[edge.u] || !in_region[edge.v]) t = close_with_mixed(t, l.label, edge.bond_dim);
    }
    return t;
  };

  std::vector<Tensor> blocks;
  bool support_done = false;
  for (std::size_t v : order) {
    if (in_support[v]) {
      if (!support_done) blocks.push_back(close_boundary(observable_block(net, *obs)));
      support_done = true;
      continue;
    }
    blocks.push_back(close_boundary(double_layer(net, v)));
  }
  const Tensor result = contract_in_order(blocks, opts);
  double link = 1.0;
  for (const Edge& e : g.edges()) {
    if (in_region[e.u] && in_region[e.v]) link /= static_cast<double>(e.bond_dim);
  }
  return result.value() * link;
}

inline std::vector<std::size_t> all_sites(const PepsNetwork& net) {
  std::vector<std::size_t> s(net.num_sites());
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

/// <Psi|Psi>, exact. Round-off below -1e-12 is clamped to zero.
inline double peps_norm(const PepsNetwork& net, const ContractionOptions& opts = {}) {
  const cplx n = contract_region(net, all_sites(net), nullptr, opts);
  if (n.real() < 0.0) {
    if (n.real() < -1e-12) throw NumericalError("contracted norm is negative: " + std::to_string(n.real()));
    return 0.0;
  }
  return n.real();
}

struct NevResult {
  double value = 0.0;
  /// |Im <O>|; below 1e-10 for Hermitian observables.
  double imag_residue = 0.0;
  double norm = 0.0;
};

inline constexpr double kNullNorm = 1e-300;

inline NevResult nev_from_region(const PepsNetwork& net, const std::vector<std::size_t>& region, const Observable& obs,
                                 const ContractionOptions& opts) {
  const cplx den = contract_region(net, region, nullptr, opts);
  if (std::abs(den) <= kNullNorm) throw NumericalError("state is null: norm " + std::to_string(std::abs(den)));
  const cplx num = contract_region(net, region, &obs, opts);
  const cplx ratio = num / den;
  return {ratio.real(), std::abs(ratio.imag()), den.real()};
}

/// <Psi|O|Psi> / <Psi|Psi>, exact.
inline NevResult peps_nev(const PepsNetwork& net, const Observable& obs, const ContractionOptions& opts = {}) {
  return nev_from_region(net, all_sites(net), obs, opts);
}

enum class Decision { accept, reject, undetermined };

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::accept: return "accept";
    case Decision::reject: return "reject";
    case Decision::undetermined: return "undetermined";
  }
  return "undetermined";
}

/// Promise-gap decision: accept iff value >= 2/3, reject iff value <= 1/3.
inline Decision decide(double value) {
  if (value >= 2.0 / 3.0) return Decision::accept;
  if (value <= 1.0 / 3.0) return Decision::reject;
  return Decision::undetermined;
}

inline Decision decide_nev(const PepsNetwork& net, const Observable& obs, const ContractionOptions& opts = {}) {
  return decide(peps_nev(net, obs, opts).value);
}

inline std::string phys_label(std::size_t v) { return "p" + std::to_string(v); }

/// Full state vector |Psi> as a tensor with legs p0..p{n-1}.
inline Tensor assemble_state(const PepsNetwork& net, double max_volume = static_cast<double>(1u << 22)) {
  std::vector<Tensor> blocks;
  for (std::size_t v : sweep_order(net.graph(), SweepOrder::automatic)) {
    blocks.push_back(net.tensor(v).relabeled(kPhysLeg, phys_label(v)));
  }
  ContractionOptions opts;
  opts.max_boundary = max_volume;
  Tensor psi = contract_in_order(blocks, opts);
  double link = 1.0;
  for (const Edge& e : net.graph().edges()) link /= std::sqrt(static_cast<double>(e.bond_dim));
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < net.num_sites(); ++v) labels.push_back(phys_label(v));
  return scaled(permute_legs(psi, labels), link);
}

/*
 * Patch around the support X: the ring is the border of the rectangle
 * obtained by growing X's bounding box by `radius` in every direction
 * (Chebyshev annulus), the interior is everything strictly inside it.
 */
struct PatchSpec {
  std::vector<std::size_t> center;
  std::size_t radius = 0;
  std::size_t row_min = 0, row_max = 0, col_min = 0, col_max = 0;
  std::vector<std::size_t> ring;
  std::vector<std::size_t> interior;
};

struct BoundingBox {
  std::size_t row_min, row_max, col_min, col_max;
};

inline BoundingBox bounding_box(const LatticeGraph& g, const std::vector<std::size_t>& sites) {
  if (sites.empty()) throw ValidationError("patch center must contain at least one site");
  BoundingBox b{std::numeric_limits<std::size_t>::max(), 0, std::numeric_limits<std::size_t>::max(), 0};
  for (std::size_t v : sites) {
    if (v >= g.num_vertices()) throw ValidationError("patch center site out of range");
    const auto [r, c] = g.coords(v);
    b.row_min = std::min(b.row_min, r);
    b.row_max = std::max(b.row_max, r);
    b.col_min = std::min(b.col_min, c);
    b.col_max = std::max(b.col_max, c);
  }
  return b;
}

inline PatchSpec make_patch(const LatticeGraph& g, const std::vector<std::size_t>& center, std::size_t radius) {
  if (g.geometry() != Geometry::open_grid) throw ValidationError("patches are defined on open grids");
  if (radius == 0) throw ValidationError("patch radius must be positive");
  const BoundingBox b = bounding_box(g, center);
  if (b.row_min < radius || b.col_min < radius || b.row_max + radius >= g.rows() ||
      b.col_max + radius >= g.cols()) {
    throw ValidationError("the ring at radius " + std::to_string(radius) +
                          " exits the lattice; lower the radius");
  }
  PatchSpec p;
  p.center = center;
  p.radius = radius;
  p.row_min = b.row_min - radius;
  p.row_max = b.row_max + radius;
  p.col_min = b.col_min - radius;
  p.col_max = b.col_max + radius;
  for (std::size_t r = p.row_min; r <= p.row_max; ++r) {
    for (std::size_t c = p.col_min; c <= p.col_max; ++c) {
      const bool border = r == p.row_min || r == p.row_max || c == p.col_min || c == p.col_max;
      (border ? p.ring : p.interior).push_back(g.site(r, c));
    }
  }
  return p;
}

/*
 * Patch estimate of <O>: the ring tensors are replaced by the identity and
 * traced out, which leaves every link cut by the ring in the maximally mixed
 * state; only the interior is contracted. When the interior already covers
 * the whole lattice nothing is truncated and the exact value is returned.
 */
inline NevResult patch_nev(const PepsNetwork& net, const Observable& obs, std::size_t radius,
                           const ContractionOptions& opts = {}) {
  const LatticeGraph& g = net.graph();
  if (g.geometry() != Geometry::open_grid) throw ValidationError("patch_nev needs an open grid");
  if (radius == 0) throw ValidationError("patch radius must be positive");
  const BoundingBox b = bounding_box(g, obs.support);
  const std::size_t grow = radius - 1;
  if (b.row_min <= grow && b.col_min <= grow && b.row_max + grow >= g.rows() - 1 &&
      b.col_max + grow >= g.cols() - 1) {
    return peps_nev(net, obs, opts);
  }
  const PatchSpec patch = make_patch(g, obs.support, radius);
  return nev_from_region(net, patch.interior, obs, opts);
}

}  // namespace pepslab

#endif  // PEPSLAB_CONTRACTION_HPP_
