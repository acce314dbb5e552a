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

#ifndef PEPSLAB_PARENT_HAMILTONIAN_HPP_
#define PEPSLAB_PARENT_HAMILTONIAN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pepslab/contraction.hpp"
#include "pepslab/linalg.hpp"
#include "pepslab/peps.hpp"
#include "pepslab/random.hpp"

namespace pepslab {

/*
 * Left inverse of a site tensor viewed as the map virtual -> physical.
 * The result carries the same labels with the roles swapped: contracting
 * its "phys" leg with the tensor's "phys" leg gives the identity on the
 * virtual legs.
 */
inline Tensor pseudo_inverse(const Tensor& t, const std::string& phys = kPhysLeg) {
  std::vector<Leg> virt;
  for (const Leg& l : t.legs()) {
    if (l.label != phys) virt.push_back(l);
  }
  std::vector<std::string> virt_labels;
  for (const Leg& l : virt) virt_labels.push_back(l.label);
  const Eigen::MatrixXcd m = to_matrix(t, {phys}, virt_labels);
  const Eigen::MatrixXcd inv = left_inverse(m);
  return from_matrix(inv, virt, {{phys, t.dim_of(phys)}});
}

/// Two-site operator h_e on H_x (x)  H_y with legs out0, out1, in0, in1; x = edge.u.
struct ParentTerm {
  std::size_t edge = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  Tensor op;

  Eigen::MatrixXcd matrix() const { return to_matrix(op, {"out0", "out1"}, {"in0", "in1"}); }
};

/*
 * h_e = (P_x (x) P_y)^dagger (1 - |phi_e><phi_e|) (P_x (x) P_y) with P the
 * left inverses. The projector acts on the e pair only, so
 * h_e = G_x (x) G_y - B^dagger B, where G = P^dagger P and B is P_x (x) P_y with
 * the e pair contracted against <phi_e|.
 */
inline ParentTerm parent_term(const PepsNetwork& net, std::size_t e) {
  const LatticeGraph& g = net.graph();
  const Edge& edge = g.edge(e);
  const std::size_t x = edge.u, y = edge.v;
  const std::string el = LatticeGraph::edge_label(e);

  auto tagged = [&](std::size_t v, const std::string& tag) {
    Tensor p;
    try {
      p = pseudo_inverse(net.tensor(v));
    } catch (const NonInjectiveError& err) {
      throw NonInjectiveError("site " + std::to_string(v) + " is not injective: " + err.what());
    }
    std::vector<LegPair> names;
    for (const auto& l : virtual_labels(g, v)) names.emplace_back(l, l + tag);
    names.emplace_back(kPhysLeg, "in" + tag);
    return p.relabeled(names);
  };
  const Tensor px = tagged(x, "0");
  const Tensor py = tagged(y, "1");

  // G_x (x) G_y
  auto gram = [&](const Tensor& p, const std::string& idx) {
    const Eigen::MatrixXcd m = to_matrix(p, [&] {
      std::vector<std::string> r;
      for (const Leg& l : p.legs()) {
        if (l.label != "in" + idx) r.push_back(l.label);
      }
      return r;
    }(), {"in" + idx});
    return Eigen::MatrixXcd(m.adjoint() * m);
  };
  const Eigen::MatrixXcd gx = gram(px, "0");
  const Eigen::MatrixXcd gy = gram(py, "1");
  Eigen::MatrixXcd h = kron(gx, gy);

  // B = <phi_e| (P_x (x) P_y): contract e0 with e1 and scale by 1/sqrt(D).
  const Tensor b = scaled(contract(px, py, std::vector<LegPair>{{el + "0", el + "1"}}),
                          1.0 / std::sqrt(static_cast<double>(edge.bond_dim)));
  std::vector<std::string> rest;
  for (const Leg& l : b.legs()) {
    if (l.label != "in0" && l.label != "in1") rest.push_back(l.label);
  }
  const Eigen::MatrixXcd bm = to_matrix(b, rest, {"in0", "in1"});
  h -= bm.adjoint() * bm;
  h = (h + h.adjoint()).eval() / 2.0;

  const std::size_t dx = net.physical_dim(x), dy = net.physical_dim(y);
  ParentTerm term;
  term.edge = e;
  term.x = x;
  term.y = y;
  term.op = from_matrix(h, {{"out0", dx}, {"out1", dy}}, {{"in0", dx}, {"in1", dy}});
  return term;
}

inline std::vector<ParentTerm> parent_terms(const PepsNetwork& net) {
  std::vector<ParentTerm> terms;
  for (std::size_t e = 0; e < net.graph().edges().size(); ++e) terms.push_back(parent_term(net, e));
  return terms;
}

/*
 * H = sum_e h_e as a matrix-free operator on the full physical space
 * (site 0 most significant). Never materializes more than one two-site
 * block at a time.
 */
class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(const PepsNetwork& net) : HamiltonianOperator(net, parent_terms(net)) {}

  HamiltonianOperator(const PepsNetwork& net, std::vector<ParentTerm> terms) : terms_(std::move(terms)) {
    const std::size_t n = net.num_sites();
    dims_.resize(n);
    strides_.resize(n);
    dim_ = 1;
    for (std::size_t v = n; v-- > 0;) {
      dims_[v] = net.physical_dim(v);
      strides_[v] = dim_;
      if (dim_ > (std::size_t{1} << 40) / dims_[v]) throw GuardError("physical space too large");
      dim_ *= dims_[v];
    }
    for (const auto& t : terms_) {
      mats_.push_back(t.matrix());
      const std::size_t dx = dims_[t.x], dy = dims_[t.y], sx = strides_[t.x], sy = strides_[t.y];
      std::vector<std::size_t> offs;
      for (std::size_t a = 0; a < dx; ++a) {
        for (std::size_t b = 0; b < dy; ++b) offs.push_back(a * sx + b * sy);
      }
      std::vector<std::size_t> bases;
      for (std::size_t base = 0; base < dim_; ++base) {
        if ((base / sx) % dx == 0 && (base / sy) % dy == 0) bases.push_back(base);
      }
      offsets_.push_back(std::move(offs));
      bases_.push_back(std::move(bases));
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<ParentTerm>& terms() const { return terms_; }

  /// y = H x, column by column.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
    for (std::size_t k = 0; k < terms_.size(); ++k) apply_term(k, x, y);
    return y;
  }

  /// Adds h_k x to y: one gather, one GEMM, one scatter.
  void apply_term(std::size_t k, const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const {
    const Eigen::MatrixXcd& h = mats_[k];
    const auto& offs = offsets_[k];
    const auto& bases = bases_[k];
    const Eigen::Index local = static_cast<Eigen::Index>(offs.size());
    const Eigen::Index c = x.cols();
    const auto nb = static_cast<Eigen::Index>(bases.size());
    Eigen::MatrixXcd in(local, nb * c);
    for (Eigen::Index col = 0; col < c; ++col) {
      const cplx* src = x.col(col).data();
      for (Eigen::Index j = 0; j < nb; ++j) {
        cplx* dst = in.col(col * nb + j).data();
        for (Eigen::Index i = 0; i < local; ++i) dst[i] = src[bases[static_cast<std::size_t>(j)] + offs[static_cast<std::size_t>(i)]];
      }
    }
    const Eigen::MatrixXcd out = h * in;
    for (Eigen::Index col = 0; col < c; ++col) {
      cplx* dst = y.col(col).data();
      for (Eigen::Index j = 0; j < nb; ++j) {
        const cplx* src = out.col(col * nb + j).data();
        for (Eigen::Index i = 0; i < local; ++i) dst[bases[static_cast<std::size_t>(j)] + offs[static_cast<std::size_t>(i)]] += src[i];
      }
    }
  }

  double max_term_norm() const {
    double m = 0.0;
    for (const auto& h : mats_) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
      m = std::max(m, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return m;
  }

 private:
  std::vector<ParentTerm> terms_;
  std::vector<Eigen::MatrixXcd> mats_;
  // per term: offsets of the local block and the base index of every block
  std::vector<std::vector<std::size_t>> offsets_;
  std::vector<std::vector<std::size_t>> bases_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
};

inline constexpr std::size_t kDenseHamiltonianGuard = 4096;

/// Dense H. Default guard 4096; `force` lifts it.
inline Eigen::MatrixXcd assemble_hamiltonian(const PepsNetwork& net, bool force = false) {
  const HamiltonianOperator op(net);
  if (op.dim() > kDenseHamiltonianGuard && !force) {
    throw GuardError("dense Hamiltonian of dimension " + std::to_string(op.dim()) + " exceeds the guard " +
                     std::to_string(kDenseHamiltonianGuard));
  }
  const Eigen::MatrixXcd h = op.apply(Eigen::MatrixXcd::Identity(op.dim(), op.dim()));
  return (h + h.adjoint()) / 2.0;
}

struct EigenPairs {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;
  std::size_t iterations = 0;
};

struct KrylovOptions {
  std::size_t block = 4;
  std::size_t max_basis = 160;
  std::size_t max_iterations = 2000;
  /// Residual tolerance relative to the largest Ritz value seen.
  double tolerance = 1e-10;
  std::uint64_t seed = kDefaultSeed;
};

/*
 * Lowest k eigenpairs of a Hermitian operator given only its action on
 * blocks of vectors. Block Krylov expansion with the Ritz residuals,
 * full reorthogonalization and thick restart onto the lowest Ritz vectors.
 */
template <typename Apply>
EigenPairs lowest_eigenpairs(const Apply& apply, std::size_t n, std::size_t k, const KrylovOptions& opts = {}) {
  if (k == 0 || k > n) throw ValidationError("requested eigenpair count out of range");
  const auto ni = static_cast<Eigen::Index>(n);
  const std::size_t b = std::max(opts.block, k);
  const auto cap = static_cast<Eigen::Index>(std::min<std::size_t>(n, std::max(opts.max_basis, 3 * b)));
  Rng rng(opts.seed);
  // Basis V, its image HV and V^dagger H V; only the first `used` columns are live.
  Eigen::MatrixXcd v(ni, cap), av(ni, cap), hs(cap, cap);
  Eigen::Index used = 0;
  Eigen::MatrixXcd x = random_gaussian_matrix(n, b, rng);
  double scale = 1.0;
  EigenPairs out;

  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    // Orthogonalize the new block against the basis (twice), then within itself.
    const Eigen::VectorXd before = x.colwise().norm().transpose();
    if (used > 0) {
      x -= v.leftCols(used) * (v.leftCols(used).adjoint() * x);
      // A second pass only when the first one cancelled most of the block.
      if ((x.colwise().norm().transpose().array() < 0.5 * before.array()).any()) {
        x -= v.leftCols(used) * (v.leftCols(used).adjoint() * x);
      }
    }
    Eigen::Index add = 0;
    for (Eigen::Index j = 0; j < x.cols() && used + add < cap; ++j) {
      Eigen::VectorXcd c = x.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < add; ++i) c -= v.col(used + i) * v.col(used + i).dot(c);
      }
      const double after = c.norm();
      if (after > 1e-10 * before(j) && after > 0.0) v.col(used + add++) = c / after;
    }
    if (add == 0) {
      if (used >= ni) break;
      x = random_gaussian_matrix(n, b, rng);
      continue;
    }
    av.middleCols(used, add) = apply(Eigen::MatrixXcd(v.middleCols(used, add)));
    const Eigen::MatrixXcd cross = v.leftCols(used + add).adjoint() * av.middleCols(used, add);
    hs.block(0, used, used + add, add) = cross;
    hs.block(used, 0, add, used) = cross.topRows(used).adjoint();
    hs.block(used, used, add, add) = (cross.bottomRows(add) + cross.bottomRows(add).adjoint()) / 2.0;
    used += add;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs.topLeftCorner(used, used));
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXcd& y = es.eigenvectors();
    scale = std::max(scale, theta.cwiseAbs().maxCoeff());

    const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(b), used);
    const Eigen::MatrixXcd u = v.leftCols(used) * y.leftCols(m);
    Eigen::MatrixXcd r = av.leftCols(used) * y.leftCols(m) - u * theta.head(m).asDiagonal();
    bool converged = static_cast<std::size_t>(m) >= k;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k) && j < m; ++j) {
      if (r.col(j).norm() > opts.tolerance * scale) converged = false;
    }
    out.iterations = it + 1;
    if (converged || used >= ni) {
      out.values.assign(theta.data(), theta.data() + k);
      out.vectors = u.leftCols(static_cast<Eigen::Index>(k));
      return out;
    }
    if (used + static_cast<Eigen::Index>(b) > cap) {
      // Thick restart onto the lowest Ritz vectors.
      const Eigen::Index keep = std::min<Eigen::Index>(2 * static_cast<Eigen::Index>(b), used);
      const Eigen::MatrixXcd nv = v.leftCols(used) * y.leftCols(keep);
      const Eigen::MatrixXcd nav = av.leftCols(used) * y.leftCols(keep);
      v.leftCols(keep) = nv;
      av.leftCols(keep) = nav;
      hs.topLeftCorner(keep, keep) = theta.head(keep).cast<cplx>().asDiagonal();
      used = keep;
    }
    x = r;
  }
  throw NumericalError("eigensolver did not converge");
}

/// Lowest k eigenpairs of a dense Hermitian matrix.
inline EigenPairs lowest_eigenpairs_dense(const Eigen::MatrixXcd& h, std::size_t k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  EigenPairs out;
  k = std::min<std::size_t>(k, static_cast<std::size_t>(h.rows()));
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  out.vectors = es.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  return out;
}

struct SpectrumReport {
  std::vector<double> eigenvalues;
  std::size_t degeneracy = 0;
  double gap = 0.0;
  /// Weight of the PEPS in the ground space, |<Psi|P_0|Psi>| / <Psi|Psi>.
  double overlap = 0.0;
  double max_term_norm = 0.0;
  /// gap / max_term_norm, i.e. the gap with every term scaled to norm <= 1.
  double normalized_gap = 0.0;
  /// <Psi|H|Psi> / <Psi|Psi>.
  double peps_energy = 0.0;
  /// Smallest eigenvalue over all individual terms.
  double min_term_eigenvalue = 0.0;
};

inline constexpr double kDegeneracyTolerance = 1e-8;

/// Largest physical dimension handled by the matrix-free solver without `force`.
inline constexpr std::size_t kMatrixFreeGuard = std::size_t{1} << 17;

inline SpectrumReport spectrum_report(const PepsNetwork& net, std::size_t k = 4, bool force_dense = false,
                                      const KrylovOptions& kopts = {}, bool force = false) {
  const HamiltonianOperator op(net);
  const std::size_t n = op.dim();
  if (n > kMatrixFreeGuard && !force) {
    throw GuardError("physical dimension " + std::to_string(n) + " exceeds the eigensolver guard " +
                     std::to_string(kMatrixFreeGuard));
  }
  k = std::max<std::size_t>(2, std::min(k, n));
  if (n < 2) throw ValidationError("spectrum needs a physical space of dimension >= 2");

  EigenPairs ep;
  if (n <= kDenseHamiltonianGuard || force_dense) {
    ep = lowest_eigenpairs_dense(assemble_hamiltonian(net, true), k);
  } else {
    ep = lowest_eigenpairs([&](const Eigen::MatrixXcd& x) { return op.apply(x); }, n, k, kopts);
  }

  SpectrumReport rep;
  rep.eigenvalues = ep.values;
  rep.degeneracy = 0;
  for (double e : ep.values) {
    if (e - ep.values.front() <= kDegeneracyTolerance) ++rep.degeneracy;
  }
  rep.gap = ep.values[std::min(rep.degeneracy, ep.values.size() - 1)] - ep.values.front();
  if (rep.degeneracy == ep.values.size()) rep.gap = 0.0;

  const Tensor psi_t = assemble_state(net, force ? std::numeric_limits<double>::infinity() : static_cast<double>(1u << 22));
  const Eigen::Map<const Eigen::VectorXcd> psi(psi_t.data().data(), static_cast<Eigen::Index>(psi_t.size()));
  const double nn = psi.squaredNorm();
  if (nn <= kNullNorm) throw NumericalError("state is null");
  double w = 0.0;
  for (std::size_t j = 0; j < rep.degeneracy; ++j) w += std::norm(ep.vectors.col(static_cast<Eigen::Index>(j)).dot(psi));
  rep.overlap = w / nn;
  const Eigen::MatrixXcd hpsi = op.apply(Eigen::MatrixXcd(psi));
  rep.peps_energy = psi.dot(hpsi.col(0)).real() / nn;

  rep.max_term_norm = op.max_term_norm();
  rep.normalized_gap = rep.max_term_norm > 0.0 ? rep.gap / rep.max_term_norm : 0.0;
  rep.min_term_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& t : op.terms()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.matrix(), Eigen::EigenvaluesOnly);
    rep.min_term_eigenvalue = std::min(rep.min_term_eigenvalue, es.eigenvalues()(0));
  }
  if (op.terms().empty()) rep.min_term_eigenvalue = 0.0;
  return rep;
}

}  // namespace pepslab

#endif  // PEPSLAB_PARENT_HAMILTONIAN_HPP_
