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

#ifndef PEPSLAB_NOISY_SIM_HPP_
#define PEPSLAB_NOISY_SIM_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pepslab/channel.hpp"
#include "pepslab/circuit.hpp"
#include "pepslab/circuit_embed.hpp"

namespace pepslab {

inline constexpr std::size_t kMaxSimWires = 10;

/// n-wire density matrix, wire 0 most significant; may be subnormalized.
struct DensityState {
  std::size_t wires = 0;
  Eigen::MatrixXcd rho;

  static DensityState basis(const std::string& bits) {
    if (bits.empty() || bits.size() > kMaxSimWires) {
      throw GuardError("simulation supports 1 to " + std::to_string(kMaxSimWires) + " wires");
    }
    std::size_t idx = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw ValidationError("input must be a string of 0 and 1");
      idx = 2 * idx + static_cast<std::size_t>(ch - '0');
    }
    DensityState s;
    s.wires = bits.size();
    const auto n = Eigen::Index{1} << bits.size();
    s.rho = Eigen::MatrixXcd::Zero(n, n);
    s.rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
    return s;
  }

  double trace() const { return rho.trace().real(); }
};

/// K acting on wires [first, first + k) applied from the left: returns (1 (x) K (x) 1) m.
inline Eigen::MatrixXcd left_apply(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& k, std::size_t first,
                                   std::size_t nk, std::size_t n) {
  const std::size_t s = std::size_t{1} << nk;
  const std::size_t low = std::size_t{1} << (n - first - nk);
  const std::size_t high = std::size_t{1} << first;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (std::size_t h = 0; h < high; ++h) {
    for (std::size_t l = 0; l < low; ++l) {
      const std::size_t base = h * s * low + l;
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          const cplx kij = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (kij == cplx{0.0, 0.0}) continue;
          out.row(static_cast<Eigen::Index>(base + i * low)) += kij * m.row(static_cast<Eigen::Index>(base + j * low));
        }
      }
    }
  }
  return out;
}

/// sum_K K rho K^dagger on wires [first, first + nk).
inline Eigen::MatrixXcd apply_kraus(const Eigen::MatrixXcd& rho, const std::vector<Eigen::MatrixXcd>& kraus,
                                    std::size_t first, std::size_t nk, std::size_t n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) {
    const Eigen::MatrixXcd kr = left_apply(rho, k, first, nk, n);
    out += left_apply(Eigen::MatrixXcd(kr.adjoint()), k, first, nk, n).adjoint();
  }
  return out;
}

/// tr_{wires}[rho] (x) 1/2^nk, placed back on the same wires.
inline Eigen::MatrixXcd replace_with_mixed(const Eigen::MatrixXcd& rho, std::size_t first, std::size_t nk,
                                           std::size_t n) {
  const std::size_t s = std::size_t{1} << nk;
  std::vector<Eigen::MatrixXcd> units;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) units.push_back(matrix_unit(s, i, j));
  }
  return apply_kraus(rho, units, first, nk, n) / static_cast<double>(s);
}

/// rho <- (1 - eta) sum K rho K^dagger + eta tr_loc[rho] (x) 1/d on the given wires.
inline Eigen::MatrixXcd apply_noisy_kraus(const Eigen::MatrixXcd& rho, const std::vector<Eigen::MatrixXcd>& kraus,
                                          double eta, std::size_t first, std::size_t nk, std::size_t n) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  Eigen::MatrixXcd out = (1.0 - eta) * apply_kraus(rho, kraus, first, nk, n);
  if (eta > 0.0) out += eta * replace_with_mixed(rho, first, nk, n);
  return out;
}

/// Single gate followed by depolarizing noise on the wires it touches
/// (1/4 for unitary2, 1/2 for single-wire gates).
inline DensityState apply_noisy_gate(const DensityState& s, const Gate& g, double eta) {
  if (g.wire + g.span() > s.wires) throw ValidationError("gate wire out of range");
  DensityState out = s;
  out.rho = apply_noisy_kraus(s.rho, gate_channel(g).kraus(), eta, g.wire, g.span(), s.wires);
  return out;
}

/*
 * How a cell's channel is normalized before the noise is mixed in.
 *   trace_preserving : the gate's own Kraus set, with the rate converted by
 *                      physical_eta so the result matches a compiled cell.
 *   hilbert_schmidt  : Kraus operators scaled to unit HS norm, noise rate
 *                      eta used as is; this is the channel a compiled
 *                      cell realizes up to a positive factor.
 */
enum class ChannelNormalization { trace_preserving, hilbert_schmidt };

inline DensityState apply_noisy_cell(const DensityState& s, const Cell& cell, double eta,
                                     ChannelNormalization mode) {
  DensityState out = s;
  if (mode == ChannelNormalization::hilbert_schmidt) {
    out.rho = apply_noisy_kraus(s.rho, hs_normalized(cell.channel()).kraus(), eta, cell.wire, 2, s.wires);
  } else {
    out.rho = apply_noisy_kraus(s.rho, cell.kraus, physical_eta(eta, cell.hs_norm2()), cell.wire, 2, s.wires);
  }
  return out;
}

/// Runs the circuit cell by cell (same layout as compile_circuit) from a
/// basis input; wires outside any cell are passed through noiselessly.
inline DensityState run_noisy_circuit(const Circuit& c, double eta, const std::string& input,
                                      ChannelNormalization mode = ChannelNormalization::trace_preserving) {
  if (c.width() > kMaxSimWires) throw GuardError("simulation is limited to " + std::to_string(kMaxSimWires) + " wires");
  if (input.size() != c.width()) throw ValidationError("input string length must equal the circuit width");
  DensityState s = DensityState::basis(input);
  for (std::size_t t = 0; t < c.depth(); ++t) {
    for (const Cell& cell : layer_cells(c, t)) s = apply_noisy_cell(s, cell, eta, mode);
  }
  return s;
}

/// Reduced density matrix of one wire.
inline Eigen::MatrixXcd reduced_wire(const DensityState& s, std::size_t wire) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2, 2);
  const std::size_t n = s.wires;
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bit = std::size_t{1} << (n - 1 - wire);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & ~bit) != (j & ~bit)) continue;
      r((i & bit) ? 1 : 0, (j & bit) ? 1 : 0) += s.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return r;
}

/// tr[O rho] / tr[rho] for a single-wire observable.
inline double wire_expectation(const DensityState& s, std::size_t wire, const Eigen::MatrixXcd& op) {
  const double tr = s.trace();
  if (std::abs(tr) <= 1e-300) throw NumericalError("state has zero trace");
  return (op * reduced_wire(s, wire)).trace().real() / tr;
}

/*
 * tr[O rho]/tr[rho] for O acting on the listed wires, first wire most
 * significant in O's row index.
 */
inline double wires_expectation(const DensityState& s, const std::vector<std::size_t>& wires,
                                const Eigen::MatrixXcd& op) {
  const std::size_t k = wires.size();
  const std::size_t sub = std::size_t{1} << k;
  if (k == 0 || op.rows() != static_cast<Eigen::Index>(sub) || op.cols() != static_cast<Eigen::Index>(sub)) {
    throw ValidationError("observable dimension does not match its wires");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (wires[i] >= s.wires) throw ValidationError("observable wire out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (wires[i] == wires[j]) throw ValidationError("observable wires must be distinct");
    }
  }
  const double tr = s.trace();
  if (std::abs(tr) <= 1e-300) throw NumericalError("state has zero trace");
  const std::size_t n = s.wires, dim = std::size_t{1} << n;
  auto local = [&](std::size_t x) {
    std::size_t a = 0;
    for (std::size_t i = 0; i < k; ++i) a = 2 * a + ((x >> (n - 1 - wires[i])) & 1);
    return a;
  };
  std::size_t mask = 0;
  for (std::size_t w : wires) mask |= std::size_t{1} << (n - 1 - w);
  // sum over x, y agreeing outside the support of O[a(x), a(y)] rho[y, x]
  cplx acc = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      if ((x & ~mask) != (y & ~mask)) continue;
      acc += op(static_cast<Eigen::Index>(local(x)), static_cast<Eigen::Index>(local(y))) *
             s.rho(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
    }
  }
  return acc.real() / tr;
}

/// Traces out one wire.
inline DensityState trace_out(const DensityState& s, std::size_t wire) {
  const std::size_t n = s.wires;
  const std::size_t low = std::size_t{1} << (n - 1 - wire);
  const std::size_t dim = std::size_t{1} << (n - 1);
  DensityState out;
  out.wires = n - 1;
  out.rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto expand = [&](std::size_t r, std::size_t b) { return (r / low) * 2 * low + b * low + r % low; };
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      cplx v = 0.0;
      for (std::size_t b = 0; b < 2; ++b) {
        v += s.rho(static_cast<Eigen::Index>(expand(i, b)), static_cast<Eigen::Index>(expand(j, b)));
      }
      out.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

/// Appends a wire in |0> after the last one.
inline DensityState append_zero_wire(const DensityState& s) {
  if (s.wires + 1 > kMaxSimWires) throw GuardError("simulation is limited to " + std::to_string(kMaxSimWires) + " wires");
  DensityState out;
  out.wires = s.wires + 1;
  out.rho = kron(s.rho, matrix_unit(2, 0, 0));
  return out;
}

inline Eigen::MatrixXcd cnot_matrix() {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

/// Unitary on two arbitrary wires (control-major ordering of the 4x4 matrix).
inline Eigen::MatrixXcd apply_two_wire_unitary(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u,
                                               std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t ba = std::size_t{1} << (n - 1 - a), bb = std::size_t{1} << (n - 1 - b);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t in = ((col & ba) ? 2 : 0) + ((col & bb) ? 1 : 0);
    const std::size_t rest = col & ~(ba | bb);
    for (std::size_t o = 0; o < 4; ++o) {
      const std::size_t row = rest | ((o & 2) ? ba : 0) | ((o & 1) ? bb : 0);
      full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          u(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(in));
    }
  }
  return full * rho * full.adjoint();
}

/// eps_0, eps_1 real by construction; eps_01 complex.
struct ProjectionErrorCoeffs {
  double eps0 = 0.0;
  double eps1 = 0.0;
  cplx eps01 = 0.0;
};

/*
 * Traces of the noisy projection after V on |0><0|, |1><1| and |0><1|.
 * The projection is the two-qubit cell project0 (x) identity with noise
 * eta tr[rho] 1/4, applied with the partner wire in |0>, then traced.
 */
inline ProjectionErrorCoeffs projection_error_coeffs(const QuantumChannel& v, double eta) {
  if (v.dim() != 2) throw ValidationError("V must act on one qubit");
  if (!v.is_trace_preserving(1e-10)) throw ValidationError("V must be trace preserving");
  std::vector<Eigen::MatrixXcd> proj;
  for (const auto& k : single_wire_kraus(GateKind::project0)) proj.push_back(kron(k, Eigen::MatrixXcd::Identity(2, 2)));
  auto traced = [&](std::size_t i, std::size_t j) {
    const Eigen::MatrixXcd in = kron(v.apply(matrix_unit(2, i, j)), matrix_unit(2, 0, 0));
    return apply_noisy_kraus(in, proj, eta, 0, 2, 2).trace();
  };
  ProjectionErrorCoeffs c;
  c.eps0 = 1.0 - traced(0, 0).real();
  c.eps1 = traced(1, 1).real();
  c.eps01 = traced(0, 1);
  return c;
}

struct PostselectionOptions {
  /// Noise rate of the circuit cells.
  double circuit_eta = 0.0;
  /// Noise rate of each noisy projection.
  double projection_eta = 0.0;
  std::size_t copies = 1;
  /// Computational-basis input; all zeros when empty.
  std::string input;
  /// Single-qubit decoding channel applied to the postselection copies and
  /// the output wire before projecting; identity when unset.
  std::optional<QuantumChannel> decoding;
  ChannelNormalization normalization = ChannelNormalization::trace_preserving;
};

struct PostselectionResult {
  double expectation = 0.0;
  double residual_trace = 0.0;
  /// Reduced (subnormalized) state of the output wire.
  Eigen::MatrixXcd output_state;
};

inline constexpr std::size_t kPostselectWire = 0;
inline constexpr std::size_t kOutputWire = 1;

/*
 * Postselected run: circuit with noise circuit_eta from the input, a
 * noiseless CNOT layer copying wire 0 onto m-1 fresh ancillas, optional
 * decoding channel, then on each of the m copies the noisy projection
 * rho <- (1 - eta) <0|rho|0> + eta tr_q[rho]. Returns tr[O rho]/tr[rho] for
 * O on wire 1.
 */
inline PostselectionResult postselected_expectation(const Circuit& c, const PostselectionOptions& opts,
                                                    const Eigen::MatrixXcd& op) {
  if (opts.copies == 0) throw ValidationError("copies must be at least 1");
  if (c.width() < 2) throw ValidationError("postselection needs at least two wires");
  if (c.width() + opts.copies - 1 > kMaxSimWires) {
    throw GuardError("circuit width plus copies exceeds " + std::to_string(kMaxSimWires) + " wires");
  }
  if (op.rows() != 2 || op.cols() != 2) throw ValidationError("observable must be 2x2");
  if (!(opts.projection_eta >= 0.0 && opts.projection_eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  const std::string input = opts.input.empty() ? std::string(c.width(), '0') : opts.input;
  DensityState s = run_noisy_circuit(c, opts.circuit_eta, input, opts.normalization);
  const std::size_t n0 = c.width();
  for (std::size_t k = 1; k < opts.copies; ++k) {
    s = append_zero_wire(s);
    s.rho = apply_two_wire_unitary(s.rho, cnot_matrix(), kPostselectWire, s.wires - 1, s.wires);
  }
  std::vector<std::size_t> post{kPostselectWire};
  for (std::size_t k = 1; k < opts.copies; ++k) post.push_back(n0 + k - 1);
  if (opts.decoding) {
    if (opts.decoding->dim() != 2) throw ValidationError("decoding channel must act on one qubit");
    for (std::size_t w : post) s.rho = apply_kraus(s.rho, opts.decoding->kraus(), w, 1, s.wires);
    s.rho = apply_kraus(s.rho, opts.decoding->kraus(), kOutputWire, 1, s.wires);
  }
  // Project from the highest wire down so earlier indices stay valid.
  std::sort(post.begin(), post.end(), std::greater<>());
  for (std::size_t w : post) {
    DensityState kept = s;
    kept.rho = apply_kraus(s.rho, {matrix_unit(2, 0, 0)}, w, 1, s.wires);
    const DensityState a = trace_out(kept, w);
    const DensityState b = trace_out(s, w);
    s.wires = a.wires;
    s.rho = (1.0 - opts.projection_eta) * a.rho + opts.projection_eta * b.rho;
  }
  // Wire 0 is gone; the output wire is now index 0.
  PostselectionResult r;
  r.residual_trace = s.trace();
  r.output_state = reduced_wire(s, kOutputWire - 1);
  if (r.residual_trace <= 1e-300) throw NumericalError("postselection annihilated state");
  r.expectation = (op * r.output_state).trace().real() / r.residual_trace;
  return r;
}

}  // namespace pepslab

#endif  // PEPSLAB_NOISY_SIM_HPP_
