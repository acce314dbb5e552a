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

#ifndef PEPSLAB_CIRCUIT_EMBED_HPP_
#define PEPSLAB_CIRCUIT_EMBED_HPP_

#include <array>
#include <cmath>
#include <optional>
#include <map>
#include <string>
#include <vector>

#include "pepslab/channel.hpp"
#include "pepslab/circuit.hpp"
#include "pepslab/peps.hpp"
#include "pepslab/tensor.hpp"

namespace pepslab {

inline constexpr std::size_t kCellDim = 4;
inline constexpr std::size_t kCellPhysDim = 16;

/// eta = 4 delta^2 / (1 + 3 delta^2).
inline double eta_from_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in [0, 1]");
  return 4.0 * delta * delta / (1.0 + 3.0 * delta * delta);
}

/// Depolarizing rate seen by a cell whose ideal Kraus operators have squared
/// HS norm n_g, once the channel is compared with the gate itself rather
/// than its HS-normalized version: n_g eta / (1 + (n_g - 1) eta).
inline double physical_eta(double eta, double hs_norm2) {
  return hs_norm2 * eta / (1.0 + (hs_norm2 - 1.0) * eta);
}

/*
 * Site tensor of a cell with legs (out0, out1, in0, in1, phys):
 * T[a; out, in] = c_a conj(K_a[out, in]) where {K_a} is the HS-orthonormal
 * completion of the cell's Kraus set, c_a = 1 for the first m+1 operators
 * and delta for the rest. As a map virtual -> physical its singular values
 * are exactly the c_a.
 */
inline Tensor build_site_tensor(const std::vector<Eigen::MatrixXcd>& kraus, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  for (const auto& k : kraus) {
    if (k.rows() != 4 || k.cols() != 4) throw ValidationError("cell Kraus operators must be 4x4");
  }
  const auto basis = kraus_orthonormal_completion(kraus);
  Tensor t = Tensor::zeros({{kPhysLeg, kCellPhysDim}, {"out0", 2}, {"out1", 2}, {"in0", 2}, {"in1", 2}});
  auto data = t.data();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const double c = a < kraus.size() ? 1.0 : delta;
    for (Eigen::Index o = 0; o < 4; ++o) {
      for (Eigen::Index i = 0; i < 4; ++i) {
        data[a * 16 + static_cast<std::size_t>(o * 4 + i)] = c * std::conj(basis[a](o, i));
      }
    }
  }
  return permute_legs(t, std::vector<std::string>{"out0", "out1", "in0", "in1", kPhysLeg});
}

inline Tensor build_site_tensor(const Gate& gate, double delta) {
  if (gate.kind == GateKind::unitary2) return build_site_tensor(std::vector<Eigen::MatrixXcd>{gate.matrix}, delta);
  std::vector<Eigen::MatrixXcd> ks;
  for (const auto& k : single_wire_kraus(gate.kind)) {
    for (const auto& id : single_wire_kraus(GateKind::identity)) ks.push_back(kron(k, id));
  }
  return build_site_tensor(ks, delta);
}

/// Map virtual (out, in) -> phys of a cell tensor as a 16 x 16 matrix.
inline Eigen::MatrixXcd cell_map(const Tensor& t) {
  return to_matrix(t, {kPhysLeg}, {"out0", "out1", "in0", "in1"});
}

/*
 * Channel acting in the virtual space once the physical leg is traced out:
 * Kraus operators are the conjugated rows of the cell tensor, reshaped to
 * 4x4 (out, in).
 */
inline QuantumChannel effective_channel(const Tensor& t) {
  for (const char* l : {"out0", "out1", "in0", "in1"}) {
    if (!t.has_leg(l) || t.dim_of(l) != 2) throw ValidationError("malformed cell tensor");
  }
  if (!t.has_leg(kPhysLeg) || t.rank() != 5) throw ValidationError("malformed cell tensor");
  const Eigen::MatrixXcd m = cell_map(t);
  std::vector<Eigen::MatrixXcd> ks;
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    Eigen::MatrixXcd k(4, 4);
    for (Eigen::Index o = 0; o < 4; ++o) {
      for (Eigen::Index i = 0; i < 4; ++i) k(o, i) = std::conj(m(a, o * 4 + i));
    }
    ks.push_back(k);
  }
  return QuantumChannel(4, std::move(ks));
}

struct CompiledCell {
  Cell cell;
  std::size_t vertex = 0;
  /// Whether in0/in1 were closed with |0> (first cell on that wire).
  bool input_closed[2] = {false, false};
  bool readout = false;
};

struct CompiledCircuit {
  PepsNetwork network;
  std::vector<CompiledCell> cells;
  /// Readout vertex for each wire.
  std::vector<std::size_t> readout_vertex;
  double delta = 1.0;
};

/*
 * Embeds a circuit in a PEPS whose virtual space carries the circuit.
 * Every timestep is split into two-wire cells (layer_cells); wires left
 * alone are passed through. A final layer of reset (x) reset cells records
 * the output in the physical legs. One vertex per cell, ids in time-major
 * then wire order; wire segments between consecutive cells become bonds of
 * dimension 2. Inputs of the first cell on each wire are closed with |0>,
 * outputs of the readout cells with <0|.
 */
inline CompiledCircuit compile_circuit(const Circuit& c, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < c.depth(); ++t) {
    for (auto& cell : layer_cells(c, t)) cells.push_back(std::move(cell));
  }
  const std::size_t first_readout = cells.size();
  for (auto& cell : readout_cells(c.width(), c.depth())) cells.push_back(std::move(cell));

  // Wire segments: last cell and output slot seen on each wire.
  struct Open {
    std::size_t vertex;
    std::size_t slot;
  };
  std::vector<std::optional<Open>> last(c.width());
  std::vector<Edge> edges;
  // edge_at[v][leg] with leg 0..3 = out0, out1, in0, in1
  std::vector<std::array<std::optional<std::size_t>, 4>> edge_at(cells.size());
  CompiledCircuit out;
  out.delta = delta;
  out.readout_vertex.assign(c.width(), 0);
  for (std::size_t v = 0; v < cells.size(); ++v) {
    CompiledCell cc;
    cc.cell = cells[v];
    cc.vertex = v;
    cc.readout = v >= first_readout;
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t w = cells[v].wire + k;
      if (last[w]) {
        edge_at[last[w]->vertex][last[w]->slot] = edges.size();
        edge_at[v][2 + k] = edges.size();
        edges.push_back({last[w]->vertex, v, 2});
      } else {
        cc.input_closed[k] = true;
      }
      last[w] = Open{v, k};
      if (cc.readout) out.readout_vertex[w] = v;
    }
    out.cells.push_back(cc);
  }
  const LatticeGraph g = LatticeGraph::explicit_graph(cells.size(), edges);

  std::vector<Tensor> tensors;
  static const char* kSlots[4] = {"out0", "out1", "in0", "in1"};
  for (std::size_t v = 0; v < cells.size(); ++v) {
    Tensor t = build_site_tensor(cells[v].kraus, delta);
    for (std::size_t s = 0; s < 4; ++s) {
      if (edge_at[v][s]) {
        t = t.relabeled(kSlots[s], LatticeGraph::edge_label(*edge_at[v][s]));
      } else {
        t = select(t, kSlots[s], 0);  // |0> on open inputs, <0| on readout outputs
      }
    }
    tensors.push_back(std::move(t));
  }
  out.network = PepsNetwork(g, std::move(tensors));
  return out;
}

/*
 * Observable on the readout vertex of wires (w, w+1) whose expectation is
 * tr[O rho_out] for a 4x4 operator O on that pair. The readout cell's
 * physical index a < 4 records the pair's value a, and the bra/ket layers
 * pair it as O[a, b] -> rho[a, b]; hence the transpose.
 */
inline Observable readout_observable(const CompiledCircuit& cc, std::size_t wire_pair_left,
                                     const Eigen::MatrixXcd& op_pair) {
  if (wire_pair_left % 2 != 0 || wire_pair_left + 1 >= cc.readout_vertex.size()) {
    throw ValidationError("readout pairs start at even wires");
  }
  if (op_pair.rows() != 4 || op_pair.cols() != 4) throw ValidationError("pair observable must be 4x4");
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(kCellPhysDim, kCellPhysDim);
  o.topLeftCorner(4, 4) = op_pair.transpose();
  return Observable::single_site(cc.readout_vertex[wire_pair_left], o);
}

/// Observable for a single-qubit operator on one wire.
inline Observable readout_observable_wire(const CompiledCircuit& cc, std::size_t wire, const Eigen::MatrixXcd& op) {
  if (op.rows() != 2 || op.cols() != 2) throw ValidationError("wire observable must be 2x2");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd pair = wire % 2 == 0 ? kron(op, id) : kron(id, op);
  return readout_observable(cc, wire - wire % 2, pair);
}

}  // namespace pepslab

#endif  // PEPSLAB_CIRCUIT_EMBED_HPP_
