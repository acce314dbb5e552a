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

#ifndef PEPSLAB_CIRCUIT_HPP_
#define PEPSLAB_CIRCUIT_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pepslab/channel.hpp"
#include "pepslab/error.hpp"
#include "pepslab/linalg.hpp"
#include "pepslab/random.hpp"

namespace pepslab {

enum class GateKind { unitary2, reset, project0, identity };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::unitary2: return "unitary2";
    case GateKind::reset: return "reset";
    case GateKind::project0: return "project0";
    case GateKind::identity: return "identity";
  }
  return "identity";
}

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "unitary2") return GateKind::unitary2;
  if (s == "reset") return GateKind::reset;
  if (s == "project0") return GateKind::project0;
  if (s == "identity") return GateKind::identity;
  throw ValidationError("unknown gate kind '" + s + "'");
}

/// A gate at (t, wire). unitary2 acts on (wire, wire + 1) with `wire` the
/// most significant qubit of the 4x4 matrix.
struct Gate {
  GateKind kind = GateKind::identity;
  std::size_t t = 0;
  std::size_t wire = 0;
  Eigen::MatrixXcd matrix;

  std::size_t span() const { return kind == GateKind::unitary2 ? 2 : 1; }

  static Gate unitary(std::size_t t, std::size_t wire, Eigen::MatrixXcd u) {
    return {GateKind::unitary2, t, wire, std::move(u)};
  }
  static Gate single(GateKind kind, std::size_t t, std::size_t wire) { return {kind, t, wire, {}}; }
};

/// Kraus set of a single-wire gate kind.
inline std::vector<Eigen::MatrixXcd> single_wire_kraus(GateKind kind) {
  switch (kind) {
    case GateKind::identity: return {Eigen::MatrixXcd::Identity(2, 2)};
    case GateKind::reset: return {matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)};
    case GateKind::project0: return {matrix_unit(2, 0, 0)};
    case GateKind::unitary2: break;
  }
  throw ValidationError("unitary2 is not a single-wire gate");
}

inline QuantumChannel gate_channel(const Gate& g) {
  if (g.kind == GateKind::unitary2) return unitary_channel(g.matrix);
  return QuantumChannel(2, single_wire_kraus(g.kind));
}

inline constexpr double kUnitaryTolerance = 1e-12;

/*
 * Gates on a 1-D array of wires, one timestep after the other. Every
 * (t, wire) is covered by at most one gate; uncovered slots are identities.
 */
class Circuit {
 public:
  Circuit() = default;

  Circuit(std::size_t width, std::size_t depth, std::vector<Gate> gates)
      : width_(width), depth_(depth), gates_(std::move(gates)) {
    if (width_ == 0) throw ValidationError("circuit width must be positive");
    slot_.assign(width_ * depth_, -1);
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      if (g.t >= depth_) throw ValidationError("gate timestep " + std::to_string(g.t) + " out of range");
      if (g.wire + g.span() > width_) throw ValidationError("gate wire " + std::to_string(g.wire) + " out of range");
      if (g.kind == GateKind::unitary2) {
        if (g.matrix.rows() != 4 || g.matrix.cols() != 4) throw ValidationError("unitary2 needs a 4x4 matrix");
        if (!g.matrix.allFinite() || !is_unitary(g.matrix, kUnitaryTolerance)) {
          throw ValidationError("unitary2 matrix at t=" + std::to_string(g.t) + " is not unitary");
        }
      } else if (g.matrix.size() != 0) {
        throw ValidationError("only unitary2 gates carry a matrix");
      }
      for (std::size_t w = g.wire; w < g.wire + g.span(); ++w) {
        int& s = slot_[g.t * width_ + w];
        if (s >= 0) {
          throw ValidationError("two gates touch wire " + std::to_string(w) + " at t=" + std::to_string(g.t));
        }
        s = static_cast<int>(i);
      }
    }
  }

  std::size_t width() const { return width_; }
  std::size_t depth() const { return depth_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Gate covering (t, wire), if any; nullopt means identity.
  std::optional<Gate> gate_at(std::size_t t, std::size_t wire) const {
    const int s = slot_.at(t * width_ + wire);
    if (s < 0) return std::nullopt;
    return gates_[static_cast<std::size_t>(s)];
  }

  /// Kind at (t, wire) with gaps reported as identity.
  GateKind kind_at(std::size_t t, std::size_t wire) const {
    const auto g = gate_at(t, wire);
    return g ? g->kind : GateKind::identity;
  }

 private:
  std::size_t width_ = 0;
  std::size_t depth_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> slot_;
};

/// A two-wire cell of the compiled layout: wires (wire, wire + 1) at time t.
struct Cell {
  std::size_t t = 0;
  std::size_t wire = 0;
  /// Ideal Kraus set on the pair, wire most significant.
  std::vector<Eigen::MatrixXcd> kraus;
  std::string label;

  QuantumChannel channel() const { return QuantumChannel(4, kraus); }
  /// Common squared Hilbert-Schmidt norm of the Kraus operators.
  double hs_norm2() const { return kraus.front().squaredNorm(); }
};

/*
 * Groups one timestep into two-wire cells: unitary2 gates keep their pair,
 * the remaining wires are paired greedily left to right with their right
 * neighbour. A wire left alone must carry the identity and is passed
 * through untouched.
 */
inline std::vector<Cell> layer_cells(const Circuit& c, std::size_t t) {
  std::vector<Cell> cells;
  std::vector<bool> used(c.width(), false);
  for (const Gate& g : c.gates()) {
    if (g.t != t || g.kind != GateKind::unitary2) continue;
    cells.push_back({t, g.wire, {g.matrix}, "unitary2"});
    used[g.wire] = used[g.wire + 1] = true;
  }
  for (std::size_t w = 0; w < c.width(); ++w) {
    if (used[w]) continue;
    if (w + 1 < c.width() && !used[w + 1]) {
      const GateKind a = c.kind_at(t, w), b = c.kind_at(t, w + 1);
      Cell cell{t, w, {}, to_string(a) + "*" + to_string(b)};
      for (const auto& ka : single_wire_kraus(a)) {
        for (const auto& kb : single_wire_kraus(b)) cell.kraus.push_back(kron(ka, kb));
      }
      cells.push_back(std::move(cell));
      used[w] = used[w + 1] = true;
    } else if (c.kind_at(t, w) != GateKind::identity) {
      throw ValidationError("wire " + std::to_string(w) + " at t=" + std::to_string(t) +
                            " carries a single-wire gate but has no free neighbour to form a cell");
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.wire < b.wire; });
  return cells;
}

/// Readout layer: reset (x) reset on (0,1), (2,3), ...; needs an even width.
inline std::vector<Cell> readout_cells(std::size_t width, std::size_t t) {
  if (width % 2 != 0) throw ValidationError("compiled circuits need an even number of wires");
  std::vector<Cell> cells;
  for (std::size_t w = 0; w < width; w += 2) {
    Cell cell{t, w, {}, "readout"};
    for (const auto& ka : single_wire_kraus(GateKind::reset)) {
      for (const auto& kb : single_wire_kraus(GateKind::reset)) cell.kraus.push_back(kron(ka, kb));
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

/// Brickwork of random unitary2 gates; with `with_resets` about one slot in
/// five holds a reset on its left wire instead. Used by tests and the CLI.
inline Circuit random_circuit(std::size_t width, std::size_t depth, Rng& rng, bool with_resets = true) {
  std::vector<Gate> gates;
  for (std::size_t t = 0; t < depth; ++t) {
    for (std::size_t w = t % 2; w + 1 < width; w += 2) {
      if (with_resets && rng.uniform() < 0.2) {
        gates.push_back(Gate::single(GateKind::reset, t, w));
      } else {
        gates.push_back(Gate::unitary(t, w, random_unitary(4, rng)));
      }
    }
  }
  return Circuit(width, depth, std::move(gates));
}

}  // namespace pepslab

#endif  // PEPSLAB_CIRCUIT_HPP_
