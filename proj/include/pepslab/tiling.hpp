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

#ifndef PEPSLAB_TILING_HPP_
#define PEPSLAB_TILING_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pepslab/contraction.hpp"
#include "pepslab/parallel.hpp"
#include "pepslab/peps.hpp"
#include "pepslab/random.hpp"

namespace pepslab {

/// Side colors of a tile in the order left, top, right, bottom.
using Tile = std::array<std::size_t, 4>;

struct WangTileSet {
  std::size_t colors = 1;
  std::vector<Tile> tiles;

  void validate() const {
    if (colors == 0) throw ValidationError("tile set needs at least one color");
    if (tiles.empty()) throw ValidationError("tile set needs at least one tile");
    for (const Tile& t : tiles) {
      for (std::size_t c : t) {
        if (c >= colors) throw ValidationError("tile color " + std::to_string(c) + " out of range");
      }
    }
  }

  /// Every tile with its sides rotated one step: (l,t,r,b) -> (b,l,t,r).
  WangTileSet rotated() const {
    WangTileSet out{colors, {}};
    for (const Tile& t : tiles) out.tiles.push_back({t[3], t[0], t[1], t[2]});
    return out;
  }
};

inline WangTileSet random_tile_set(std::size_t num_tiles, std::size_t colors, Rng& rng) {
  WangTileSet ts{colors, {}};
  for (std::size_t i = 0; i < num_tiles; ++i) {
    Tile t;
    for (auto& c : t) c = rng.below(colors);
    ts.tiles.push_back(t);
  }
  return ts;
}

inline const std::array<std::string, 4> kTileLegs = {"left", "top", "right", "bottom"};

/// T = sum_i |i><a_i|<b_i|<c_i|<d_i| with legs (left, top, right, bottom, phys).
inline Tensor tile_tensor(const WangTileSet& ts) {
  ts.validate();
  const std::size_t d = ts.colors;
  Tensor t = Tensor::zeros({{"left", d}, {"top", d}, {"right", d}, {"bottom", d}, {kPhysLeg, ts.tiles.size()}});
  for (std::size_t i = 0; i < ts.tiles.size(); ++i) {
    const Tile& s = ts.tiles[i];
    t.at({s[0], s[1], s[2], s[3], i}) += 1.0;
  }
  return t;
}

/// Uniform network on a periodic rows x cols grid with the given tile-shaped tensor.
inline PepsNetwork tiling_network(const Tensor& tile, std::size_t rows, std::size_t cols) {
  const std::size_t d = tile.dim_of("left");
  for (const auto& l : kTileLegs) {
    if (tile.dim_of(l) != d) throw ValidationError("all tile legs must have the same dimension");
  }
  const LatticeGraph g = LatticeGraph::periodic_grid(rows, cols, d);
  std::vector<Tensor> tensors;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::array<std::size_t, 4> e = {*g.left_edge(r, c), *g.up_edge(r, c), *g.right_edge(r, c),
                                            *g.down_edge(r, c)};
      std::vector<LegPair> names;
      for (std::size_t k = 0; k < 4; ++k) names.emplace_back(kTileLegs[k], LatticeGraph::edge_label(e[k]));
      tensors.push_back(tile.relabeled(names));
    }
  }
  return PepsNetwork(g, std::move(tensors));
}

/// prod_e D_e: undoes the 1/sqrt(D) normalization of every link state.
inline double link_weight(const LatticeGraph& g) {
  double w = 1.0;
  for (const Edge& e : g.edges()) w *= static_cast<double>(e.bond_dim);
  return w;
}

struct TilingCount {
  std::uint64_t z = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// |value - round(value)| before rounding.
  double residue = 0.0;
};

inline constexpr double kIntegralityTolerance = 1e-6;

/// Number of periodic rows x cols tilings, read off the network norm.
inline TilingCount tiling_count_via_norm(const WangTileSet& ts, std::size_t rows, std::size_t cols,
                                         const ContractionOptions& opts = {}) {
  const PepsNetwork net = tiling_network(tile_tensor(ts), rows, cols);
  const double value = peps_norm(net, opts) * link_weight(net.graph());
  const double rounded = std::round(value);
  TilingCount out{static_cast<std::uint64_t>(std::max(0.0, rounded)), rows, cols, std::abs(value - rounded)};
  if (out.residue >= kIntegralityTolerance * std::max(1.0, std::abs(value))) {
    throw NumericalError("tiling count is not integral: " + std::to_string(value));
  }
  return out;
}

/*
 * T(delta) = (1 - delta) T + delta I. The tile tensor's physical leg is
 * zero-padded to D^4 and I maps each color combination (l,t,r,b), in
 * row-major order, to its own physical basis state.
 */
inline Tensor interpolated_tensor(const WangTileSet& ts, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in [0, 1]");
  const Tensor tile = tile_tensor(ts);
  const std::size_t d = ts.colors, p = d * d * d * d;
  if (ts.tiles.size() > p) throw ValidationError("more tiles than padded physical dimension");
  Tensor out = Tensor::zeros({{"left", d}, {"top", d}, {"right", d}, {"bottom", d}, {kPhysLeg, p}});
  auto data = out.data();
  const auto src = tile.data();
  const std::size_t t = ts.tiles.size();
  for (std::size_t v = 0; v < p; ++v) {
    for (std::size_t i = 0; i < t; ++i) data[v * p + i] += (1.0 - delta) * src[v * t + i];
    data[v * p + v] += delta;
  }
  return out;
}

/// <Psi(delta)|Psi(delta)> scaled by prod_e D_e, so that delta = 0 gives Z.
inline double interpolated_norm(const WangTileSet& ts, std::size_t rows, std::size_t cols, double delta,
                                const ContractionOptions& opts = {}) {
  const PepsNetwork net = tiling_network(interpolated_tensor(ts, delta), rows, cols);
  return peps_norm(net, opts) * link_weight(net.graph());
}

/// Barycentric Lagrange interpolant through (xs, ys) evaluated at x.
inline double barycentric_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) w[j] /= xs[j] - xs[k];
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (x == xs[j]) return ys[j];
    const double c = w[j] / (x - xs[j]);
    num += c * ys[j];
    den += c;
  }
  return num / den;
}

/// Lebesgue function sum_j |l_j(x)|: amplification of sample errors at x.
inline double lebesgue_at(const std::vector<double>& xs, double x) {
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double l = 1.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k != j) l *= (x - xs[k]) / (xs[j] - xs[k]);
    }
    s += std::abs(l);
  }
  return s;
}

/// `count` evenly spaced points strictly inside (lo, hi).
inline std::vector<double> evenly_spaced_open(double lo, double hi, std::size_t count) {
  std::vector<double> xs;
  for (std::size_t j = 0; j < count; ++j) {
    xs.push_back(lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(count + 1));
  }
  return xs;
}

struct Extrapolation {
  double estimate = 0.0;
  std::vector<double> deltas;
  std::vector<double> norms;
  /// Lebesgue constant of the nodes at delta = 0.
  double condition = 0.0;
};

/*
 * Samples the scaled norm at the given deltas, interpolates with the
 * polynomial of exact degree (#points - 1) and evaluates it at 0. Needs at
 * least 2n + 1 distinct points for n sites, the degree of the norm in delta.
 */
inline Extrapolation extrapolate_norm_to_zero(const WangTileSet& ts, std::size_t rows, std::size_t cols,
                                              const std::vector<double>& deltas,
                                              const ContractionOptions& opts = {}) {
  const std::size_t need = 2 * rows * cols + 1;
  if (deltas.size() < need) {
    throw ValidationError("extrapolation needs at least " + std::to_string(need) + " sample points");
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (deltas[i] == deltas[j]) throw ValidationError("sample points must be distinct");
    }
  }
  Extrapolation ex;
  ex.deltas = deltas;
  ex.norms = parallel_map<double>(deltas.size(), [&](std::size_t i) { return interpolated_norm(ts, rows, cols, deltas[i], opts); });
  ex.estimate = barycentric_eval(ex.deltas, ex.norms, 0.0);
  ex.condition = lebesgue_at(ex.deltas, 0.0);
  return ex;
}

}  // namespace pepslab

#endif  // PEPSLAB_TILING_HPP_
