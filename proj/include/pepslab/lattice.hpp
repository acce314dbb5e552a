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

#ifndef PEPSLAB_LATTICE_HPP_
#define PEPSLAB_LATTICE_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepslab/error.hpp"

namespace pepslab {

enum class Geometry { open_grid, periodic_grid, explicit_graph };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::open_grid: return "open-grid";
    case Geometry::periodic_grid: return "periodic-grid";
    case Geometry::explicit_graph: return "explicit";
  }
  return "explicit";
}

inline Geometry geometry_from_string(const std::string& s) {
  if (s == "open-grid") return Geometry::open_grid;
  if (s == "periodic-grid") return Geometry::periodic_grid;
  if (s == "explicit") return Geometry::explicit_graph;
  throw ValidationError("unknown geometry '" + s + "'");
}

/// An undirected edge. For grids `u` is the left/upper endpoint and `v` the
/// right/lower one, which fixes the orientation used by tile encodings.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t bond_dim = 1;

  std::size_t other(std::size_t x) const { return x == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/*
 * Graph underlying a PEPS. Grid vertices are numbered row-major,
 * id = row * cols + col, with row 0 at the top. Grid edges are listed in a
 * canonical order: for each site, its right edge then its down edge
 * (periodic grids include the wrap-around edges). Edge i carries the leg
 * label "e<i>" in every tensor touching it.
 */
class LatticeGraph {
 public:
  LatticeGraph() = default;

  static LatticeGraph open_grid(std::size_t rows, std::size_t cols, std::size_t bond_dim) {
    return grid(Geometry::open_grid, rows, cols, bond_dim);
  }

  static LatticeGraph periodic_grid(std::size_t rows, std::size_t cols, std::size_t bond_dim) {
    if (rows < 2 || cols < 2) throw ValidationError("periodic grids need at least 2 rows and 2 columns");
    return grid(Geometry::periodic_grid, rows, cols, bond_dim);
  }

  static LatticeGraph explicit_graph(std::size_t num_vertices, std::vector<Edge> edges) {
    LatticeGraph g;
    g.geometry_ = Geometry::explicit_graph;
    g.num_vertices_ = num_vertices;
    g.edges_ = std::move(edges);
    g.finish();
    return g;
  }

  /// Grid with explicitly listed bond dims; the (u, v) pairs must equal the
  /// canonical nearest-neighbour edge list exactly.
  static LatticeGraph grid_with_edges(Geometry geometry, std::size_t rows, std::size_t cols,
                                      const std::vector<Edge>& edges) {
    if (geometry == Geometry::explicit_graph) throw ValidationError("not a grid geometry");
    LatticeGraph g = geometry == Geometry::open_grid ? open_grid(rows, cols, 1) : periodic_grid(rows, cols, 1);
    if (edges.size() != g.edges_.size()) {
      throw ValidationError("grid edge list does not match nearest-neighbour adjacency");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].u != g.edges_[i].u || edges[i].v != g.edges_[i].v) {
        throw ValidationError("grid edge " + std::to_string(i) + " does not match nearest-neighbour adjacency");
      }
      if (edges[i].bond_dim == 0) throw ValidationError("bond dimension must be >= 1");
      g.edges_[i].bond_dim = edges[i].bond_dim;
    }
    return g;
  }

  Geometry geometry() const { return geometry_; }
  bool is_grid() const { return geometry_ != Geometry::explicit_graph; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  static std::string edge_label(std::size_t e) { return "e" + std::to_string(e); }

  /// Incident edge ids in canonical leg order: ascending neighbour id, ties
  /// (multi-edges on small periodic grids) broken by edge id.
  const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }

  std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }

  std::size_t site(std::size_t r, std::size_t c) const {
    require_grid();
    if (r >= rows_ || c >= cols_) throw ValidationError("grid coordinate out of range");
    return r * cols_ + c;
  }

  std::pair<std::size_t, std::size_t> coords(std::size_t v) const {
    require_grid();
    return {v / cols_, v % cols_};
  }

  /// Edge leaving (r, c) towards the right / downwards, if any.
  std::optional<std::size_t> right_edge(std::size_t r, std::size_t c) const {
    require_grid();
    return right_.at(site(r, c));
  }
  std::optional<std::size_t> down_edge(std::size_t r, std::size_t c) const {
    require_grid();
    return down_.at(site(r, c));
  }
  std::optional<std::size_t> left_edge(std::size_t r, std::size_t c) const {
    require_grid();
    if (c > 0) return right_edge(r, c - 1);
    if (geometry_ == Geometry::periodic_grid) return right_edge(r, cols_ - 1);
    return std::nullopt;
  }
  std::optional<std::size_t> up_edge(std::size_t r, std::size_t c) const {
    require_grid();
    if (r > 0) return down_edge(r - 1, c);
    if (geometry_ == Geometry::periodic_grid) return down_edge(rows_ - 1, c);
    return std::nullopt;
  }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(num_vertices_);
    for (const Edge& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  friend bool operator==(const LatticeGraph& a, const LatticeGraph& b) {
    return a.geometry_ == b.geometry_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.num_vertices_ == b.num_vertices_ && a.edges_ == b.edges_;
  }

 private:
  static LatticeGraph grid(Geometry geometry, std::size_t rows, std::size_t cols, std::size_t bond_dim) {
    if (rows == 0 || cols == 0) throw ValidationError("grid needs at least one row and one column");
    if (bond_dim == 0) throw ValidationError("bond dimension must be >= 1");
    LatticeGraph g;
    g.geometry_ = geometry;
    g.rows_ = rows;
    g.cols_ = cols;
    g.num_vertices_ = rows * cols;
    g.right_.assign(g.num_vertices_, std::nullopt);
    g.down_.assign(g.num_vertices_, std::nullopt);
    const bool periodic = geometry == Geometry::periodic_grid;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t v = r * cols + c;
        if (c + 1 < cols || periodic) {
          g.right_[v] = g.edges_.size();
          g.edges_.push_back({v, r * cols + (c + 1) % cols, bond_dim});
        }
        if (r + 1 < rows || periodic) {
          g.down_[v] = g.edges_.size();
          g.edges_.push_back({v, ((r + 1) % rows) * cols + c, bond_dim});
        }
      }
    }
    g.finish();
    return g;
  }

  void finish() {
    incident_.assign(num_vertices_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u >= num_vertices_ || e.v >= num_vertices_) throw ValidationError("edge endpoint out of range");
      if (e.u == e.v) throw ValidationError("self-loops are not allowed");
      if (e.bond_dim == 0) throw ValidationError("bond dimension must be >= 1");
      incident_[e.u].push_back(i);
      incident_[e.v].push_back(i);
    }
    for (std::size_t v = 0; v < num_vertices_; ++v) {
      std::sort(incident_[v].begin(), incident_[v].end(), [&](std::size_t a, std::size_t b) {
        const std::size_t na = edges_[a].other(v), nb = edges_[b].other(v);
        return na != nb ? na < nb : a < b;
      });
    }
  }

  void require_grid() const {
    if (!is_grid()) throw ValidationError("operation requires a grid geometry");
  }

  Geometry geometry_ = Geometry::explicit_graph;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::optional<std::size_t>> right_;
  std::vector<std::optional<std::size_t>> down_;
};

}  // namespace pepslab

#endif  // PEPSLAB_LATTICE_HPP_
