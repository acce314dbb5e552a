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

#ifndef PEPSLAB_JSON_IO_HPP_
#define PEPSLAB_JSON_IO_HPP_

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pepslab/circuit.hpp"
#include "pepslab/error.hpp"
#include "pepslab/lattice.hpp"
#include "pepslab/peps.hpp"
#include "pepslab/tensor.hpp"
#include "pepslab/tiling.hpp"

namespace pepslab {

using json = nlohmann::json;

// nlohmann prints doubles with 17 significant digits, which is enough for
// a bitwise round trip.

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(what + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::size_t as_size(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline cplx as_complex(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(what + ": complex entries are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

// --- tensors -------------------------------------------------------------

inline json to_json(const Tensor& t) {
  json legs = json::array();
  for (const Leg& l : t.legs()) legs.push_back({{"label", l.label}, {"dim", l.dim}});
  json data = json::array();
  for (const cplx& z : t.data()) data.push_back(detail::complex_json(z));
  return {{"legs", legs}, {"data", data}};
}

inline Tensor tensor_from_json(const json& j) {
  const std::string what = "tensor literal";
  const json& legs = detail::require(j, "legs", what);
  const json& data = detail::require(j, "data", what);
  if (!legs.is_array() || !data.is_array()) throw ValidationError(what + ": legs and data must be arrays");
  std::vector<Leg> ls;
  for (const json& l : legs) {
    const json& label = detail::require(l, "label", what);
    if (!label.is_string()) throw ValidationError(what + ": leg label must be a string");
    ls.push_back({label.get<std::string>(), detail::as_size(detail::require(l, "dim", what), "leg dim")});
  }
  std::vector<cplx> values;
  values.reserve(data.size());
  for (const json& z : data) values.push_back(detail::as_complex(z, what));
  return Tensor(std::move(ls), std::move(values));
}

// --- networks ------------------------------------------------------------

inline json to_json(const LatticeGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.u, e.v, e.bond_dim}));
  json out = {{"geometry", to_string(g.geometry())}, {"edges", edges}};
  if (g.is_grid()) {
    out["rows"] = g.rows();
    out["cols"] = g.cols();
  } else {
    out["vertices"] = g.num_vertices();
  }
  return out;
}

/*
 * Grids accept either a full "edges" list (checked against the canonical
 * adjacency) or a uniform "bond_dim". Explicit graphs need "edges" and take
 * the vertex count from "vertices" or, failing that, from `fallback_vertices`.
 */
inline LatticeGraph graph_from_json(const json& j, std::size_t fallback_vertices = 0) {
  const std::string what = "graph";
  const json& geo = detail::require(j, "geometry", what);
  if (!geo.is_string()) throw ValidationError("graph geometry must be a string");
  const Geometry geometry = geometry_from_string(geo.get<std::string>());
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ValidationError("graph edges are [u, v, D] triples");
      edges.push_back({detail::as_size(e[0], "edge endpoint"), detail::as_size(e[1], "edge endpoint"),
                       detail::as_size(e[2], "bond dimension")});
    }
  }
  if (geometry == Geometry::explicit_graph) {
    if (!j.contains("edges")) throw ValidationError("explicit graph needs an edge list");
    const std::size_t n = j.contains("vertices") ? detail::as_size(j.at("vertices"), "vertices") : fallback_vertices;
    return LatticeGraph::explicit_graph(n, std::move(edges));
  }
  const std::size_t rows = detail::as_size(detail::require(j, "rows", what), "rows");
  const std::size_t cols = detail::as_size(detail::require(j, "cols", what), "cols");
  if (j.contains("edges")) return LatticeGraph::grid_with_edges(geometry, rows, cols, edges);
  const std::size_t d = detail::as_size(detail::require(j, "bond_dim", what), "bond_dim");
  return geometry == Geometry::open_grid ? LatticeGraph::open_grid(rows, cols, d)
                                         : LatticeGraph::periodic_grid(rows, cols, d);
}

inline json to_json(const PepsNetwork& net) {
  json tensors = json::object();
  for (std::size_t v = 0; v < net.num_sites(); ++v) tensors[std::to_string(v)] = to_json(net.tensor(v));
  return {{"graph", to_json(net.graph())}, {"tensors", tensors}};
}

inline PepsNetwork network_from_json(const json& j) {
  const json& tj = detail::require(j, "tensors", "network");
  if (!tj.is_object()) throw ValidationError("network tensors must be an object keyed by vertex id");
  const LatticeGraph g = graph_from_json(detail::require(j, "graph", "network"), tj.size());
  std::vector<Tensor> tensors(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  for (const auto& [key, value] : tj.items()) {
    std::size_t v = 0;
    std::size_t pos = 0;
    try {
      v = std::stoul(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != key.size() || key.empty()) throw ValidationError("tensor key '" + key + "' is not a vertex id");
    if (v >= g.num_vertices()) throw ValidationError("tensor key " + key + " out of range");
    tensors[v] = tensor_from_json(value);
    seen[v] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v) {
    if (!seen[v]) throw ValidationError("missing tensor for vertex " + std::to_string(v));
  }
  return PepsNetwork(g, std::move(tensors));
}

// --- observables ---------------------------------------------------------

inline json to_json(const Observable& o) { return {{"support", o.support}, {"operator", to_json(o.op)}}; }

/// Operator legs are out0..out{k-1}, in0..in{k-1} in any order.
inline Observable observable_from_json(const json& j) {
  std::vector<std::size_t> support;
  for (const json& s : detail::require(j, "support", "observable")) support.push_back(detail::as_size(s, "support id"));
  return Observable(std::move(support), tensor_from_json(detail::require(j, "operator", "observable")));
}

// --- circuits ------------------------------------------------------------

inline json to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates()) {
    json gj = {{"kind", to_string(g.kind)}, {"t", g.t}, {"wire", g.wire}};
    if (g.kind == GateKind::unitary2) {
      json m = json::array();
      for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
        for (Eigen::Index col = 0; col < g.matrix.cols(); ++col) m.push_back(detail::complex_json(g.matrix(r, col)));
      }
      gj["matrix"] = m;
    }
    gates.push_back(gj);
  }
  return {{"width", c.width()}, {"depth", c.depth()}, {"gates", gates}};
}

/// Gate matrices are 16 row-major [re, im] entries.
inline Circuit circuit_from_json(const json& j) {
  const std::string what = "circuit";
  const std::size_t width = detail::as_size(detail::require(j, "width", what), "width");
  const std::size_t depth = detail::as_size(detail::require(j, "depth", what), "depth");
  std::vector<Gate> gates;
  for (const json& gj : detail::require(j, "gates", what)) {
    const json& kind = detail::require(gj, "kind", "gate");
    if (!kind.is_string()) throw ValidationError("gate kind must be a string");
    Gate g;
    g.kind = gate_kind_from_string(kind.get<std::string>());
    g.t = detail::as_size(detail::require(gj, "t", "gate"), "gate t");
    g.wire = detail::as_size(detail::require(gj, "wire", "gate"), "gate wire");
    if (gj.contains("matrix")) {
      const json& m = gj.at("matrix");
      if (!m.is_array() || m.size() != 16) throw ValidationError("gate matrix must have 16 entries");
      g.matrix.resize(4, 4);
      for (std::size_t k = 0; k < 16; ++k) g.matrix(k / 4, k % 4) = detail::as_complex(m[k], "gate matrix");
    }
    gates.push_back(std::move(g));
  }
  return Circuit(width, depth, std::move(gates));
}

// --- tile sets -----------------------------------------------------------

inline json to_json(const WangTileSet& ts) {
  json tiles = json::array();
  for (const Tile& t : ts.tiles) tiles.push_back(json::array({t[0], t[1], t[2], t[3]}));
  return {{"colors", ts.colors}, {"tiles", tiles}};
}

inline WangTileSet tile_set_from_json(const json& j) {
  WangTileSet ts;
  ts.colors = detail::as_size(detail::require(j, "colors", "tile set"), "colors");
  for (const json& t : detail::require(j, "tiles", "tile set")) {
    if (!t.is_array() || t.size() != 4) throw ValidationError("tiles are [left, top, right, bottom] colors");
    ts.tiles.push_back({detail::as_size(t[0], "color"), detail::as_size(t[1], "color"), detail::as_size(t[2], "color"),
                        detail::as_size(t[3], "color")});
  }
  ts.validate();
  return ts;
}

}  // namespace pepslab

#endif  // PEPSLAB_JSON_IO_HPP_
