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

#ifndef PEPSLAB_TENSOR_HPP_
#define PEPSLAB_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pepslab/error.hpp"

namespace pepslab {

using cplx = std::complex<double>;
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Leg {
  std::string label;
  std::size_t dim = 1;

  friend bool operator==(const Leg&, const Leg&) = default;
};

using LegPair = std::pair<std::string, std::string>;

/*
 * Dense complex tensor with labelled legs. Entries are stored flat in
 * row-major order with respect to the leg list, so the last leg varies
 * fastest. A tensor without legs is a scalar holding exactly one entry.
 *
 * The constructor enforces the invariants: positive dims, unique labels,
 * data length equal to the product of dims, finite entries.
 */
class Tensor {
 public:
  Tensor() : data_(1, cplx{0.0, 0.0}) {}

  Tensor(std::vector<Leg> legs, std::vector<cplx> data)
      : legs_(std::move(legs)), data_(std::move(data)) {
    validate_legs(legs_);
    if (data_.size() != volume(legs_)) {
      throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                            " does not match leg volume " + std::to_string(volume(legs_)));
    }
    for (const cplx& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError("tensor entries must be finite");
      }
    }
  }

  static Tensor zeros(std::vector<Leg> legs) {
    validate_legs(legs);
    std::size_t n = volume(legs);
    return Tensor(std::move(legs), std::vector<cplx>(n), Unchecked{});
  }

  static Tensor scalar(cplx value) { return Tensor({}, {value}, Unchecked{}); }

  /// Matrix with one row leg and one column leg.
  static Tensor matrix(const Eigen::MatrixXcd& m, std::string row_label, std::string col_label) {
    Tensor t = zeros({{std::move(row_label), static_cast<std::size_t>(m.rows())},
                      {std::move(col_label), static_cast<std::size_t>(m.cols())}});
    Eigen::Map<RowMatrix>(t.data_.data(), m.rows(), m.cols()) = m;
    return t;
  }

  static Tensor vector(std::span<const cplx> v, std::string label) {
    return Tensor({{std::move(label), v.size()}}, std::vector<cplx>(v.begin(), v.end()));
  }

  std::size_t rank() const { return legs_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<Leg>& legs() const { return legs_; }
  const Leg& leg(std::size_t i) const { return legs_.at(i); }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    d.reserve(legs_.size());
    for (const Leg& l : legs_) d.push_back(l.dim);
    return d;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(legs_.size());
    for (const Leg& l : legs_) out.push_back(l.label);
    return out;
  }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  const cplx& operator[](std::size_t flat) const { return data_[flat]; }
  cplx& operator[](std::size_t flat) { return data_[flat]; }

  const cplx& at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  cplx& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
  const cplx& at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  cplx& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Value of a rank-0 tensor.
  cplx value() const {
    if (!legs_.empty()) throw ValidationError("value() called on a tensor with legs");
    return data_[0];
  }

  bool has_leg(const std::string& label) const {
    return std::any_of(legs_.begin(), legs_.end(),
                       [&](const Leg& l) { return l.label == label; });
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < legs_.size(); ++i) {
      if (legs_[i].label == label) return i;
    }
    throw ValidationError("unknown leg label '" + label + "'");
  }

  std::size_t dim_of(const std::string& label) const { return legs_[index_of(label)].dim; }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(legs_.size(), 1);
    for (std::size_t i = legs_.size(); i-- > 1;) s[i - 1] = s[i] * legs_[i].dim;
    return s;
  }

  Tensor relabeled(const std::string& from, const std::string& to) const {
    Tensor out = *this;
    out.legs_[index_of(from)].label = to;
    validate_legs(out.legs_);
    return out;
  }

  Tensor relabeled(const std::vector<LegPair>& renames) const {
    Tensor out = *this;
    for (const auto& [from, to] : renames) out.legs_[index_of(from)].label = to;
    validate_legs(out.legs_);
    return out;
  }

  /// Same data viewed with a different leg structure of equal volume.
  Tensor reshaped(std::vector<Leg> legs) const {
    validate_legs(legs);
    if (volume(legs) != data_.size()) throw ValidationError("reshape changes the tensor volume");
    return Tensor(std::move(legs), data_, Unchecked{});
  }

  static std::size_t volume(const std::vector<Leg>& legs) {
    std::size_t n = 1;
    for (const Leg& l : legs) n *= l.dim;
    return n;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  struct Unchecked {};
  Tensor(std::vector<Leg> legs, std::vector<cplx> data, Unchecked)
      : legs_(std::move(legs)), data_(std::move(data)) {}

  static void validate_legs(const std::vector<Leg>& legs) {
    std::unordered_set<std::string> seen;
    for (const Leg& l : legs) {
      if (l.dim == 0) throw ValidationError("leg '" + l.label + "' has dimension 0");
      if (!seen.insert(l.label).second) {
        throw ValidationError("duplicate leg label '" + l.label + "'");
      }
    }
  }

  std::size_t offset(std::span<const std::size_t> index) const {
    if (index.size() != legs_.size()) throw ValidationError("index rank mismatch");
    std::size_t off = 0;
    for (std::size_t i = 0; i < legs_.size(); ++i) {
      if (index[i] >= legs_[i].dim) throw ValidationError("index out of range");
      off = off * legs_[i].dim + index[i];
    }
    return off;
  }

  friend Tensor permute_legs(const Tensor&, std::span<const std::size_t>);
  friend Tensor contract(const Tensor&, const Tensor&, std::span<const LegPair>);

  std::vector<Leg> legs_;
  std::vector<cplx> data_;
};

inline bool is_permutation_of_range(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

/// Reorders the legs so that new leg k is old leg order[k].
inline Tensor permute_legs(const Tensor& t, std::span<const std::size_t> order) {
  const std::size_t r = t.rank();
  if (!is_permutation_of_range(order, r)) throw ValidationError("invalid leg permutation");
  bool identity = true;
  for (std::size_t k = 0; k < r; ++k) identity = identity && order[k] == k;
  if (identity) return t;

  std::vector<Leg> legs(r);
  const std::vector<std::size_t> src_strides = t.strides();
  std::vector<std::size_t> dims(r), strides(r);
  for (std::size_t k = 0; k < r; ++k) {
    legs[k] = t.legs_[order[k]];
    dims[k] = legs[k].dim;
    strides[k] = src_strides[order[k]];
  }
  std::vector<cplx> out(t.size());
  // Odometer over the destination index; the innermost leg is peeled off so
  // the hot loop is a strided copy.
  const std::size_t inner_dim = dims[r - 1];
  const std::size_t inner_stride = strides[r - 1];
  std::vector<std::size_t> counter(r, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < out.size(); dst += inner_dim) {
    const cplx* from = t.data_.data() + src;
    for (std::size_t i = 0; i < inner_dim; ++i) out[dst + i] = from[i * inner_stride];
    for (std::size_t k = r - 1; k-- > 0;) {
      if (++counter[k] < dims[k]) {
        src += strides[k];
        break;
      }
      src -= strides[k] * (dims[k] - 1);
      counter[k] = 0;
    }
  }
  return Tensor(std::move(legs), std::move(out), Tensor::Unchecked{});
}

inline Tensor permute_legs(const Tensor& t, const std::vector<std::string>& labels) {
  std::vector<std::size_t> order;
  order.reserve(labels.size());
  for (const auto& l : labels) order.push_back(t.index_of(l));
  return permute_legs(t, order);
}

/*
 * Sums over the paired legs. The result carries the unpaired legs of `a`
 * followed by the unpaired legs of `b`, each in their original order.
 * Implemented as permute -> fuse -> one dense matrix product.
 */
inline Tensor contract(const Tensor& a, const Tensor& b, std::span<const LegPair> pairs) {
  std::vector<std::size_t> pa, pb;
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (const auto& [la, lb] : pairs) {
    std::size_t ia = a.index_of(la), ib = b.index_of(lb);
    if (used_a[ia] || used_b[ib]) throw ValidationError("leg paired twice in contraction");
    if (a.legs_[ia].dim != b.legs_[ib].dim) {
      throw ValidationError("dimension mismatch contracting '" + la + "' with '" + lb + "'");
    }
    used_a[ia] = used_b[ib] = true;
    pa.push_back(ia);
    pb.push_back(ib);
  }
  std::vector<std::size_t> order_a, order_b;
  std::vector<Leg> result_legs;
  std::size_t m = 1, k = 1, n = 1;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!used_a[i]) {
      order_a.push_back(i);
      result_legs.push_back(a.legs_[i]);
      m *= a.legs_[i].dim;
    }
  }
  for (std::size_t i : pa) {
    order_a.push_back(i);
    k *= a.legs_[i].dim;
  }
  order_b = pb;
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!used_b[i]) {
      order_b.push_back(i);
      result_legs.push_back(b.legs_[i]);
      n *= b.legs_[i].dim;
    }
  }
  {
    std::unordered_set<std::string> seen;
    for (const Leg& l : result_legs) {
      if (!seen.insert(l.label).second) {
        throw ValidationError("contraction would produce duplicate leg '" + l.label + "'");
      }
    }
  }
  const Tensor ta = permute_legs(a, order_a);
  const Tensor tb = permute_legs(b, order_b);
  std::vector<cplx> out(m * n);
  Eigen::Map<const RowMatrix> ma(ta.data_.data(), m, k);
  Eigen::Map<const RowMatrix> mb(tb.data_.data(), k, n);
  Eigen::Map<RowMatrix> mc(out.data(), m, n);
  mc.noalias() = ma * mb;
  return Tensor(std::move(result_legs), std::move(out), Tensor::Unchecked{});
}

inline Tensor contract(const Tensor& a, const Tensor& b, const std::vector<LegPair>& pairs) {
  return contract(a, b, std::span<const LegPair>(pairs));
}

/// Contracts every label the two tensors have in common.
inline Tensor contract_shared(const Tensor& a, const Tensor& b) {
  std::vector<LegPair> pairs;
  for (const Leg& l : a.legs()) {
    if (b.has_leg(l.label)) pairs.emplace_back(l.label, l.label);
  }
  return contract(a, b, pairs);
}

inline Tensor outer(const Tensor& a, const Tensor& b) { return contract(a, b, std::vector<LegPair>{}); }

/*
 * Merges `group` into one leg of dimension prod(dims). The grouped legs are
 * first moved, in the given order, to the position of the earliest of them;
 * split_leg with the same dims undoes the operation.
 */
inline Tensor fuse_legs(const Tensor& t, const std::vector<std::string>& group, std::string new_label) {
  if (group.empty()) throw ValidationError("cannot fuse an empty leg group");
  std::vector<std::size_t> gi;
  for (const auto& l : group) gi.push_back(t.index_of(l));
  {
    std::vector<std::size_t> sorted = gi;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("leg listed twice in fuse group");
    }
  }
  const std::size_t first = *std::min_element(gi.begin(), gi.end());
  std::vector<std::size_t> order;
  std::vector<bool> in_group(t.rank(), false);
  for (std::size_t i : gi) in_group[i] = true;
  for (std::size_t i = 0; i < first; ++i) order.push_back(i);
  for (std::size_t i : gi) order.push_back(i);
  for (std::size_t i = first; i < t.rank(); ++i) {
    if (!in_group[i]) order.push_back(i);
  }
  Tensor p = permute_legs(t, order);
  std::vector<Leg> legs;
  std::size_t fused_dim = 1;
  for (std::size_t i : gi) fused_dim *= t.leg(i).dim;
  for (std::size_t i = 0; i < first; ++i) legs.push_back(p.leg(i));
  legs.push_back({std::move(new_label), fused_dim});
  for (std::size_t i = first + gi.size(); i < p.rank(); ++i) legs.push_back(p.leg(i));
  return p.reshaped(std::move(legs));
}

/// Inverse of fuse_legs: replaces `label` by `parts` in place.
inline Tensor split_leg(const Tensor& t, const std::string& label, const std::vector<Leg>& parts) {
  const std::size_t pos = t.index_of(label);
  if (Tensor::volume(parts) != t.leg(pos).dim) {
    throw ValidationError("split dims do not multiply to the dimension of '" + label + "'");
  }
  std::vector<Leg> legs;
  for (std::size_t i = 0; i < pos; ++i) legs.push_back(t.leg(i));
  for (const Leg& l : parts) legs.push_back(l);
  for (std::size_t i = pos + 1; i < t.rank(); ++i) legs.push_back(t.leg(i));
  return t.reshaped(std::move(legs));
}

/// Fixes leg `label` to `index`, removing the leg.
inline Tensor select(const Tensor& t, const std::string& label, std::size_t index) {
  const std::size_t pos = t.index_of(label);
  if (index >= t.leg(pos).dim) throw ValidationError("select index out of range");
  const std::size_t dim = t.leg(pos).dim;
  std::vector<cplx> e(dim);
  e[index] = 1.0;
  return contract(t, Tensor({{"__sel", dim}}, std::move(e)), std::vector<LegPair>{{label, "__sel"}});
}

inline Tensor conj(const Tensor& t) {
  Tensor out = t;
  for (cplx& z : out.data()) z = std::conj(z);
  return out;
}

inline Tensor scaled(const Tensor& t, cplx factor) {
  Tensor out = t;
  for (cplx& z : out.data()) z *= factor;
  return out;
}

/// alpha*a + beta*b; b is aligned to a's leg order by label.
inline Tensor linear_combination(cplx alpha, const Tensor& a, cplx beta, const Tensor& b) {
  if (a.rank() != b.rank()) throw ValidationError("linear combination of tensors with different ranks");
  const Tensor bb = permute_legs(b, a.labels());
  if (bb.dims() != a.dims()) throw ValidationError("linear combination of tensors with different dims");
  Tensor out = a;
  auto od = out.data();
  auto bd = bb.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] = alpha * od[i] + beta * bd[i];
  return out;
}

inline double frobenius_norm(const Tensor& t) {
  double s = 0.0;
  for (const cplx& z : t.data()) s += std::norm(z);
  return std::sqrt(s);
}

inline double max_abs_difference(const Tensor& a, const Tensor& b) {
  const Tensor bb = permute_legs(b, a.labels());
  if (bb.dims() != a.dims()) throw ValidationError("comparing tensors with different dims");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - bb[i]));
  return m;
}

/// Matrix view: rows are the fused `row_legs`, columns the fused `col_legs`.
inline Eigen::MatrixXcd to_matrix(const Tensor& t, const std::vector<std::string>& row_legs,
                                  const std::vector<std::string>& col_legs) {
  if (row_legs.size() + col_legs.size() != t.rank()) {
    throw ValidationError("row and column legs must partition the tensor legs");
  }
  std::vector<std::string> all = row_legs;
  all.insert(all.end(), col_legs.begin(), col_legs.end());
  const Tensor p = permute_legs(t, all);
  std::size_t rows = 1, cols = 1;
  for (const auto& l : row_legs) rows *= t.dim_of(l);
  for (const auto& l : col_legs) cols *= t.dim_of(l);
  return Eigen::Map<const RowMatrix>(p.data().data(), rows, cols);
}

/// Inverse of to_matrix for the given leg lists.
inline Tensor from_matrix(const Eigen::MatrixXcd& m, const std::vector<Leg>& row_legs,
                          const std::vector<Leg>& col_legs) {
  if (Tensor::volume(row_legs) != static_cast<std::size_t>(m.rows()) ||
      Tensor::volume(col_legs) != static_cast<std::size_t>(m.cols())) {
    throw ValidationError("matrix shape does not match legs");
  }
  std::vector<Leg> legs = row_legs;
  legs.insert(legs.end(), col_legs.begin(), col_legs.end());
  Tensor t = Tensor::zeros(std::move(legs));
  Eigen::Map<RowMatrix>(t.data().data(), m.rows(), m.cols()) = m;
  return t;
}

}  // namespace pepslab

#endif  // PEPSLAB_TENSOR_HPP_
