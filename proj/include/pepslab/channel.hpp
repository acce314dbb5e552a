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

#ifndef PEPSLAB_CHANNEL_HPP_
#define PEPSLAB_CHANNEL_HPP_

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pepslab/error.hpp"
#include "pepslab/linalg.hpp"

namespace pepslab {

/// Hilbert-Schmidt inner product tr[A^dagger B].
inline cplx hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.adjoint() * b).trace();
}

/// Matrix unit |i><j| of size d.
inline Eigen::MatrixXcd matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

/*
 * Completely positive map rho -> sum_k K_k rho K_k^dagger on a d-dimensional
 * space. Not necessarily trace preserving.
 */
class QuantumChannel {
 public:
  QuantumChannel() = default;

  QuantumChannel(std::size_t dim, std::vector<Eigen::MatrixXcd> kraus) : dim_(dim), kraus_(std::move(kraus)) {
    if (dim_ == 0) throw ValidationError("channel dimension must be positive");
    for (const auto& k : kraus_) {
      if (static_cast<std::size_t>(k.rows()) != dim_ || static_cast<std::size_t>(k.cols()) != dim_) {
        throw ValidationError("Kraus operator has the wrong shape");
      }
      if (!k.allFinite()) throw ValidationError("Kraus operator has non-finite entries");
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Eigen::MatrixXcd>& kraus() const { return kraus_; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  /// sum_k K_k^dagger K_k; the identity for trace-preserving channels.
  Eigen::MatrixXcd kraus_sum() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return s;
  }

  bool is_trace_preserving(double tol = 1e-12) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    return (kraus_sum() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }

  /// Choi matrix sum_ij |i><j| (x) Phi(|i><j|), input index most significant.
  Eigen::MatrixXcd choi() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        c.block(i * d, j * d, d, d) = apply(matrix_unit(dim_, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      }
    }
    return c;
  }

 private:
  std::size_t dim_ = 1;
  std::vector<Eigen::MatrixXcd> kraus_;
};

/// Choi matrix divided by its trace; zero channels are rejected.
inline Eigen::MatrixXcd normalized_choi(const QuantumChannel& ch) {
  const Eigen::MatrixXcd c = ch.choi();
  const cplx tr = c.trace();
  if (std::abs(tr) <= 1e-300) throw NumericalError("channel has zero Choi trace");
  return c / tr;
}

inline QuantumChannel identity_channel(std::size_t d) {
  return QuantumChannel(d, {Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))});
}

inline QuantumChannel unitary_channel(const Eigen::MatrixXcd& u) {
  return QuantumChannel(static_cast<std::size_t>(u.rows()), {u});
}

/// Kraus set {A_a (x) B_b}, a major.
inline QuantumChannel tensor_product(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Eigen::MatrixXcd> ks;
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) ks.push_back(kron(ka, kb));
  }
  return QuantumChannel(a.dim() * b.dim(), std::move(ks));
}

/// Phi_eta(rho) = (1 - eta) Phi(rho) + eta tr[rho] 1/d.
inline QuantumChannel depolarize(const QuantumChannel& ch, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  const std::size_t d = ch.dim();
  std::vector<Eigen::MatrixXcd> ks;
  if (eta < 1.0) {
    for (const auto& k : ch.kraus()) ks.push_back(std::sqrt(1.0 - eta) * k);
  }
  if (eta > 0.0) {
    const double amp = std::sqrt(eta / static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) ks.push_back(amp * matrix_unit(d, i, j));
    }
  }
  return QuantumChannel(d, std::move(ks));
}

/// Same channel with every Kraus operator rescaled to unit Hilbert-Schmidt norm.
inline QuantumChannel hs_normalized(const QuantumChannel& ch) {
  std::vector<Eigen::MatrixXcd> ks;
  for (const auto& k : ch.kraus()) {
    const double n = k.norm();
    if (n <= 0.0) throw ValidationError("zero Kraus operator");
    ks.push_back(k / n);
  }
  return QuantumChannel(ch.dim(), std::move(ks));
}

inline constexpr double kCompletionTolerance = 1e-10;

/*
 * Extends a Kraus set to a Hilbert-Schmidt orthonormal basis of d x d
 * matrices. The inputs come first, rescaled to unit norm; the rest is
 * Gram-Schmidt over the matrix units |i><j| in lexicographic order, skipping
 * candidates whose projected norm falls below 1e-10. Inputs must be
 * mutually orthogonal and of equal norm, otherwise rescaling would change
 * the channel they describe.
 */
inline std::vector<Eigen::MatrixXcd> kraus_orthonormal_completion(const std::vector<Eigen::MatrixXcd>& kraus) {
  if (kraus.empty()) throw ValidationError("completion needs at least one Kraus operator");
  const Eigen::Index d = kraus.front().rows();
  if (d == 0 || kraus.front().cols() != d) throw ValidationError("Kraus operators must be square");
  const double n0 = kraus.front().norm();
  if (n0 <= 0.0) throw ValidationError("zero Kraus operator");
  std::vector<Eigen::MatrixXcd> basis;
  for (std::size_t a = 0; a < kraus.size(); ++a) {
    const auto& k = kraus[a];
    if (k.rows() != d || k.cols() != d) throw ValidationError("Kraus operators differ in shape");
    if (std::abs(k.norm() - n0) > kCompletionTolerance * n0) {
      throw ValidationError("Kraus operators must have equal Hilbert-Schmidt norm");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (std::abs(hs_inner(kraus[b], k)) > kCompletionTolerance * n0 * n0) {
        throw ValidationError("Kraus operators must be Hilbert-Schmidt orthogonal");
      }
    }
    basis.push_back(k / n0);
  }
  if (basis.size() > static_cast<std::size_t>(d * d)) throw ValidationError("too many Kraus operators");
  for (Eigen::Index i = 0; i < d && basis.size() < static_cast<std::size_t>(d * d); ++i) {
    for (Eigen::Index j = 0; j < d && basis.size() < static_cast<std::size_t>(d * d); ++j) {
      Eigen::MatrixXcd c = matrix_unit(static_cast<std::size_t>(d), static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) c -= hs_inner(q, c) * q;
      }
      const double n = c.norm();
      if (n < kCompletionTolerance) continue;
      basis.push_back(c / n);
    }
  }
  return basis;
}

}  // namespace pepslab

#endif  // PEPSLAB_CHANNEL_HPP_
