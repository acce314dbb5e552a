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

#ifndef PEPSLAB_RANDOM_HPP_
#define PEPSLAB_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pepslab/tensor.hpp"

namespace pepslab {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/*
 * All randomness flows through this generator. The engine is std::mt19937_64,
 * whose output sequence is fixed by the C++ standard. Uniform and normal
 * variates are derived here (53-bit mantissa, Box-Muller) rather than through
 * <random> distributions, whose algorithms are implementation defined, so
 * the same seed produces the same numbers on every platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() {
    const double re = normal(), im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Eigen::MatrixXcd random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

/// rows x cols matrix with orthonormal columns (rows >= cols), Haar distributed.
inline Eigen::MatrixXcd random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < cols) throw ValidationError("isometry needs rows >= cols");
  const Eigen::MatrixXcd g = random_gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  // Fix the phase ambiguity of QR so the distribution is Haar.
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < cols; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Eigen::MatrixXcd random_unitary(std::size_t n, Rng& rng) { return random_isometry(n, n, rng); }

inline Eigen::MatrixXcd random_hermitian(std::size_t n, Rng& rng) {
  const Eigen::MatrixXcd g = random_gaussian_matrix(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

inline Tensor random_tensor(std::vector<Leg> legs, Rng& rng) {
  Tensor t = Tensor::zeros(std::move(legs));
  for (cplx& z : t.data()) z = rng.complex_normal();
  return t;
}

}  // namespace pepslab

#endif  // PEPSLAB_RANDOM_HPP_
