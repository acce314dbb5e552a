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

#ifndef PEPSLAB_ERROR_HPP_
#define PEPSLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pepslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown leg labels, dimension mismatches, invalid
/// circuits, bad files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A size guard refused to run an exact computation.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// The inputs are well formed but the computation is numerically ill posed
/// (null state, rank-deficient tensor, non-integral count, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonInjectiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pepslab

#endif  // PEPSLAB_ERROR_HPP_
