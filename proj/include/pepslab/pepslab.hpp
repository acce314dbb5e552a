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

// Umbrella header.

#ifndef PEPSLAB_PEPSLAB_HPP_
#define PEPSLAB_PEPSLAB_HPP_

#include "pepslab/channel.hpp"
#include "pepslab/circuit.hpp"
#include "pepslab/circuit_embed.hpp"
#include "pepslab/contraction.hpp"
#include "pepslab/error.hpp"
#include "pepslab/json_io.hpp"
#include "pepslab/lattice.hpp"
#include "pepslab/linalg.hpp"
#include "pepslab/noisy_sim.hpp"
#include "pepslab/parallel.hpp"
#include "pepslab/parent_hamiltonian.hpp"
#include "pepslab/peps.hpp"
#include "pepslab/random.hpp"
#include "pepslab/tensor.hpp"
#include "pepslab/tiling.hpp"

#endif  // PEPSLAB_PEPSLAB_HPP_
