// Copyright 2026 The protonpipe developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "protonpipe/circuit.hpp"
#include "protonpipe/coupling.hpp"

namespace protonpipe {

struct TranspileResult {
  Circuit circuit;              // over map.n_qubits() physical qubits
  std::vector<std::size_t> initial_layout;  // logical -> physical
  std::vector<std::size_t> final_layout;    // logical -> physical after SWAPs

  TranspileResult() : circuit(0) {}
};

/// Routes a circuit onto the coupling map with greedy SWAP insertion along
/// lexicographically smallest shortest paths (ties broken by lowest qubit
/// index). Inserted SWAPs are expanded to CX; generic two-qubit blocks are
/// synthesized into at most 3 CZ plus rotations. The output satisfies
///   U(out) * Embed(initial_layout) = Embed(final_layout) * U(in)
/// up to global phase, where Embed places logical qubit l on physical qubit
/// layout[l] and leaves the rest in |0>.
TranspileResult transpile(const Circuit& c, const CouplingMap& map,
                          const std::vector<std::size_t>& initial_layout = {});

}  // namespace protonpipe
