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

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace protonpipe {

/// Undirected qubit connectivity graph.
class CouplingMap {
 public:
  explicit CouplingMap(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::set<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  std::vector<std::size_t> neighbors(std::size_t q) const;
  bool is_connected() const;
  std::size_t max_degree() const;

  /// Lexicographically smallest shortest path (BFS); empty if unreachable.
  std::vector<std::size_t> shortest_path(std::size_t from, std::size_t to) const;

 private:
  std::size_t n_qubits_;
  std::set<std::pair<std::size_t, std::size_t>> edges_;
};

/// Heavy-hexagonal lattice: a brick-wall honeycomb patch of d rows of
/// hexagonal cells with every coupler edge subdivided by an extra qubit,
/// matching the degree-<=3 topology of Heron-class devices. Corner qubits
/// are indexed row-major, subdivision qubits follow in sorted edge order.
CouplingMap heavy_hex(std::size_t distance);

/// Closed-form node/edge counts for heavy_hex(distance).
std::size_t heavy_hex_node_count(std::size_t distance);
std::size_t heavy_hex_edge_count(std::size_t distance);

CouplingMap line_map(std::size_t n_qubits);
CouplingMap ring_map(std::size_t n_qubits);
CouplingMap full_map(std::size_t n_qubits);

/// Parses "heavyhex:3", "line:4", "ring:5" or "full:4".
CouplingMap coupling_from_spec(const std::string& spec);

}  // namespace protonpipe
