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

#include "protonpipe/coupling.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "protonpipe/errors.hpp"

namespace protonpipe {

void CouplingMap::add_edge(std::size_t a, std::size_t b) {
  if (a >= n_qubits_ || b >= n_qubits_ || a == b) {
    throw ValidationError("invalid coupling edge");
  }
  edges_.emplace(std::min(a, b), std::max(a, b));
}

bool CouplingMap::has_edge(std::size_t a, std::size_t b) const {
  return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<std::size_t> CouplingMap::neighbors(std::size_t q) const {
  std::vector<std::size_t> out;
  for (const auto& [a, b] : edges_) {
    if (a == q) out.push_back(b);
    if (b == q) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool CouplingMap::is_connected() const {
  if (n_qubits_ == 0) return true;
  std::vector<bool> seen(n_qubits_, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t q = queue.front();
    queue.pop_front();
    for (std::size_t nb : neighbors(q)) {
      if (!seen[nb]) {
        seen[nb] = true;
        ++reached;
        queue.push_back(nb);
      }
    }
  }
  return reached == n_qubits_;
}

std::size_t CouplingMap::max_degree() const {
  std::vector<std::size_t> deg(n_qubits_, 0);
  for (const auto& [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::size_t> CouplingMap::shortest_path(std::size_t from,
                                                    std::size_t to) const {
  if (from >= n_qubits_ || to >= n_qubits_) {
    throw ValidationError("path endpoint out of range");
  }
  std::vector<std::size_t> parent(n_qubits_, n_qubits_);
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    const std::size_t q = queue.front();
    queue.pop_front();
    if (q == to) break;
    for (std::size_t nb : neighbors(q)) {  // ascending: lexicographic paths
      if (parent[nb] == n_qubits_) {
        parent[nb] = q;
        queue.push_back(nb);
      }
    }
  }
  if (parent[to] == n_qubits_) return {};
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Brick-wall honeycomb corner graph for d rows of hexagonal cells:
// corner rows y = 0..d of 2d+1 vertices, vertical struts every other
// column with alternating row offset.
struct CornerGraph {
  std::size_t width;  // vertices per row
  std::size_t rows;   // corner rows
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t index(std::size_t x, std::size_t y) const { return y * width + x; }
};

CornerGraph honeycomb_corners(std::size_t d) {
  CornerGraph g;
  g.width = 2 * d + 1;
  g.rows = d + 1;
  for (std::size_t y = 0; y < g.rows; ++y) {
    for (std::size_t x = 0; x + 1 < g.width; ++x) {
      g.edges.emplace_back(g.index(x, y), g.index(x + 1, y));
    }
  }
  for (std::size_t gap = 0; gap + 1 < g.rows; ++gap) {
    for (std::size_t x = gap % 2; x < g.width; x += 2) {
      g.edges.emplace_back(g.index(x, gap), g.index(x, gap + 1));
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace

CouplingMap heavy_hex(std::size_t distance) {
  if (distance < 1) throw ValidationError("heavy-hex distance must be >= 1");
  const CornerGraph corners = honeycomb_corners(distance);
  const std::size_t n_corners = corners.width * corners.rows;
  CouplingMap map(n_corners + corners.edges.size());
  std::size_t next = n_corners;
  for (const auto& [a, b] : corners.edges) {
    map.add_edge(a, next);
    map.add_edge(next, b);
    ++next;
  }
  return map;
}

std::size_t heavy_hex_node_count(std::size_t d) {
  const std::size_t corners = (d + 1) * (2 * d + 1);
  const std::size_t horizontal = (d + 1) * 2 * d;
  const std::size_t vertical = ((d + 1) / 2) * (d + 1) + (d / 2) * d;
  return corners + horizontal + vertical;
}

std::size_t heavy_hex_edge_count(std::size_t d) {
  const std::size_t horizontal = (d + 1) * 2 * d;
  const std::size_t vertical = ((d + 1) / 2) * (d + 1) + (d / 2) * d;
  return 2 * (horizontal + vertical);
}

CouplingMap line_map(std::size_t n) {
  CouplingMap map(n);
  for (std::size_t q = 0; q + 1 < n; ++q) map.add_edge(q, q + 1);
  return map;
}

CouplingMap ring_map(std::size_t n) {
  if (n < 3) throw ValidationError("ring map needs at least 3 qubits");
  CouplingMap map = line_map(n);
  map.add_edge(n - 1, 0);
  return map;
}

CouplingMap full_map(std::size_t n) {
  CouplingMap map(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) map.add_edge(a, b);
  return map;
}

CouplingMap coupling_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("coupling spec must look like `line:4`");
  }
  const std::string kind = spec.substr(0, colon);
  std::size_t arg = 0;
  try {
    arg = std::stoul(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw ValidationError("bad coupling size in `" + spec + "`");
  }
  if (kind == "heavyhex") return heavy_hex(arg);
  if (kind == "line") return line_map(arg);
  if (kind == "ring") return ring_map(arg);
  if (kind == "full") return full_map(arg);
  throw ValidationError("unknown coupling family `" + kind + "`");
}

}  // namespace protonpipe
