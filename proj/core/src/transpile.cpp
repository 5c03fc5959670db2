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

#include "protonpipe/transpile.hpp"

#include <algorithm>
#include <numeric>

#include "protonpipe/errors.hpp"
#include "protonpipe/kak.hpp"

namespace protonpipe {

namespace {

void emit_swap_as_cx(Circuit& out, std::size_t a, std::size_t b) {
  out.cx(a, b);
  out.cx(b, a);
  out.cx(a, b);
}

}  // namespace

TranspileResult transpile(const Circuit& c, const CouplingMap& map,
                          const std::vector<std::size_t>& initial_layout) {
  if (c.n_qubits() > map.n_qubits()) {
    throw ValidationError("circuit does not fit on the coupling map");
  }
  std::vector<std::size_t> layout = initial_layout;
  if (layout.empty()) {
    layout.resize(c.n_qubits());
    std::iota(layout.begin(), layout.end(), 0);
  }
  if (layout.size() != c.n_qubits()) {
    throw ValidationError("initial layout size does not match the circuit");
  }
  {
    std::vector<bool> used(map.n_qubits(), false);
    for (std::size_t p : layout) {
      if (p >= map.n_qubits() || used[p]) {
        throw ValidationError("initial layout is not a valid assignment");
      }
      used[p] = true;
    }
  }

  TranspileResult result;
  result.initial_layout = layout;
  result.circuit = Circuit(map.n_qubits());
  Circuit& out = result.circuit;

  auto route_together = [&](std::size_t la, std::size_t lb) {
    // Moves logical qubit la along the shortest physical path until it is
    // adjacent to lb, recording layout updates.
    const auto path = map.shortest_path(layout[la], layout[lb]);
    if (path.empty()) {
      throw RoutingError("qubits " + std::to_string(layout[la]) + " and " +
                         std::to_string(layout[lb]) +
                         " are disconnected on the coupling map");
    }
    for (std::size_t step = 0; step + 2 < path.size(); ++step) {
      const std::size_t from = path[step];
      const std::size_t to = path[step + 1];
      emit_swap_as_cx(out, from, to);
      // Update layout: whatever logical qubits sit on `from`/`to` swap.
      for (auto& p : layout) {
        if (p == from) {
          p = to;
        } else if (p == to) {
          p = from;
        }
      }
    }
  };

  for (const auto& g : c.gates()) {
    if (!g.is_two_qubit()) {
      Gate mapped = g;
      mapped.qubits[0] = layout[g.qubits[0]];
      out.append(mapped);
      continue;
    }
    const std::size_t la = g.qubits[0];
    const std::size_t lb = g.qubits[1];
    if (!map.has_edge(layout[la], layout[lb])) {
      route_together(la, lb);
    }
    const std::size_t pa = layout[la];
    const std::size_t pb = layout[lb];
    switch (g.kind) {
      case GateKind::CZ:
        out.cz(pa, pb);
        break;
      case GateKind::CX:
        out.cx(pa, pb);
        break;
      case GateKind::SWAP:
        emit_swap_as_cx(out, pa, pb);
        break;
      case GateKind::Unitary2Q: {
        // The gate's local basis has qubits[0] on the low bit.
        const Circuit block =
            two_qubit_block_circuit(g.block, pa, pb, map.n_qubits());
        out.extend(block);
        break;
      }
      default:
        throw Error("unhandled two-qubit gate kind");
    }
  }
  result.final_layout = layout;
  return result;
}

}  // namespace protonpipe
