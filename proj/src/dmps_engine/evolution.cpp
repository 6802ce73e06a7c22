// Copyright 2026 The nrqc Authors
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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nrqc/density_mps.hpp"
#include "nrqc/errors.hpp"

namespace nrqc {

std::vector<OrientedGate> oriented_layer(const GateLayer& layer, const SiteMap& map) {
  std::vector<OrientedGate> gates;
  gates.reserve(layer.size());
  for (const Gate& g : layer) {
    const std::size_t pa = map.position(g.edge.a);
    const std::size_t pb = map.position(g.edge.b);
    if (pa < pb) {
      gates.push_back({pa, pb, g.unitary});
    } else {
      gates.push_back({pb, pa, swap_qubit_order(g.unitary)});
    }
  }
  std::stable_sort(gates.begin(), gates.end(), [](const OrientedGate& x, const OrientedGate& y) { return x.lo < y.lo; });
  return gates;
}

std::vector<TruncationReport> run_circuit(DensityMps& state, const CircuitInstance& circuit, NoiseParams noise,
                                          const EvolutionOptions& options, const DepthObserver& observer) {
  if (!(state.lattice() == circuit.lattice)) {
    throw ArgumentError(fmt::format("state lattice {} differs from circuit lattice {}", state.lattice().label(),
                                    circuit.lattice.label()));
  }
  if (options.observe_every < 1) throw ArgumentError("observe_every must be >= 1");
  if (options.first_layer > circuit.depth) throw ArgumentError("first_layer beyond circuit depth");
  // Validates p up front rather than at the first gate.
  (void)depolarizing_superop(noise);

  std::vector<TruncationReport> reports;
  reports.reserve(circuit.depth - options.first_layer);
  if (options.first_layer == 0 && observer) observer(0, state);

  for (std::size_t layer = options.first_layer; layer < circuit.depth; ++layer) {
    TruncationReport layer_report;
    for (const OrientedGate& g : oriented_layer(circuit.layers[layer], state.site_map())) {
      const TransferMatrix t = pauli_transfer_matrix(noisy_gate_superop(g.unitary, noise));
      layer_report += state.apply_long_range_transfer(g.lo, g.hi, t);
    }
    layer_report.max_bond = std::max(layer_report.max_bond, state.max_bond());
    reports.push_back(layer_report);

    const std::size_t depth = layer + 1;
    const double tr = state.trace();
    if (!std::isfinite(tr)) throw NumericError(fmt::format("non-finite trace at depth {}", depth));
    if (tr < options.trace_floor) {
      throw TraceFloorError(fmt::format("trace {:.6f} fell below floor {} at depth {}", tr, options.trace_floor, depth),
                            depth, tr);
    }
    if (observer && (depth % options.observe_every == 0 || depth == circuit.depth)) observer(depth, state);
  }
  return reports;
}

std::vector<TruncationReport> run_circuit(const CircuitInstance& circuit, NoiseParams noise, std::size_t chi_max,
                                          const EvolutionOptions& options, const DepthObserver& observer) {
  DensityMps state = DensityMps::zero_state(circuit.lattice, chi_max);
  return run_circuit(state, circuit, noise, options, observer);
}

}  // namespace nrqc
