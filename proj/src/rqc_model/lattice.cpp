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

#include "nrqc/lattice.hpp"

#include <fmt/format.h>

#include "nrqc/errors.hpp"

namespace nrqc {

std::string LatticeSpec::label() const { return fmt::format("{}x{}", rows, cols); }

void validate_circuit_lattice(const LatticeSpec& lattice) {
  if (lattice.rows < 2 || lattice.cols < 2) {
    throw ArgumentError(fmt::format("lattice {} needs L1 >= 2 and L2 >= 2", lattice.label()));
  }
  if (lattice.rows > lattice.cols) {
    throw ArgumentError(fmt::format("lattice {} violates L1 <= L2", lattice.label()));
  }
}

std::vector<Edge> all_edges(const LatticeSpec& lattice) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < lattice.rows; ++r) {
    for (std::size_t c = 0; c < lattice.cols; ++c) {
      if (c + 1 < lattice.cols) edges.push_back({{r, c}, {r, c + 1}});
      if (r + 1 < lattice.rows) edges.push_back({{r, c}, {r + 1, c}});
    }
  }
  return edges;
}

}  // namespace nrqc
