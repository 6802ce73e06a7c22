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

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace nrqc {

/// Rectangular qubit layout with `rows` = L1 and `cols` = L2.
struct LatticeSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t num_qubits() const noexcept { return rows * cols; }
  std::string label() const;  // "4x5"
  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Circuits are only defined on L1 x L2 lattices with 2 <= L1 <= L2.
/// Throws ArgumentError otherwise.
void validate_circuit_lattice(const LatticeSpec& lattice);

struct Site {
  std::size_t row = 0;
  std::size_t col = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

/// Row-major index r * L2 + c.
inline std::size_t row_major_index(const LatticeSpec& lattice, Site s) { return s.row * lattice.cols + s.col; }

/// Nearest-neighbour pair with `a` before `b` in row-major order.
struct Edge {
  Site a;
  Site b;
  bool horizontal() const noexcept { return a.row == b.row; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Every nearest-neighbour edge of the lattice, row-major by `a`.
std::vector<Edge> all_edges(const LatticeSpec& lattice);

}  // namespace nrqc
