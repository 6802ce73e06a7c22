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

#include <cstddef>

#include "nrqc/errors.hpp"
#include "nrqc/lattice.hpp"

namespace nrqc {

/// Column-major boustrophedon embedding of the lattice into a chain:
///
///   position(r, c) = c * L1 + (c even ? r : L1 - 1 - r)
///
/// Each column is a contiguous chain segment, so the column bipartition
/// "columns [0, l) | columns [l, L2)" is the chain bond at position l * L1.
/// Bond b sits between chain sites b - 1 and b.
class SiteMap {
 public:
  explicit SiteMap(const LatticeSpec& lattice) : lattice_(lattice) {}

  std::size_t size() const noexcept { return lattice_.num_qubits(); }

  std::size_t position(Site s) const {
    if (s.row >= lattice_.rows || s.col >= lattice_.cols) throw ArgumentError("site outside the lattice");
    const std::size_t within = (s.col % 2 == 0) ? s.row : lattice_.rows - 1 - s.row;
    return s.col * lattice_.rows + within;
  }

  Site site(std::size_t position) const {
    if (position >= size()) throw ArgumentError("chain position out of range");
    const std::size_t col = position / lattice_.rows;
    const std::size_t within = position % lattice_.rows;
    return {(col % 2 == 0) ? within : lattice_.rows - 1 - within, col};
  }

  /// Chain bond of the column cut l in 1..L2-1.
  std::size_t cut_bond(std::size_t ell) const {
    if (ell < 1 || ell >= lattice_.cols) throw ArgumentError("column cut must lie in 1..L2-1");
    return ell * lattice_.rows;
  }

 private:
  LatticeSpec lattice_;
};

}  // namespace nrqc
