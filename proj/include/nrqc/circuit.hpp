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

// Random circuit architecture: eight recycled layers of nearest-neighbour
// two-qubit Haar gates on a 2D grid.
//
// Layer classes. Horizontal edges (r,c)-(r,c+1) are grouped by
// (c mod 2, r mod 2), vertical edges (r,c)-(r+1,c) by (r mod 2, c mod 2).
// The recycled sequence A..H is
//
//   A = V(0,0)  B = H(0,0)  C = V(1,0)  D = H(1,0)
//   E = V(0,1)  F = H(0,1)  G = V(1,1)  H = H(1,1)
//
// so layer k of a circuit uses pattern k mod 8. Each class is a matching and
// together they cover every edge exactly once.
//
// Seeding. The unitary on edge (a, b) in layer k is drawn from a generator
// keyed by derive_seed(master_seed, k, index(a), index(b)), where index is
// the row-major site index. Gates therefore do not depend on generation
// order, and circuits of different depth share their common prefix.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "nrqc/lattice.hpp"

namespace nrqc {

inline constexpr std::size_t kNumLayerPatterns = 8;

/// Edges of pattern k (0..7). Throws ArgumentError for k > 7.
std::vector<Edge> layer_pattern(std::size_t k, const LatticeSpec& lattice);

/// Pattern letter 'A'..'H'.
char layer_pattern_name(std::size_t k);

/// splitmix64-style key derivation. Pure and order sensitive.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Haar-random 4x4 unitary: complex Ginibre matrix, QR, and the phases of
/// diag(R) moved into Q so that R has a positive real diagonal.
Eigen::Matrix4cd sample_haar_unitary(std::mt19937_64& rng);

/// Max-norm distance of U^dagger U from the identity.
double unitarity_defect(const Eigen::Matrix4cd& u);

struct Gate {
  Edge edge;
  /// Acts on (qubit a) (x) (qubit b) with qubit a the more significant factor.
  Eigen::Matrix4cd unitary;
};

using GateLayer = std::vector<Gate>;

struct CircuitInstance {
  LatticeSpec lattice;
  std::size_t depth = 0;
  std::uint64_t master_seed = 0;
  std::vector<GateLayer> layers;  // layers.size() == depth
};

CircuitInstance build_circuit(const LatticeSpec& lattice, std::size_t depth, std::uint64_t master_seed);

/// JSON document with lattice, depth and seed; unitaries as [re, im] pairs
/// when `embed_unitaries` is set.
nlohmann::json circuit_to_json(const CircuitInstance& circuit, bool embed_unitaries = false);

/// Inverse of circuit_to_json. Embedded unitaries are used as stored (after a
/// unitarity check); otherwise they are regenerated from the seed.
CircuitInstance circuit_from_json(const nlohmann::json& doc);

}  // namespace nrqc
