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

#include "nrqc/circuit.hpp"

#include <algorithm>

#include <Eigen/QR>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nrqc/errors.hpp"

namespace nrqc {
namespace {

struct PatternClass {
  bool vertical;
  std::size_t first;   // parity of r for vertical, c for horizontal
  std::size_t second;  // parity of c for vertical, r for horizontal
};

constexpr std::array<PatternClass, kNumLayerPatterns> kPatterns = {{
    {true, 0, 0},
    {false, 0, 0},
    {true, 1, 0},
    {false, 1, 0},
    {true, 0, 1},
    {false, 0, 1},
    {true, 1, 1},
    {false, 1, 1},
}};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<Edge> layer_pattern(std::size_t k, const LatticeSpec& lattice) {
  if (k >= kNumLayerPatterns) throw ArgumentError(fmt::format("layer pattern index {} not in 0..7", k));
  const PatternClass cls = kPatterns[k];
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < lattice.rows; ++r) {
    for (std::size_t c = 0; c < lattice.cols; ++c) {
      if (cls.vertical) {
        if (r + 1 < lattice.rows && r % 2 == cls.first && c % 2 == cls.second) {
          edges.push_back({{r, c}, {r + 1, c}});
        }
      } else if (c + 1 < lattice.cols && c % 2 == cls.first && r % 2 == cls.second) {
        edges.push_back({{r, c}, {r, c + 1}});
      }
    }
  }
  return edges;
}

char layer_pattern_name(std::size_t k) {
  if (k >= kNumLayerPatterns) throw ArgumentError("layer pattern index out of range");
  return static_cast<char>('A' + k);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(parent);
  h = splitmix64(h ^ splitmix64(a + 0x1000));
  h = splitmix64(h ^ splitmix64(b + 0x2000));
  h = splitmix64(h ^ splitmix64(c + 0x3000));
  return h;
}

Eigen::Matrix4cd sample_haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix4cd z;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = std::complex<double>(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
  Eigen::Matrix4cd q = qr.householderQ();
  const Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) {
    const double mag = std::abs(r(j, j));
    const std::complex<double> phase = mag > 0.0 ? r(j, j) / mag : std::complex<double>(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

double unitarity_defect(const Eigen::Matrix4cd& u) {
  return (u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
}

CircuitInstance build_circuit(const LatticeSpec& lattice, std::size_t depth, std::uint64_t master_seed) {
  validate_circuit_lattice(lattice);
  CircuitInstance circuit{lattice, depth, master_seed, {}};
  circuit.layers.reserve(depth);
  std::array<std::vector<Edge>, kNumLayerPatterns> patterns;
  for (std::size_t k = 0; k < kNumLayerPatterns; ++k) patterns[k] = layer_pattern(k, lattice);

  for (std::size_t layer = 0; layer < depth; ++layer) {
    GateLayer gates;
    for (const Edge& e : patterns[layer % kNumLayerPatterns]) {
      std::mt19937_64 rng(derive_seed(master_seed, layer, row_major_index(lattice, e.a), row_major_index(lattice, e.b)));
      gates.push_back({e, sample_haar_unitary(rng)});
    }
    circuit.layers.push_back(std::move(gates));
  }
  return circuit;
}

nlohmann::json circuit_to_json(const CircuitInstance& circuit, bool embed_unitaries) {
  nlohmann::json doc;
  doc["format"] = "nrqc-circuit";
  doc["version"] = 1;
  doc["lattice"] = {{"L1", circuit.lattice.rows}, {"L2", circuit.lattice.cols}};
  doc["depth"] = circuit.depth;
  doc["master_seed"] = circuit.master_seed;
  doc["pattern_sequence"] = "ABCDEFGH";
  if (embed_unitaries) {
    nlohmann::json layers = nlohmann::json::array();
    for (const GateLayer& layer : circuit.layers) {
      nlohmann::json gates = nlohmann::json::array();
      for (const Gate& g : layer) {
        nlohmann::json entries = nlohmann::json::array();
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) entries.push_back({g.unitary(r, c).real(), g.unitary(r, c).imag()});
        }
        gates.push_back({{"a", {g.edge.a.row, g.edge.a.col}}, {"b", {g.edge.b.row, g.edge.b.col}}, {"unitary", entries}});
      }
      layers.push_back(std::move(gates));
    }
    doc["layers"] = std::move(layers);
  }
  return doc;
}

CircuitInstance circuit_from_json(const nlohmann::json& doc) {
  try {
    const LatticeSpec lattice{doc.at("lattice").at("L1").get<std::size_t>(), doc.at("lattice").at("L2").get<std::size_t>()};
    CircuitInstance circuit =
        build_circuit(lattice, doc.at("depth").get<std::size_t>(), doc.at("master_seed").get<std::uint64_t>());
    if (!doc.contains("layers")) return circuit;

    const auto& layers = doc.at("layers");
    if (layers.size() != circuit.depth) throw ArgumentError("circuit JSON: layer count differs from depth");
    for (std::size_t k = 0; k < circuit.depth; ++k) {
      const auto& gates = layers.at(k);
      if (gates.size() != circuit.layers[k].size()) throw ArgumentError("circuit JSON: gate count mismatch");
      for (std::size_t g = 0; g < gates.size(); ++g) {
        Gate& gate = circuit.layers[k][g];
        const Edge stored{{gates[g].at("a").at(0).get<std::size_t>(), gates[g].at("a").at(1).get<std::size_t>()},
                          {gates[g].at("b").at(0).get<std::size_t>(), gates[g].at("b").at(1).get<std::size_t>()}};
        if (stored != gate.edge) throw ArgumentError("circuit JSON: edge does not match the layer pattern");
        const auto& entries = gates[g].at("unitary");
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) {
            const auto& e = entries.at(static_cast<std::size_t>(4 * r + c));
            gate.unitary(r, c) = {e.at(0).get<double>(), e.at(1).get<double>()};
          }
        }
        if (unitarity_defect(gate.unitary) > 1e-12) throw ArgumentError("circuit JSON: embedded gate is not unitary");
      }
    }
    return circuit;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(fmt::format("circuit JSON: {}", e.what()));
  }
}

}  // namespace nrqc
