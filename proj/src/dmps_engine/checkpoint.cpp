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

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nrqc/density_mps.hpp"
#include "nrqc/errors.hpp"

namespace nrqc {

namespace {
constexpr const char* kCheckpointFormat = "nrqc-density-mps";
constexpr int kCheckpointVersion = 1;
}  // namespace

nlohmann::json checkpoint_to_json(const DensityMps& state, const CheckpointInfo& info) {
  nlohmann::json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["basis"] = "pauli-normalized";
  doc["lattice"] = {{"L1", state.lattice().rows}, {"L2", state.lattice().cols}};
  doc["chi_max"] = state.chi_max();
  doc["ortho_center"] = state.ortho_center() ? nlohmann::json(*state.ortho_center()) : nlohmann::json(nullptr);
  doc["cum_discarded"] = state.cum_discarded();
  doc["master_seed"] = info.master_seed;
  doc["depth_reached"] = info.depth_reached;
  doc["p"] = info.p;
  nlohmann::json sites = nlohmann::json::array();
  for (std::size_t i = 0; i < state.size(); ++i) {
    const RealTensor& t = state.site(i);
    sites.push_back({{"shape", t.shape()}, {"data", std::vector<double>(t.data().begin(), t.data().end())}});
  }
  doc["sites"] = std::move(sites);
  return doc;
}

DensityMps checkpoint_from_json(const nlohmann::json& doc, CheckpointInfo* info) {
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) throw ArgumentError("checkpoint: unknown format");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) throw ArgumentError(fmt::format("checkpoint: unsupported version {}", version));
    if (doc.at("basis").get<std::string>() != "pauli-normalized") throw ArgumentError("checkpoint: unknown basis");
    const LatticeSpec lattice{doc.at("lattice").at("L1").get<std::size_t>(), doc.at("lattice").at("L2").get<std::size_t>()};
    std::vector<RealTensor> sites;
    for (const auto& s : doc.at("sites")) {
      sites.emplace_back(s.at("shape").get<Shape>(), s.at("data").get<std::vector<double>>());
    }
    std::optional<std::size_t> center;
    if (!doc.at("ortho_center").is_null()) center = doc.at("ortho_center").get<std::size_t>();
    if (info) {
      info->master_seed = doc.at("master_seed").get<std::uint64_t>();
      info->depth_reached = doc.at("depth_reached").get<std::size_t>();
      info->p = doc.at("p").get<double>();
    }
    return DensityMps::from_sites(lattice, doc.at("chi_max").get<std::size_t>(), std::move(sites), center,
                                  doc.at("cum_discarded").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(fmt::format("checkpoint: {}", e.what()));
  }
}

}  // namespace nrqc
