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

// Experiment orchestration: sweep configuration, ensemble runs over
// (lattice, p) grid points, aggregation, S_max extraction, persistence and
// oracle validation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nrqc/lattice.hpp"
#include "nrqc/observables.hpp"

namespace nrqc {

/// Schema violation; `path()` names the offending field, e.g. "$.p[2]".
class ConfigError : public ArgumentError {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline constexpr int kSweepSchemaVersion = 1;

struct SweepConfig {
  std::vector<LatticeSpec> lattices;
  std::vector<double> p;
  std::size_t chi = 0;
  std::size_t depth_max = 0;
  std::size_t instances = 40;
  std::uint64_t master_seed = 0;
  std::size_t observe_every = 2;
  std::filesystem::path output_dir;  // empty: nothing is written
  double trace_floor = 0.5;
  std::size_t workers = 1;
  bool record_spectra = false;  // middle-cut spectra at every observed depth

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// JSON document:
///   {"schema_version": 1, "lattices": [[L1, L2], ...], "p": [...],
///    "chi": N, "depth_max": N, "master_seed": N, "output_dir": "...",
///    optional "instances" (40), "observe_every" (2), "trace_floor" (0.5),
///    "workers" (1), "record_spectra" (false)}
/// Unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& doc);
nlohmann::json sweep_config_to_json(const SweepConfig& config);
SweepConfig load_sweep_config(const std::filesystem::path& file);

/// Seed of instance k on a lattice. Independent of p, so every noise rate
/// sees the same circuit ensemble.
std::uint64_t instance_seed(std::uint64_t master_seed, const LatticeSpec& lattice, std::size_t instance);

enum class InstanceStatus { Ok, Flagged, Failed };
const char* status_name(InstanceStatus status);

struct InstanceResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  InstanceStatus status = InstanceStatus::Ok;
  std::string message;
  std::vector<DepthRecord> records;
  std::vector<std::vector<double>> spectra;  // parallel to records when recorded
  double wall_seconds = 0.0;
};

/// Mean and standard error over the included instances at one depth.
struct AggregateRow {
  std::size_t depth = 0;
  std::size_t count = 0;
  double mean_s_max = 0.0, stderr_s_max = 0.0;
  double min_s_max = 0.0, max_s_max = 0.0;
  double mean_s2 = 0.0, stderr_s2 = 0.0;
  double mean_trace = 0.0, stderr_trace = 0.0;
  double mean_purity = 0.0, stderr_purity = 0.0;
  std::vector<double> mean_ee, stderr_ee;  // per cut
};

struct SMaxEstimate {
  double value = 0.0;
  std::size_t depth = 0;
  bool bracketed = false;  // false when the maximum sits at the last depth
};

/// Maximum of a sampled curve; ties resolve to the smaller depth. Throws
/// ArgumentError for an empty curve.
SMaxEstimate extract_s_max(std::span<const std::size_t> depths, std::span<const double> values);

struct GridPointResult {
  LatticeSpec lattice;
  double p = 0.0;
  std::vector<InstanceResult> instances;
  std::vector<AggregateRow> aggregate;
  SMaxEstimate s_max_of_mean;
  double mean_of_max = 0.0;  // mean over instances of each instance's peak
  std::size_t ok = 0, flagged = 0, failed = 0;

  bool has_failures() const noexcept { return failed > 0; }
  std::string label() const;  // "4x4_p0.16"
};

/// Aggregates the Ok instances of a grid point and fills the S_max fields.
/// Throws NumericError if no instance is usable.
void aggregate_grid_point(GridPointResult& point);

struct SweepResult {
  SweepConfig config;
  std::vector<GridPointResult> points;  // lattice-major, then p, config order
  double wall_seconds = 0.0;

  bool partial() const;
};

/// One S_max row per grid point.
struct SMaxSummary {
  LatticeSpec lattice;
  double p = 0.0;
  SMaxEstimate of_mean;
  double mean_of_max = 0.0;
};
std::vector<SMaxSummary> extract_s_max(const SweepResult& result);

/// Called after every finished instance, possibly from a worker thread but
/// never concurrently.
using ProgressCallback = std::function<void(const GridPointResult& point, const InstanceResult& instance)>;

/// Run every (lattice, p, instance) and aggregate. Output is independent of
/// the worker count. When config.output_dir is set, writes per grid point
/// raw_<label>.csv, aggregate_<label>.csv (and spectra_<label>.csv), plus
/// s_max.csv and manifest.json.
SweepResult run_sweep(const SweepConfig& config, const ProgressCallback& progress = {});

/// Simulate a single instance exactly as run_sweep does.
InstanceResult run_instance(const LatticeSpec& lattice, double p, std::size_t chi, std::size_t depth,
                            std::uint64_t seed, std::size_t observe_every, double trace_floor, bool record_spectra,
                            std::size_t index = 0);

void write_raw_csv(std::ostream& os, const GridPointResult& point, std::size_t chi);
void write_aggregate_csv(std::ostream& os, const GridPointResult& point);
void write_s_max_csv(std::ostream& os, const SweepResult& result);
void write_spectra_csv(std::ostream& os, const GridPointResult& point);
nlohmann::json sweep_manifest(const SweepResult& result);

struct ValidationRow {
  std::size_t chi = 0;
  double trace = 0.0;
  double fidelity = 0.0;
  double purity_engine = 0.0;
  double purity_exact = 0.0;
  double cum_discarded = 0.0;
};

inline constexpr std::size_t kValidationMaxQubits = 10;

/// Engine versus dense oracle on one circuit, one row per chi (in the given
/// order). Fidelity is Tr sqrt(sqrt(sigma) rho sqrt(sigma)) with the exact
/// sigma and the unnormalized engine rho. Throws SizeCapError above
/// kValidationMaxQubits.
std::vector<ValidationRow> validate_against_oracle(const LatticeSpec& lattice, double p, std::size_t depth,
                                                   std::span<const std::size_t> chis, std::uint64_t seed);

}  // namespace nrqc
