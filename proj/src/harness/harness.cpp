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

#include "nrqc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nrqc/circuit.hpp"
#include "nrqc/density_mps.hpp"
#include "nrqc/errors.hpp"
#include "nrqc/exact_oracle.hpp"

#ifndef NRQC_VERSION
#define NRQC_VERSION "unknown"
#endif

namespace nrqc {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const Json& require(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(fmt::format("$.{}", key), "required field is missing");
  return doc.at(key);
}

std::uint64_t as_uint(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double n = static_cast<double>(xs.size());
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::size_t middle_cut(const LatticeSpec& lattice) { return std::max<std::size_t>(1, lattice.cols / 2); }

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  writer(os);
  if (!os) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

}  // namespace

ConfigError::ConfigError(std::string path, const std::string& message)
    : ArgumentError(fmt::format("{}: {}", path, message)), path_(std::move(path)) {}

void SweepConfig::validate() const {
  if (lattices.empty()) throw ConfigError("$.lattices", "at least one lattice is required");
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    try {
      validate_circuit_lattice(lattices[i]);
    } catch (const ArgumentError& e) {
      throw ConfigError(fmt::format("$.lattices[{}]", i), e.what());
    }
  }
  if (p.empty()) throw ConfigError("$.p", "at least one noise rate is required");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] <= 1.0)) throw ConfigError(fmt::format("$.p[{}]", i), "noise rate must lie in (0, 1]");
  }
  if (chi < 1) throw ConfigError("$.chi", "must be >= 1");
  if (depth_max < 1) throw ConfigError("$.depth_max", "must be >= 1");
  if (instances < 1) throw ConfigError("$.instances", "must be >= 1");
  if (observe_every < 1) throw ConfigError("$.observe_every", "must be >= 1");
  if (workers < 1) throw ConfigError("$.workers", "must be >= 1");
  if (!(trace_floor >= 0.0 && trace_floor < 1.0)) throw ConfigError("$.trace_floor", "must lie in [0, 1)");
}

SweepConfig sweep_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  static const std::set<std::string> known = {"schema_version", "lattices",      "p",           "chi",
                                              "depth_max",      "instances",     "master_seed", "observe_every",
                                              "output_dir",     "trace_floor",   "workers",     "record_spectra"};
  for (const auto& item : doc.items()) {
    if (known.count(item.key()) == 0) throw ConfigError(fmt::format("$.{}", item.key()), "unknown field");
  }
  const std::uint64_t version = as_uint(require(doc, "schema_version"), "$.schema_version");
  if (version != kSweepSchemaVersion) {
    throw ConfigError("$.schema_version", fmt::format("unsupported version {}, expected {}", version, kSweepSchemaVersion));
  }

  SweepConfig config;
  const Json& lattices = require(doc, "lattices");
  if (!lattices.is_array()) throw ConfigError("$.lattices", "expected an array of [L1, L2] pairs");
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const std::string path = fmt::format("$.lattices[{}]", i);
    const Json& pair = lattices[i];
    if (!pair.is_array() || pair.size() != 2) throw ConfigError(path, "expected [L1, L2]");
    config.lattices.push_back({as_uint(pair[0], path + "[0]"), as_uint(pair[1], path + "[1]")});
  }
  const Json& ps = require(doc, "p");
  if (!ps.is_array()) throw ConfigError("$.p", "expected an array of noise rates");
  for (std::size_t i = 0; i < ps.size(); ++i) config.p.push_back(as_double(ps[i], fmt::format("$.p[{}]", i)));
  config.chi = as_uint(require(doc, "chi"), "$.chi");
  config.depth_max = as_uint(require(doc, "depth_max"), "$.depth_max");
  config.master_seed = as_uint(require(doc, "master_seed"), "$.master_seed");
  const Json& out = require(doc, "output_dir");
  if (!out.is_string()) throw ConfigError("$.output_dir", "expected a string");
  config.output_dir = out.get<std::string>();
  if (doc.contains("instances")) config.instances = as_uint(doc.at("instances"), "$.instances");
  if (doc.contains("observe_every")) config.observe_every = as_uint(doc.at("observe_every"), "$.observe_every");
  if (doc.contains("trace_floor")) config.trace_floor = as_double(doc.at("trace_floor"), "$.trace_floor");
  if (doc.contains("workers")) config.workers = as_uint(doc.at("workers"), "$.workers");
  if (doc.contains("record_spectra")) {
    if (!doc.at("record_spectra").is_boolean()) throw ConfigError("$.record_spectra", "expected a boolean");
    config.record_spectra = doc.at("record_spectra").get<bool>();
  }
  config.validate();
  return config;
}

Json sweep_config_to_json(const SweepConfig& config) {
  Json lattices = Json::array();
  for (const LatticeSpec& l : config.lattices) lattices.push_back({l.rows, l.cols});
  return {{"schema_version", kSweepSchemaVersion},
          {"lattices", lattices},
          {"p", config.p},
          {"chi", config.chi},
          {"depth_max", config.depth_max},
          {"instances", config.instances},
          {"master_seed", config.master_seed},
          {"observe_every", config.observe_every},
          {"output_dir", config.output_dir.string()},
          {"trace_floor", config.trace_floor},
          {"workers", config.workers},
          {"record_spectra", config.record_spectra}};
}

SweepConfig load_sweep_config(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("$", fmt::format("cannot read config file {}", file.string()));
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError("$", fmt::format("invalid JSON: {}", e.what()));
  }
  return sweep_config_from_json(doc);
}

std::uint64_t instance_seed(std::uint64_t master_seed, const LatticeSpec& lattice, std::size_t instance) {
  return derive_seed(master_seed, lattice.rows, lattice.cols, instance);
}

const char* status_name(InstanceStatus status) {
  switch (status) {
    case InstanceStatus::Ok:
      return "ok";
    case InstanceStatus::Flagged:
      return "flagged";
    case InstanceStatus::Failed:
      return "failed";
  }
  return "unknown";
}

InstanceResult run_instance(const LatticeSpec& lattice, double p, std::size_t chi, std::size_t depth,
                            std::uint64_t seed, std::size_t observe_every, double trace_floor, bool record_spectra,
                            std::size_t index) {
  InstanceResult result;
  result.index = index;
  result.seed = seed;
  const Clock::time_point start = Clock::now();
  try {
    const CircuitInstance circuit = build_circuit(lattice, depth, seed);
    EvolutionOptions options;
    options.observe_every = observe_every;
    options.trace_floor = trace_floor;
    const std::size_t cut = middle_cut(lattice);
    run_circuit(circuit, NoiseParams{p}, chi, options, [&](std::size_t d, DensityMps& state) {
      // Observing moves the gauge, so work on a copy: the trajectory then does
      // not depend on the observation stride or on spectrum recording.
      DensityMps view = state;
      result.records.push_back(observe(view, d));
      if (record_spectra && lattice.cols >= 2) result.spectra.push_back(singular_spectrum(view, cut));
    });
  } catch (const TraceFloorError& e) {
    result.status = InstanceStatus::Flagged;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.status = InstanceStatus::Failed;
    result.message = e.what();
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

SMaxEstimate extract_s_max(std::span<const std::size_t> depths, std::span<const double> values) {
  if (depths.empty() || depths.size() != values.size()) {
    throw ArgumentError("extract_s_max needs a non-empty curve with one value per depth");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return {values[best], depths[best], best + 1 < values.size()};
}

std::string GridPointResult::label() const { return fmt::format("{}_p{}", lattice.label(), format_double(p)); }

void aggregate_grid_point(GridPointResult& point) {
  point.ok = point.flagged = point.failed = 0;
  point.aggregate.clear();
  std::vector<const InstanceResult*> used;
  for (const InstanceResult& inst : point.instances) {
    switch (inst.status) {
      case InstanceStatus::Ok:
        ++point.ok;
        used.push_back(&inst);
        break;
      case InstanceStatus::Flagged:
        ++point.flagged;
        break;
      case InstanceStatus::Failed:
        ++point.failed;
        break;
    }
  }
  if (used.empty()) throw NumericError(fmt::format("grid point {} has no usable instance", point.label()));
  const std::size_t rows = used.front()->records.size();
  for (const InstanceResult* inst : used) {
    if (inst->records.size() != rows) throw NumericError("instances observed different depth sets");
  }

  const std::size_t cuts = point.lattice.cols - 1;
  double max_sum = 0.0;
  for (const InstanceResult* inst : used) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const DepthRecord& r : inst->records) peak = std::max(peak, r.s_max);
    max_sum += peak;
  }
  point.mean_of_max = max_sum / static_cast<double>(used.size());

  std::vector<std::size_t> depths;
  std::vector<double> curve;
  for (std::size_t j = 0; j < rows; ++j) {
    AggregateRow row;
    row.depth = used.front()->records[j].depth;
    row.count = used.size();
    std::vector<double> s_max, s2, trace, purity;
    std::vector<std::vector<double>> ee(cuts);
    for (const InstanceResult* inst : used) {
      const DepthRecord& r = inst->records[j];
      if (r.depth != row.depth) throw NumericError("instances observed different depth sets");
      s_max.push_back(r.s_max);
      s2.push_back(r.second_renyi);
      trace.push_back(r.trace);
      purity.push_back(r.purity);
      for (std::size_t c = 0; c < cuts; ++c) ee[c].push_back(r.ee_per_cut[c]);
    }
    const MeanStderr ms = mean_stderr(s_max), m2 = mean_stderr(s2), mt = mean_stderr(trace),
                     mp = mean_stderr(purity);
    row.mean_s_max = ms.mean;
    row.stderr_s_max = ms.stderr_;
    row.min_s_max = *std::min_element(s_max.begin(), s_max.end());
    row.max_s_max = *std::max_element(s_max.begin(), s_max.end());
    row.mean_s2 = m2.mean;
    row.stderr_s2 = m2.stderr_;
    row.mean_trace = mt.mean;
    row.stderr_trace = mt.stderr_;
    row.mean_purity = mp.mean;
    row.stderr_purity = mp.stderr_;
    for (std::size_t c = 0; c < cuts; ++c) {
      const MeanStderr me = mean_stderr(ee[c]);
      row.mean_ee.push_back(me.mean);
      row.stderr_ee.push_back(me.stderr_);
    }
    depths.push_back(row.depth);
    curve.push_back(row.mean_s_max);
    point.aggregate.push_back(std::move(row));
  }
  point.s_max_of_mean = extract_s_max(depths, curve);
}

bool SweepResult::partial() const {
  return std::any_of(points.begin(), points.end(),
                     [](const GridPointResult& p) { return p.has_failures() || p.aggregate.empty(); });
}

std::vector<SMaxSummary> extract_s_max(const SweepResult& result) {
  std::vector<SMaxSummary> out;
  for (const GridPointResult& point : result.points) {
    if (point.aggregate.empty()) continue;
    out.push_back({point.lattice, point.p, point.s_max_of_mean, point.mean_of_max});
  }
  return out;
}

void write_raw_csv(std::ostream& os, const GridPointResult& point, std::size_t chi) {
  write_record_header(os, point.lattice);
  for (const InstanceResult& inst : point.instances) {
    if (inst.status != InstanceStatus::Ok) continue;
    const RecordContext context{fmt::format("{}_i{}", point.label(), inst.index), inst.seed, point.lattice, point.p,
                                chi};
    for (const DepthRecord& r : inst.records) write_record_row(os, context, r);
  }
}

void write_aggregate_csv(std::ostream& os, const GridPointResult& point) {
  os << "depth,count,mean_s_max,stderr_s_max,min_s_max,max_s_max,mean_s2,stderr_s2,mean_trace,stderr_trace,"
        "mean_purity,stderr_purity";
  for (std::size_t c = 1; c < point.lattice.cols; ++c) os << ",mean_ee_cut_" << c << ",stderr_ee_cut_" << c;
  os << '\n';
  for (const AggregateRow& r : point.aggregate) {
    os << r.depth << ',' << r.count;
    for (double x : {r.mean_s_max, r.stderr_s_max, r.min_s_max, r.max_s_max, r.mean_s2, r.stderr_s2, r.mean_trace,
                     r.stderr_trace, r.mean_purity, r.stderr_purity}) {
      os << ',' << format_double(x);
    }
    for (std::size_t c = 0; c < r.mean_ee.size(); ++c) {
      os << ',' << format_double(r.mean_ee[c]) << ',' << format_double(r.stderr_ee[c]);
    }
    os << '\n';
  }
}

void write_s_max_csv(std::ostream& os, const SweepResult& result) {
  os << "L1,L2,p,s_max,t_peak,bracketed,mean_of_max,ok,flagged,failed\n";
  for (const GridPointResult& point : result.points) {
    if (point.aggregate.empty()) continue;
    os << point.lattice.rows << ',' << point.lattice.cols << ',' << format_double(point.p) << ','
       << format_double(point.s_max_of_mean.value) << ',' << point.s_max_of_mean.depth << ','
       << (point.s_max_of_mean.bracketed ? 1 : 0) << ',' << format_double(point.mean_of_max) << ',' << point.ok
       << ',' << point.flagged << ',' << point.failed << '\n';
  }
}

void write_spectra_csv(std::ostream& os, const GridPointResult& point) {
  os << "run_id,seed,depth,cut,k,sigma\n";
  const std::size_t cut = middle_cut(point.lattice);
  for (const InstanceResult& inst : point.instances) {
    if (inst.status != InstanceStatus::Ok) continue;
    for (std::size_t j = 0; j < inst.spectra.size(); ++j) {
      for (std::size_t k = 0; k < inst.spectra[j].size(); ++k) {
        os << point.label() << "_i" << inst.index << ',' << inst.seed << ',' << inst.records[j].depth << ',' << cut
           << ',' << k + 1 << ',' << format_double(inst.spectra[j][k]) << '\n';
      }
    }
  }
}

Json sweep_manifest(const SweepResult& result) {
  Json points = Json::array();
  for (const GridPointResult& point : result.points) {
    Json instances = Json::array();
    for (const InstanceResult& inst : point.instances) {
      Json entry = {{"index", inst.index},
                    {"seed", inst.seed},
                    {"status", status_name(inst.status)},
                    {"wall_seconds", inst.wall_seconds}};
      if (!inst.message.empty()) entry["message"] = inst.message;
      instances.push_back(std::move(entry));
    }
    Json entry = {{"label", point.label()},
                  {"lattice", {point.lattice.rows, point.lattice.cols}},
                  {"p", point.p},
                  {"ok", point.ok},
                  {"flagged", point.flagged},
                  {"failed", point.failed},
                  {"instances", std::move(instances)}};
    if (!point.aggregate.empty()) {
      entry["s_max_of_mean"] = {{"value", point.s_max_of_mean.value},
                                {"depth", point.s_max_of_mean.depth},
                                {"bracketed", point.s_max_of_mean.bracketed}};
      entry["mean_of_max"] = point.mean_of_max;
    }
    points.push_back(std::move(entry));
  }
  return {{"software", "nrqc"},
          {"version", NRQC_VERSION},
          {"config", sweep_config_to_json(result.config)},
          {"wall_seconds", result.wall_seconds},
          {"partial", result.partial()},
          {"points", std::move(points)}};
}

SweepResult run_sweep(const SweepConfig& config, const ProgressCallback& progress) {
  config.validate();
  const Clock::time_point start = Clock::now();
  SweepResult result;
  result.config = config;
  for (const LatticeSpec& lattice : config.lattices) {
    for (double p : config.p) {
      GridPointResult point;
      point.lattice = lattice;
      point.p = p;
      point.instances.resize(config.instances);
      result.points.push_back(std::move(point));
    }
  }

  const std::size_t tasks = result.points.size() * config.instances;
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t task = next.fetch_add(1); task < tasks; task = next.fetch_add(1)) {
      GridPointResult& point = result.points[task / config.instances];
      const std::size_t k = task % config.instances;
      point.instances[k] =
          run_instance(point.lattice, point.p, config.chi, config.depth_max, instance_seed(config.master_seed, point.lattice, k),
                       config.observe_every, config.trace_floor, config.record_spectra, k);
      if (progress) {
        const std::lock_guard<std::mutex> lock(progress_mutex);
        progress(point, point.instances[k]);
      }
    }
  };
  const std::size_t workers = std::min(config.workers, tasks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (GridPointResult& point : result.points) {
    try {
      aggregate_grid_point(point);
    } catch (const NumericError&) {
      point.aggregate.clear();
    }
  }
  result.wall_seconds = seconds_since(start);

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    for (const GridPointResult& point : result.points) {
      write_file(config.output_dir / fmt::format("raw_{}.csv", point.label()),
                 [&](std::ostream& os) { write_raw_csv(os, point, config.chi); });
      if (!point.aggregate.empty()) {
        write_file(config.output_dir / fmt::format("aggregate_{}.csv", point.label()),
                   [&](std::ostream& os) { write_aggregate_csv(os, point); });
      }
      if (config.record_spectra) {
        write_file(config.output_dir / fmt::format("spectra_{}.csv", point.label()),
                   [&](std::ostream& os) { write_spectra_csv(os, point); });
      }
    }
    write_file(config.output_dir / "s_max.csv", [&](std::ostream& os) { write_s_max_csv(os, result); });
    write_file(config.output_dir / "manifest.json",
               [&](std::ostream& os) { os << sweep_manifest(result).dump(2) << '\n'; });
  }
  return result;
}

std::vector<ValidationRow> validate_against_oracle(const LatticeSpec& lattice, double p, std::size_t depth,
                                                   std::span<const std::size_t> chis, std::uint64_t seed) {
  validate_circuit_lattice(lattice);
  if (lattice.num_qubits() > kValidationMaxQubits) {
    throw SizeCapError(fmt::format("validation is limited to {} qubits", kValidationMaxQubits));
  }
  if (chis.empty()) throw ArgumentError("validation needs at least one chi");
  const CircuitInstance circuit = build_circuit(lattice, depth, seed);
  const DenseState exact = evolve_exact(circuit, NoiseParams{p});
  const double exact_purity_value = exact_purity(exact.rho);

  std::vector<ValidationRow> rows;
  for (std::size_t chi : chis) {
    DensityMps state = DensityMps::zero_state(lattice, chi);
    EvolutionOptions options;
    options.observe_every = std::max<std::size_t>(1, depth);
    options.trace_floor = -std::numeric_limits<double>::infinity();
    run_circuit(state, circuit, NoiseParams{p}, options, {});
    ValidationRow row;
    row.chi = chi;
    row.trace = state.trace();
    row.fidelity = fidelity_against_reference(exact.rho, state.to_dense());
    row.purity_engine = purity_of(state);
    row.purity_exact = exact_purity_value;
    row.cum_discarded = state.cum_discarded();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nrqc
