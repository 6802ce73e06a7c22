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

#include "nrqc/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nrqc/errors.hpp"
#include "nrqc/harness.hpp"
#include "nrqc/theory.hpp"

namespace nrqc {
namespace {

using Json = nlohmann::json;

struct LatticeArgs {
  std::size_t l1 = 0;
  std::size_t l2 = 0;

  LatticeSpec spec() const { return {l1, l2}; }
};

void add_lattice(CLI::App* app, LatticeArgs& args) {
  app->add_option("--L1", args.l1, "Lattice rows")->required();
  app->add_option("--L2", args.l2, "Lattice columns")->required();
}

void check_noise(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(fmt::format("--p must lie in [0, 1], got {}", p));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ArgumentError(fmt::format("missing CSV column '{}'", name));
  }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError(fmt::format("cannot read {}", path.string()));
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw ArgumentError(fmt::format("{} is empty", path.string()));
  table.header = split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    table.rows.push_back(split_csv_line(line));
    if (table.rows.back().size() != table.header.size()) {
      throw ArgumentError(fmt::format("{}: row {} has the wrong number of fields", path.string(), table.rows.size()));
    }
  }
  return table;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw ArgumentError(fmt::format("malformed number '{}'", text));
  return value;
}

int cmd_simulate(const LatticeArgs& lattice, double p, std::size_t chi, std::size_t depth, std::uint64_t seed,
                 std::size_t observe_every, double trace_floor, std::ostream& out, std::ostream& err) {
  validate_circuit_lattice(lattice.spec());
  check_noise(p);
  if (chi < 1) throw ArgumentError("--chi must be >= 1");
  if (observe_every < 1) throw ArgumentError("--observe-every must be >= 1");
  const InstanceResult result =
      run_instance(lattice.spec(), p, chi, depth, seed, observe_every, trace_floor, false);
  write_record_header(out, lattice.spec());
  const RecordContext context{"simulate", seed, lattice.spec(), p, chi};
  for (const DepthRecord& r : result.records) write_record_row(out, context, r);
  if (result.status != InstanceStatus::Ok) {
    err << "simulate: " << status_name(result.status) << ": " << result.message << '\n';
    return kExitNumeric;
  }
  return kExitSuccess;
}

int cmd_sweep(const std::string& config_path, std::size_t workers, const std::string& output_dir, bool quiet,
              std::ostream& out, std::ostream& err) {
  SweepConfig config = load_sweep_config(config_path);
  if (workers > 0) config.workers = workers;
  if (!output_dir.empty()) config.output_dir = output_dir;
  const SweepResult result = run_sweep(config, [&](const GridPointResult& point, const InstanceResult& inst) {
    if (!quiet) {
      err << fmt::format("{} instance {} {} ({:.1f} s)\n", point.label(), inst.index, status_name(inst.status),
                         inst.wall_seconds);
    }
  });
  write_s_max_csv(out, result);
  if (result.partial()) {
    for (const GridPointResult& point : result.points) {
      if (point.has_failures() || point.aggregate.empty()) {
        err << fmt::format("grid point {} incomplete: {} ok, {} flagged, {} failed\n", point.label(), point.ok,
                           point.flagged, point.failed);
      }
    }
    return kExitPartial;
  }
  return kExitSuccess;
}

int cmd_fit(const std::string& dir, const std::string& out_path, std::ostream& out) {
  const std::filesystem::path root(dir);
  const CsvTable table = read_csv(root / "s_max.csv");
  const std::size_t c_l1 = table.column("L1"), c_l2 = table.column("L2"), c_p = table.column("p"),
                    c_s = table.column("s_max");
  std::map<std::pair<std::size_t, std::size_t>, std::vector<PowerLawPoint>> by_lattice;
  for (const auto& row : table.rows) {
    by_lattice[{std::stoul(row[c_l1]), std::stoul(row[c_l2])}].push_back(
        {parse_double(row[c_p]), parse_double(row[c_s])});
  }

  Json report = Json::object();
  Json fits = Json::array();
  Json b0_fits = Json::array();
  for (const auto& [dims, points] : by_lattice) {
    const LatticeSpec lattice{dims.first, dims.second};
    Json entry = {{"lattice", lattice.label()}};
    try {
      const PowerLawFit fit = fit_power_law(points);
      entry["power_law"] = power_law_report(points, fit);
    } catch (const ArgumentError& e) {
      entry["power_law_error"] = e.what();
    }
    fits.push_back(std::move(entry));

    for (const PowerLawPoint& pt : points) {
      const std::filesystem::path agg = root / fmt::format("aggregate_{}_p{}.csv", lattice.label(), format_double(pt.p));
      const CsvTable curve = read_csv(agg);
      const std::size_t c_depth = curve.column("depth"), c_s2 = curve.column("mean_s2");
      std::vector<RenyiSample> samples;
      for (const auto& row : curve.rows) {
        samples.push_back({parse_double(row[c_depth]), static_cast<double>(lattice.num_qubits()), parse_double(row[c_s2])});
      }
      Json b0_entry = {{"lattice", lattice.label()}, {"p", pt.p}};
      try {
        const B0Fit fit = fit_b0_from_renyi(samples, pt.p);
        b0_entry["b0"] = fit.b0;
        b0_entry["residual_rms_bits"] = fit.residual_rms;
        b0_entry["samples_used"] = fit.samples_used;
      } catch (const ArgumentError& e) {
        b0_entry["error"] = e.what();
      }
      b0_fits.push_back(std::move(b0_entry));
    }
  }
  report["power_law_fits"] = std::move(fits);
  report["b0_fits"] = std::move(b0_fits);
  if (out_path.empty()) {
    out << report.dump(2) << '\n';
  } else {
    std::ofstream os(out_path);
    if (!os) throw ArgumentError(fmt::format("cannot write {}", out_path));
    os << report.dump(2) << '\n';
  }
  return kExitSuccess;
}

int cmd_theory(const LatticeArgs& lattice, double p, const TheoryParams& params, std::size_t t_max, std::ostream& out) {
  const TheoryPrediction pred = predicted_s_max_and_t_peak(lattice.l1, lattice.l2, p, params);
  out << "branch: " << branch_name(pred.branch) << '\n';
  out << "s_max: " << format_double(pred.s_max) << '\n';
  out << "t_peak: " << format_double(pred.t_peak) << '\n';
  out << "l_tran: " << format_double(pred.l_tran) << '\n';
  out << "t_midpoint: " << format_double(std::numbers::ln2 / (2.0 * params.b0 * p)) << '\n';
  if (t_max > 0) {
    const double n = static_cast<double>(lattice.l1 * lattice.l2);
    out << "t,fidelity,operator_ee,second_renyi\n";
    for (std::size_t t = 0; t <= t_max; ++t) {
      const double dt = static_cast<double>(t);
      out << t << ',' << format_double(predicted_fidelity(dt, n, p, params.b0)) << ','
          << format_double(predicted_operator_ee(dt, lattice.l1, lattice.l2, p, params)) << ','
          << format_double(predicted_second_renyi(dt, n, p, params.b0)) << '\n';
    }
  }
  return kExitSuccess;
}

int cmd_validate(const LatticeArgs& lattice, double p, std::size_t depth, const std::vector<std::size_t>& chis,
                 std::uint64_t seed, std::ostream& out) {
  check_noise(p);
  const std::vector<ValidationRow> rows = validate_against_oracle(lattice.spec(), p, depth, chis, seed);
  out << "chi,trace,fidelity,purity_engine,purity_exact,cum_discarded\n";
  for (const ValidationRow& r : rows) {
    out << r.chi << ',' << format_double(r.trace) << ',' << format_double(r.fidelity) << ','
        << format_double(r.purity_engine) << ',' << format_double(r.purity_exact) << ','
        << format_double(r.cum_discarded) << '\n';
  }
  return kExitSuccess;
}

int cmd_spectrum(const LatticeArgs& lattice, double p, std::size_t chi, std::size_t depth, std::uint64_t seed,
                 std::size_t cut, std::size_t observe_every, std::ostream& out) {
  validate_circuit_lattice(lattice.spec());
  check_noise(p);
  if (cut == 0) cut = std::max<std::size_t>(1, lattice.l2 / 2);
  (void)column_cut(lattice.spec(), cut);
  if (observe_every < 1) throw ArgumentError("--observe-every must be >= 1");
  const CircuitInstance circuit = build_circuit(lattice.spec(), depth, seed);
  EvolutionOptions options;
  options.observe_every = observe_every;
  options.trace_floor = -std::numeric_limits<double>::infinity();
  out << "depth,cut,k,sigma\n";
  run_circuit(circuit, NoiseParams{p}, chi, options, [&](std::size_t d, DensityMps& state) {
    const std::vector<double> s = singular_spectrum(state, cut);
    for (std::size_t k = 0; k < s.size(); ++k) {
      out << d << ',' << cut << ',' << k + 1 << ',' << format_double(s[k]) << '\n';
    }
  });
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy random circuit simulation with density matrix product states", "nrqc"};
  app.require_subcommand(1);

  LatticeArgs lattice;
  double p = 0.0;
  std::size_t chi = 64;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  std::size_t observe_every = 2;
  double trace_floor = 0.5;

  CLI::App* sim = app.add_subcommand("simulate", "Run one circuit instance and print every depth record as CSV");
  add_lattice(sim, lattice);
  sim->add_option("--p", p, "Depolarizing rate per gate")->required();
  sim->add_option("--chi", chi, "Maximum bond dimension")->capture_default_str();
  sim->add_option("--depth", depth, "Number of layers")->required();
  sim->add_option("--seed", seed, "Instance seed")->capture_default_str();
  sim->add_option("--observe-every", observe_every, "Observation stride in layers")->capture_default_str();
  sim->add_option("--trace-floor", trace_floor, "Abort when the trace drops below this value")->capture_default_str();

  std::string config_path;
  std::size_t workers = 0;
  std::string output_dir;
  bool quiet = false;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an ensemble sweep described by a JSON config file");
  sweep->add_option("--config", config_path, "Sweep config file")->required();
  sweep->add_option("--workers", workers, "Override the worker count");
  sweep->add_option("--output-dir", output_dir, "Override the output directory");
  sweep->add_flag("--quiet", quiet, "Suppress per-instance progress");

  std::string sweep_dir;
  std::string fit_out;
  CLI::App* fit = app.add_subcommand("fit", "Fit S_max(p) power laws and b0 from a sweep output directory");
  fit->add_option("--sweep-dir", sweep_dir, "Directory written by sweep")->required();
  fit->add_option("--out", fit_out, "Write the JSON report here instead of stdout");

  TheoryParams params;
  std::size_t t_max = 0;
  CLI::App* theory = app.add_subcommand("theory", "Evaluate the closed-form predictions");
  add_lattice(theory, lattice);
  theory->add_option("--p", p, "Noise rate")->required();
  theory->add_option("--b0", params.b0, "Fidelity decay constant")->required();
  theory->add_option("--b1", params.b1, "Entanglement density")->required();
  theory->add_option("--b2", params.b2, "Entanglement speed")->required();
  theory->add_option("--t-max", t_max, "Also print curves for t = 0..t-max");

  std::vector<std::size_t> chis;
  CLI::App* validate = app.add_subcommand("validate", "Compare the engine with the dense oracle over bond dimensions");
  add_lattice(validate, lattice);
  validate->add_option("--p", p, "Depolarizing rate per gate")->required();
  validate->add_option("--depth", depth, "Number of layers")->required();
  validate->add_option("--chi", chis, "Bond dimensions, comma separated")->required()->delimiter(',');
  validate->add_option("--seed", seed, "Circuit seed")->capture_default_str();

  std::size_t cut = 0;
  CLI::App* spectrum = app.add_subcommand("spectrum", "Print normalized singular spectra at a column cut");
  add_lattice(spectrum, lattice);
  spectrum->add_option("--p", p, "Depolarizing rate per gate")->required();
  spectrum->add_option("--chi", chi, "Maximum bond dimension")->capture_default_str();
  spectrum->add_option("--depth", depth, "Number of layers")->required();
  spectrum->add_option("--seed", seed, "Instance seed")->capture_default_str();
  spectrum->add_option("--cut", cut, "Column cut (default: middle)");
  spectrum->add_option("--observe-every", observe_every, "Observation stride in layers")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(lattice, p, chi, depth, seed, observe_every, trace_floor, out, err);
    if (sweep->parsed()) return cmd_sweep(config_path, workers, output_dir, quiet, out, err);
    if (fit->parsed()) return cmd_fit(sweep_dir, fit_out, out);
    if (theory->parsed()) return cmd_theory(lattice, p, params, t_max, out);
    if (validate->parsed()) return cmd_validate(lattice, p, depth, chis, seed, out);
    if (spectrum->parsed()) return cmd_spectrum(lattice, p, chi, depth, seed, cut, observe_every, out);
  } catch (const ConfigError& e) {
    err << "config error at " << e.path() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace nrqc
