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


// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Ensemble data are written under
// --work-dir so a failing run can be inspected afterwards.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "nrqc/channels.hpp"
#include "nrqc/circuit.hpp"
#include "nrqc/density_mps.hpp"
#include "nrqc/exact_oracle.hpp"
#include "nrqc/harness.hpp"
#include "nrqc/observables.hpp"
#include "nrqc/theory.hpp"

namespace nrqc {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// Ensemble settings shared by the 4x4 and 4x5 criteria.
constexpr std::size_t kEnsembleChi = 256;
constexpr std::size_t kEnsembleDepth = 20;
constexpr std::size_t kEnsembleInstances = 8;
constexpr std::uint64_t kEnsembleSeed = 2026;
const std::vector<double> kEnsembleP = {0.12, 0.14, 0.16, 0.18, 0.2};
constexpr double kReferenceP = 0.16;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Context {
 public:
  Context(fs::path work, std::string cli_path) : work_dir(std::move(work)), cli(std::move(cli_path)) {}

  fs::path work_dir;
  std::string cli;

  const SweepResult& sweep_4x4() {
    if (!sweep_4x4_) sweep_4x4_ = run_ensemble({4, 4}, kEnsembleP, "sweep_4x4");
    return *sweep_4x4_;
  }
  const SweepResult& sweep_4x5() {
    if (!sweep_4x5_) sweep_4x5_ = run_ensemble({4, 5}, {kReferenceP}, "sweep_4x5");
    return *sweep_4x5_;
  }

 private:
  SweepResult run_ensemble(LatticeSpec lattice, std::vector<double> p, const std::string& name) {
    SweepConfig config;
    config.lattices = {lattice};
    config.p = std::move(p);
    config.chi = kEnsembleChi;
    config.depth_max = kEnsembleDepth;
    config.instances = kEnsembleInstances;
    config.master_seed = kEnsembleSeed;
    config.observe_every = 2;
    config.record_spectra = true;
    config.output_dir = work_dir / name;
    return run_sweep(config, [](const GridPointResult& point, const InstanceResult& instance) {
      std::cerr << fmt::format("  [{}] instance {} {} {:.1f} s\n", point.label(), instance.index,
                               status_name(instance.status), instance.wall_seconds);
    });
  }

  std::optional<SweepResult> sweep_4x4_;
  std::optional<SweepResult> sweep_4x5_;
};

const GridPointResult& grid_point(const SweepResult& sweep, double p) {
  for (const auto& point : sweep.points) {
    if (point.p == p) return point;
  }
  throw std::runtime_error(fmt::format("no grid point at p = {}", p));
}

std::string all_usable(const GridPointResult& point) {
  if (point.ok == point.instances.size()) return {};
  return fmt::format("; {} of {} instances usable", point.ok, point.instances.size());
}

struct CommandResult {
  int status = -1;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string slurp(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Criterion 1: engine against the dense oracle at every depth.
Outcome oracle_equivalence(Context&) {
  constexpr double kTol = 1e-8;
  constexpr std::size_t kDepth = 16;
  const std::vector<LatticeSpec> lattices = {{2, 2}, {2, 3}, {3, 3}};
  const std::vector<double> noise = {0.0, 0.1, 15.0 / 16.0};
  const std::vector<std::uint64_t> seeds = {1, 2};

  double worst = 0.0;
  std::string worst_where;
  std::size_t compared = 0;
  for (const auto& lattice : lattices) {
    const std::size_t chi = std::size_t{1} << (2 * (lattice.num_qubits() / 2));
    for (double p : noise) {
      for (std::uint64_t seed : seeds) {
        const auto circuit = build_circuit(lattice, kDepth, seed);
        std::vector<DepthRecord> exact(kDepth + 1);
        evolve_exact(circuit, {p}, [&](std::size_t depth, const DenseState& state) {
          DepthRecord& r = exact[depth];
          r.trace = exact_trace(state.rho);
          r.purity = exact_purity(state.rho);
          r.second_renyi = exact_second_renyi(state.rho);
          for (std::size_t ell = 1; ell < lattice.cols; ++ell) r.ee_per_cut.push_back(exact_operator_ee(state, ell));
        });
        EvolutionOptions options;
        options.observe_every = 1;
        options.trace_floor = 0.0;
        std::size_t observed = 0;
        run_circuit(circuit, {p}, chi, options, [&](std::size_t depth, DensityMps& state) {
          const DepthRecord got = observe(state, depth);
          const DepthRecord& want = exact.at(depth);
          auto track = [&](double a, double b, const char* what) {
            const double err = std::abs(a - b);
            if (!(err <= worst)) {
              worst = std::isnan(err) ? INFINITY : err;
              worst_where = fmt::format("{} p={} seed={} depth={} {}", lattice.label(), p, seed, depth, what);
            }
            ++compared;
          };
          track(got.trace, want.trace, "trace");
          track(got.purity, want.purity, "purity");
          track(got.second_renyi, want.second_renyi, "S2");
          for (std::size_t c = 0; c < want.ee_per_cut.size(); ++c) {
            track(got.ee_per_cut.at(c), want.ee_per_cut[c], "EE");
          }
          ++observed;
        });
        if (observed != kDepth + 1) return {false, fmt::format("observer saw {} depths", observed)};
      }
    }
  }
  return {worst <= kTol,
          fmt::format("{} comparisons, max |diff| {:.2e} (tol {:.0e}) at {}", compared, worst, kTol, worst_where)};
}

// Criterion 2: CPTP and unitality of random noisy gates.
Outcome cptp_properties(Context&) {
  constexpr int kTrials = 1000;
  constexpr double kTraceTol = 1e-12, kChoiFloor = -1e-10, kUnitalTol = 1e-12;
  std::mt19937_64 rng(derive_seed(kEnsembleSeed, 2));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto trace_row = trace_covector();
  const Vector16cd vec_identity = vectorize(Eigen::Matrix4cd::Identity());

  double trace_err = 0.0, choi_min = INFINITY, unital_err = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const Eigen::Matrix4cd u = sample_haar_unitary(rng);
    const double p = uniform(rng);
    for (const auto& op : {noisy_gate_superop(u, {p}), depolarizing_superop({p})}) {
      trace_err = std::max(trace_err, (trace_row * op.matrix - trace_row).cwiseAbs().maxCoeff());
      unital_err = std::max(unital_err, (op.matrix * vec_identity - vec_identity).cwiseAbs().maxCoeff());
      const Matrix16cd choi = choi_matrix(op);
      const Matrix16cd hermitian = 0.5 * (choi + choi.adjoint());
      Eigen::SelfAdjointEigenSolver<Matrix16cd> eig(hermitian, Eigen::EigenvaluesOnly);
      choi_min = std::min(choi_min, eig.eigenvalues().minCoeff());
    }
  }
  const bool pass = trace_err <= kTraceTol && choi_min >= kChoiFloor && unital_err <= kUnitalTol;
  return {pass, fmt::format("{} channels: trace err {:.1e}, min Choi eigenvalue {:.1e}, unital err {:.1e}",
                            2 * kTrials, trace_err, choi_min, unital_err)};
}

// Criterion 3: operator EE of a pure state is twice its entanglement entropy.
Outcome pure_state_rule(Context&) {
  constexpr double kTol = 1e-8;
  constexpr std::size_t kDepth = 12;
  constexpr std::uint64_t kSeeds = 20;
  double worst = 0.0;
  std::size_t compared = 0;
  for (const LatticeSpec lattice : {LatticeSpec{2, 2}, LatticeSpec{2, 3}}) {
    const std::size_t chi = std::size_t{1} << (2 * (lattice.num_qubits() / 2));
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      const auto circuit = build_circuit(lattice, kDepth, derive_seed(kEnsembleSeed, 3, seed));
      std::vector<std::vector<double>> von_neumann(kDepth + 1);
      evolve_exact(circuit, {0.0}, [&](std::size_t depth, const DenseState& state) {
        for (std::size_t ell = 1; ell < lattice.cols; ++ell) {
          von_neumann[depth].push_back(exact_von_neumann_entropy(state, ell));
        }
      });
      EvolutionOptions options;
      options.observe_every = 1;
      run_circuit(circuit, {0.0}, chi, options, [&](std::size_t depth, DensityMps& state) {
        for (std::size_t ell = 1; ell < lattice.cols; ++ell) {
          const double err = std::abs(operator_ee_at_cut(state, ell) - 2.0 * von_neumann[depth][ell - 1]);
          worst = std::max(worst, std::isnan(err) ? INFINITY : err);
          ++compared;
        }
      });
    }
  }
  return {worst <= kTol, fmt::format("{} cuts on 2x2/2x3, max |EE - 2 S_vN| {:.2e} (tol {:.0e})", compared, worst,
                                     kTol)};
}

// Criterion 4: the averaged S_max curve rises, peaks once and falls.
Outcome rise_and_fall(Context& ctx) {
  const auto& point = grid_point(ctx.sweep_4x4(), kReferenceP);
  const auto& rows = point.aggregate;
  std::vector<int> signs;
  std::string curve;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    curve += fmt::format("{}{:.2f}", j == 0 ? "" : " ", rows[j].mean_s_max);
    if (j == 0) continue;
    const double diff = rows[j].mean_s_max - rows[j - 1].mean_s_max;
    const double se = std::hypot(rows[j].stderr_s_max, rows[j - 1].stderr_s_max);
    if (std::abs(diff) < 2.0 * se) continue;  // within the noise band
    signs.push_back(diff > 0 ? 1 : -1);
  }
  std::size_t changes = 0;
  for (std::size_t j = 1; j < signs.size(); ++j) changes += signs[j] != signs[j - 1];
  const bool unimodal = !signs.empty() && signs.front() == 1 && signs.back() == -1 && changes == 1;
  const std::size_t t_peak = point.s_max_of_mean.depth;
  const bool in_window = t_peak >= 6 && t_peak <= 12;
  return {unimodal && in_window && point.ok > 0,
          fmt::format("4x4 p=0.16: sign changes {}, t_peak {} (window [6,12]), S_max {:.3f}; curve [{}]{}", changes,
                      t_peak, point.s_max_of_mean.value, curve, all_usable(point))};
}

// Criterion 5: adding columns leaves the peak height and depth unchanged.
Outcome one_side_invariance(Context& ctx) {
  const auto& small = grid_point(ctx.sweep_4x4(), kReferenceP);
  const auto& wide = grid_point(ctx.sweep_4x5(), kReferenceP);
  auto stderr_at_peak = [](const GridPointResult& point) {
    for (const auto& row : point.aggregate) {
      if (row.depth == point.s_max_of_mean.depth) return row.stderr_s_max;
    }
    return 0.0;
  };
  const double a = small.s_max_of_mean.value, b = wide.s_max_of_mean.value;
  const double diff = std::abs(b - a);
  const double allowed = std::max(0.1 * a, 2.0 * std::hypot(stderr_at_peak(small), stderr_at_peak(wide)));
  const long depth_gap = std::labs(static_cast<long>(small.s_max_of_mean.depth) -
                                   static_cast<long>(wide.s_max_of_mean.depth));
  return {diff <= allowed && depth_gap <= 2,
          fmt::format("S_max 4x4 {:.3f} at t={}, 4x5 {:.3f} at t={}; |diff| {:.3f} (allowed {:.3f}), depth gap {}{}{}",
                      a, small.s_max_of_mean.depth, b, wide.s_max_of_mean.depth, diff, allowed, depth_gap,
                      all_usable(small), all_usable(wide))};
}

// Criterion 6: second Renyi entropy against the fidelity model.
Outcome second_renyi_law(Context& ctx) {
  const auto& point = grid_point(ctx.sweep_4x4(), kReferenceP);
  const double n = 16.0;
  std::vector<RenyiSample> samples;
  bool monotone = true;
  for (std::size_t j = 0; j < point.aggregate.size(); ++j) {
    const auto& row = point.aggregate[j];
    samples.push_back({static_cast<double>(row.depth), n, row.mean_s2});
    if (j > 0) {
      const auto& prev = point.aggregate[j - 1];
      if (row.mean_s2 < prev.mean_s2 - 2.0 * std::hypot(row.stderr_s2, prev.stderr_s2)) monotone = false;
    }
  }
  const B0Fit fit = fit_b0_from_renyi(samples, kReferenceP);
  const double final_s2 = point.aggregate.back().mean_s2;
  const bool saturated = std::abs(final_s2 - n) <= 0.2;
  const bool pass = fit.b0 >= 0.1 && fit.b0 <= 0.35 && fit.residual_rms < 0.5 && monotone && saturated;
  return {pass, fmt::format("b0 {:.4f} (window [0.1,0.35]), rms {:.3f} bits over {} depths, non-decreasing {}, "
                            "S2 at t={} is {:.3f}{}",
                            fit.b0, fit.residual_rms, fit.samples_used, monotone ? "yes" : "no",
                            point.aggregate.back().depth, final_s2, all_usable(point))};
}

// Criterion 7: middle-cut singular values decay exponentially at the peak.
Outcome spectrum_decay(Context& ctx) {
  constexpr std::size_t kTop = 200;
  const auto& point = grid_point(ctx.sweep_4x4(), kReferenceP);
  const std::size_t t_peak = point.s_max_of_mean.depth;
  double worst_r2 = INFINITY, worst_slope = -INFINITY;
  std::size_t fewest = kTop, checked = 0;
  for (const auto& instance : point.instances) {
    if (instance.status != InstanceStatus::Ok) continue;
    for (std::size_t i = 0; i < instance.records.size(); ++i) {
      if (instance.records[i].depth != t_peak) continue;
      const auto& sigma = instance.spectra.at(i);
      const std::size_t m = std::min(kTop, sigma.size());
      fewest = std::min(fewest, m);
      double sk = 0, sy = 0, skk = 0, sky = 0, syy = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const double x = static_cast<double>(k + 1), y = std::log2(sigma[k]);
        sk += x, sy += y, skk += x * x, sky += x * y, syy += y * y;
      }
      const double dm = static_cast<double>(m);
      const double sxx = skk - sk * sk / dm, sxy = sky - sk * sy / dm, s_yy = syy - sy * sy / dm;
      const double slope = sxy / sxx;
      const double r2 = s_yy > 0 ? sxy * sxy / (sxx * s_yy) : 0.0;
      worst_r2 = std::min(worst_r2, r2);
      worst_slope = std::max(worst_slope, slope);
      ++checked;
    }
  }
  const bool pass = checked > 0 && fewest >= 2 && worst_slope < 0 && worst_r2 >= 0.9;
  return {pass, fmt::format("{} instances at t={}, top {} values: max slope {:.4f} bits/index, min R^2 {:.4f}",
                            checked, t_peak, fewest, worst_slope, worst_r2)};
}

// Criterion 8: trace and fidelity improve together with the bond dimension.
Outcome trace_fidelity_pairing(Context&) {
  constexpr double kJitter = 0.005;
  const std::vector<std::size_t> chis = {8, 16, 32, 64, 128, 256};
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto rows = validate_against_oracle({3, 3}, 0.08, 24, chis, derive_seed(kEnsembleSeed, 8, seed));
    std::string tr, fi;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.trace >= 0.99 && r.fidelity < 0.97) pass = false;
      if (r.trace >= 0.98 && r.fidelity < 0.95) pass = false;
      if (i > 0 && (r.trace < rows[i - 1].trace - kJitter || r.fidelity < rows[i - 1].fidelity - kJitter)) {
        pass = false;
      }
      tr += fmt::format("{}{:.3f}", i ? "/" : "", r.trace);
      fi += fmt::format("{}{:.3f}", i ? "/" : "", r.fidelity);
    }
    detail += fmt::format("{}seed {}: Tr {} F {}", detail.empty() ? "" : "; ", seed, tr, fi);
  }
  return {pass, "3x3 p=0.08 t=24 chi 8..256, " + detail};
}

// Criterion 9: power-law fit recovery, calibration and the measured exponent.
Outcome power_law_machinery(Context& ctx) {
  const double c_true = 3.7, a_true = -0.83;
  std::vector<PowerLawPoint> exact;
  for (double p : {0.02, 0.05, 0.1, 0.2, 0.4}) exact.push_back({p, c_true * std::pow(p, a_true)});
  const auto clean = fit_power_law(exact);
  const double recovery = std::max(std::abs(clean.a - a_true), std::abs(clean.c - c_true) / c_true);

  constexpr int kTrials = 1000;
  std::mt19937_64 rng(derive_seed(kEnsembleSeed, 9));
  std::normal_distribution<double> noise(0.0, 0.05);
  int covered = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<PowerLawPoint> noisy = exact;
    for (auto& pt : noisy) pt.s_max *= std::exp(noise(rng));
    const auto fit = fit_power_law(noisy);
    covered += fit.ci95_a_low <= a_true && a_true <= fit.ci95_a_high;
  }

  std::vector<PowerLawPoint> measured;
  std::size_t usable = 0, total = 0;
  for (const auto& point : ctx.sweep_4x4().points) {
    measured.push_back({point.p, point.s_max_of_mean.value});
    usable += point.ok;
    total += point.instances.size();
  }
  const auto own = fit_power_law(measured);
  const bool pass = recovery <= 1e-10 && covered >= 900 && own.a >= -1.3 && own.a <= -0.4;
  return {pass, fmt::format("synthetic error {:.1e}, CI coverage {}/{}, 4x4 fit a = {:.4f} CI [{:.4f}, {:.4f}] "
                            "c = {:.3f} R^2 {:.3f} ({} of {} instances usable)",
                            recovery, covered, kTrials, own.a, own.ci95_a_low, own.ci95_a_high, own.c,
                            own.r_squared, usable, total)};
}

double field(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
  }
  throw std::runtime_error("missing '" + key + "' in theory output");
}

// Criterion 10: closed-form predictions and the theory command.
Outcome theory_formulas(Context& ctx) {
  constexpr double kRel = 1e-14;
  auto close = [](double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1.0); };
  bool pass = true;
  std::vector<std::string> notes;

  const double p = kReferenceP, b0 = 0.2;
  for (std::size_t l2 : {4u, 7u, 12u}) {
    const TheoryParams at{b0, 1.0, double(l2) * 2.0 * b0 * p / std::numbers::ln2};
    const auto vol = predicted_s_max_and_t_peak(4, l2, p, at);
    const auto area = predicted_s_max_and_t_peak(4, l2 + 1, p, at);
    if (vol.branch != EntanglementBranch::VolumeLaw || area.branch != EntanglementBranch::AreaLaw ||
        !close(vol.s_max, area.s_max, kRel) || !close(vol.t_peak, area.t_peak, kRel)) {
      pass = false;
      notes.push_back(fmt::format("branches disagree at L2={}", l2));
    }
  }

  const TheoryParams params{b0, 1.0, 1.0};
  const bool ee_limits = predicted_operator_ee(0.0, 4, 4, p, params) == 0.0 &&
                         predicted_operator_ee(1e6, 4, 4, p, params) <= 1e-12;
  const bool renyi_limits = predicted_second_renyi(0.0, 16, p, b0) == 0.0 &&
                            close(predicted_second_renyi(1e6, 16, p, b0), 16.0, 1e-12);
  if (!ee_limits) notes.push_back("operator EE limits");
  if (!renyi_limits) notes.push_back("second Renyi limits");
  pass = pass && ee_limits && renyi_limits;

  const double expected = std::numbers::ln2 / (2.0 * b0 * p);
  const auto in_process = predicted_s_max_and_t_peak(4, 16, p, params);
  if (in_process.branch != EntanglementBranch::AreaLaw || !close(in_process.t_peak, expected, kRel)) {
    pass = false;
    notes.push_back("in-process t_peak");
  }
  const std::string base = shell_quote(ctx.cli) + " theory --p 0.16 --b0 0.2 --b1 1 --b2 1 --L1 4";
  const auto square = run_command(base + " --L2 4");
  const auto wide = run_command(base + " --L2 16");
  if (square.status != 0 || wide.status != 0) {
    return {false, fmt::format("theory command exited with {} / {}", square.status, wide.status)};
  }
  const double midpoint = field(square.output, "t_midpoint");
  const double cli_peak = field(wide.output, "t_peak");
  if (!close(midpoint, expected, kRel) || !close(cli_peak, expected, kRel) || !close(cli_peak, in_process.t_peak, 0)) {
    pass = false;
    notes.push_back("theory command t_peak");
  }
  std::string failed;
  for (const auto& note : notes) failed += (failed.empty() ? "; failed: " : ", ") + note;
  return {pass, fmt::format("continuity at L2=l_tran, EE and S2 limits, t_peak {:.6f} = ln2/(2 b0 p) {:.6f} "
                            "(CLI midpoint {:.6f}){}",
                            cli_peak, expected, midpoint, failed)};
}

// Criterion 11: sweep output does not depend on the worker count.
Outcome determinism(Context& ctx) {
  const fs::path root = ctx.work_dir / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const Json config = {{"schema_version", kSweepSchemaVersion},
                       {"lattices", {{2, 3}, {3, 3}}},
                       {"p", {0.05, 0.2}},
                       {"chi", 32},
                       {"depth_max", 10},
                       {"instances", 6},
                       {"master_seed", 11},
                       {"record_spectra", true},
                       {"output_dir", (root / "unused").string()}};
  std::ofstream(root / "config.json") << config.dump(2) << '\n';

  std::map<std::size_t, std::map<std::string, std::string>> outputs;
  for (std::size_t workers : {1u, 8u}) {
    const fs::path out = root / fmt::format("workers_{}", workers);
    const auto result = run_command(fmt::format("{} sweep --config {} --workers {} --output-dir {} --quiet",
                                                shell_quote(ctx.cli), shell_quote((root / "config.json").string()), workers,
                                                shell_quote(out.string())));
    if (result.status != 0) return {false, fmt::format("sweep with {} workers exited with {}", workers, result.status)};
    for (const auto& entry : fs::directory_iterator(out)) {
      const std::string name = entry.path().filename().string();
      if (name.ends_with(".csv")) outputs[workers][name] = slurp(entry.path());
    }
  }
  const auto& one = outputs[1];
  const auto& eight = outputs[8];
  std::size_t raw = 0, identical = 0;
  bool same_set = one.size() == eight.size();
  for (const auto& [name, bytes] : one) {
    const auto it = eight.find(name);
    if (it == eight.end()) {
      same_set = false;
      continue;
    }
    const bool equal = it->second == bytes && !bytes.empty();
    identical += equal;
    if (name.starts_with("raw_")) {
      ++raw;
      if (!equal) same_set = false;
    }
  }
  const bool pass = same_set && raw == 4 && identical == one.size();
  return {pass, fmt::format("{} raw CSV files, {} of {} CSV outputs byte-identical between 1 and 8 workers", raw,
                            identical, one.size())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(Context&)> run;
};

}  // namespace
}  // namespace nrqc

int main(int argc, char** argv) {
  using namespace nrqc;
  CLI::App app{"Acceptance suite"};
  std::string work_dir = "acceptance_work";
  std::string cli;
  std::vector<int> only;
  app.add_option("--cli", cli, "Path to the nrqc executable")->required()->check(CLI::ExistingFile);
  app.add_option("--work-dir", work_dir, "Directory for ensemble outputs")->capture_default_str();
  app.add_option("--only", only, "Run only these criteria, comma separated")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "CPTP channels", cptp_properties},
      {3, "pure-state operator EE", pure_state_rule},
      {4, "rise and fall of S_max", rise_and_fall},
      {5, "one-side invariance", one_side_invariance},
      {6, "second Renyi law", second_renyi_law},
      {7, "spectrum decay", spectrum_decay},
      {8, "trace-fidelity pairing", trace_fidelity_pairing},
      {9, "power-law fitting", power_law_machinery},
      {10, "theory formulas", theory_formulas},
      {11, "sweep determinism", determinism},
  };

  Context ctx{fs::absolute(work_dir), fs::absolute(cli).string()};
  fs::create_directories(ctx.work_dir);
  nlohmann::json summary = nlohmann::json::array();
  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), criterion.id) == only.end()) continue;
    std::cerr << fmt::format("running criterion {}: {}\n", criterion.id, criterion.name);
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run(ctx);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::cout << fmt::format("{} [{:2}] {}: {} ({:.1f} s)\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                             criterion.name, outcome.detail, seconds)
              << std::flush;
    summary.push_back({{"id", criterion.id}, {"name", criterion.name}, {"pass", outcome.pass},
                       {"detail", outcome.detail}, {"seconds", seconds}});
  }
  std::ofstream(ctx.work_dir / "acceptance.json") << summary.dump(2) << '\n';
  return failures == 0 ? 0 : 1;
}
