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

// Closed-form entanglement predictions for noisy random circuits and the
// power-law fits used to compare them with simulation.
//
// The output state is modelled as alpha |psi><psi| + (1 - alpha) I / 2^n with
// circuit fidelity alpha = exp(-b0 p n t). The noiseless entanglement of
// |psi> grows as b1 L1 min(b2 t, L2) across the middle cut.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nrqc {

struct TheoryParams {
  double b0 = 0.2;  // fidelity decay per layer, qubit and unit noise rate
  double b1 = 1.0;  // entanglement per boundary site, bits
  double b2 = 1.0;  // entanglement front speed, columns per layer

  /// Throws ArgumentError unless every constant is positive and finite.
  void validate() const;
};

enum class EntanglementBranch { VolumeLaw, AreaLaw };
const char* branch_name(EntanglementBranch branch);

struct TheoryPrediction {
  double s_max = 0.0;   // bits
  double t_peak = 0.0;  // layers
  double l_tran = 0.0;  // columns
  EntanglementBranch branch = EntanglementBranch::AreaLaw;
};

/// exp(-b0 p n t). Arguments must be non-negative.
double predicted_fidelity(double t, double n, double p, double b0);

/// Logistic-weighted pure-state growth law
///   2 b1 L1 min(b2 t, L2) / (1 + exp(2 b0 p n t - n ln 2)).
/// At p = 0 the logistic factor is taken as exactly 1.
double predicted_operator_ee(double t, std::size_t l1, std::size_t l2, double p, const TheoryParams& params);

/// Step-function limit of predicted_operator_ee: the volume-law branch when
/// L2 <= l_tran = ln2 b2 / (2 b0 p), otherwise the area-law branch.
/// Throws ArgumentError for p <= 0 or L1 > L2.
TheoryPrediction predicted_s_max_and_t_peak(std::size_t l1, std::size_t l2, double p, const TheoryParams& params);

/// -log2(a^2 + 2^-n (1 - a^2)) with a = exp(-b0 p n t).
double predicted_second_renyi(double t, double n, double p, double b0);

struct PowerLawPoint {
  double p = 0.0;
  double s_max = 0.0;
};

/// s_max = c p^a fitted by least squares on (log p, log s_max).
struct PowerLawFit {
  double c = 0.0;
  double a = 0.0;
  double ci95_a_low = 0.0;
  double ci95_a_high = 0.0;
  double stderr_a = 0.0;
  double stderr_log_c = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;         // natural-log units
  std::vector<double> residuals;     // log s_max - fitted, input order
  std::size_t num_points = 0;
};

/// Needs at least three points with positive p and s_max and at least two
/// distinct p. The interval uses the Student t quantile with N - 2 degrees of
/// freedom (degenerate to the point estimate for an exact fit).
PowerLawFit fit_power_law(std::span<const PowerLawPoint> points);

/// Fit report with c, a, ci95, residuals and a digest of the input points.
nlohmann::json power_law_report(std::span<const PowerLawPoint> points, const PowerLawFit& fit);

/// 64-bit FNV-1a digest of the points' shortest round-trip text, as hex.
std::string input_digest(std::span<const PowerLawPoint> points);

struct RenyiSample {
  double t = 0.0;
  double n = 0.0;
  double s2 = 0.0;  // bits
};

struct B0Fit {
  double b0 = 0.0;
  double residual_rms = 0.0;  // bits, over the samples used
  std::size_t samples_used = 0;
};

/// Least-squares b0 against predicted_second_renyi using the pre-saturation
/// samples (s2 < n - 0.1). Throws ArgumentError if no sample qualifies or
/// p <= 0.
B0Fit fit_b0_from_renyi(std::span<const RenyiSample> samples, double p);

}  // namespace nrqc
