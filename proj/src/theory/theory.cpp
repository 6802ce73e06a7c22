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

#include "nrqc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "nrqc/errors.hpp"

namespace nrqc {
namespace {

void require_non_negative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError(fmt::format("{} must be finite and >= 0, got {}", name, x));
}

double transition_size(double p, const TheoryParams& params) {
  return std::numbers::ln2 * params.b2 / (2.0 * params.b0 * p);
}

}  // namespace

void TheoryParams::validate() const {
  for (auto [value, name] : {std::pair{b0, "b0"}, std::pair{b1, "b1"}, std::pair{b2, "b2"}}) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ArgumentError(fmt::format("{} must be positive, got {}", name, value));
  }
}

const char* branch_name(EntanglementBranch branch) {
  return branch == EntanglementBranch::VolumeLaw ? "volume-law" : "area-law";
}

double predicted_fidelity(double t, double n, double p, double b0) {
  require_non_negative(t, "t");
  require_non_negative(n, "n");
  require_non_negative(p, "p");
  require_non_negative(b0, "b0");
  return std::exp(-b0 * p * n * t);
}

double predicted_operator_ee(double t, std::size_t l1, std::size_t l2, double p, const TheoryParams& params) {
  params.validate();
  require_non_negative(t, "t");
  require_non_negative(p, "p");
  if (l1 < 1 || l1 > l2) throw ArgumentError("predicted_operator_ee needs 1 <= L1 <= L2");
  const double n = static_cast<double>(l1 * l2);
  const double growth = 2.0 * params.b1 * static_cast<double>(l1) * std::min(params.b2 * t, static_cast<double>(l2));
  if (p == 0.0) return growth;
  const double x = 2.0 * params.b0 * p * n * t - n * std::numbers::ln2;
  return growth / (1.0 + std::exp(x));
}

TheoryPrediction predicted_s_max_and_t_peak(std::size_t l1, std::size_t l2, double p, const TheoryParams& params) {
  params.validate();
  if (!(p > 0.0) || !std::isfinite(p)) throw ArgumentError(fmt::format("noise rate must be positive, got {}", p));
  if (l1 < 1 || l1 > l2) throw ArgumentError("predicted_s_max_and_t_peak needs 1 <= L1 <= L2");
  TheoryPrediction out;
  out.l_tran = transition_size(p, params);
  const double dl1 = static_cast<double>(l1);
  const double dl2 = static_cast<double>(l2);
  if (dl2 <= out.l_tran) {
    out.branch = EntanglementBranch::VolumeLaw;
    out.s_max = 2.0 * params.b1 * dl1 * dl2;
    out.t_peak = dl2 / params.b2;
  } else {
    out.branch = EntanglementBranch::AreaLaw;
    out.s_max = std::numbers::ln2 * params.b1 * params.b2 * dl1 / (params.b0 * p);
    out.t_peak = std::numbers::ln2 / (2.0 * params.b0 * p);
  }
  return out;
}

double predicted_second_renyi(double t, double n, double p, double b0) {
  const double a2 = std::pow(predicted_fidelity(t, n, p, b0), 2);
  const double floor = std::exp2(-n);
  return -std::log2(a2 + floor * (1.0 - a2));
}

PowerLawFit fit_power_law(std::span<const PowerLawPoint> points) {
  const std::size_t count = points.size();
  if (count < 3) throw ArgumentError(fmt::format("power-law fit needs at least 3 points, got {}", count));
  std::vector<double> x(count), y(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(points[i].p > 0.0) || !(points[i].s_max > 0.0) || !std::isfinite(points[i].p) ||
        !std::isfinite(points[i].s_max)) {
      throw ArgumentError(fmt::format("power-law point {} must have positive p and s_max", i));
    }
    x[i] = std::log(points[i].p);
    y[i] = std::log(points[i].s_max);
  }
  const double nd = static_cast<double>(count);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nd;
  my /= nd;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("power-law fit needs at least two distinct p");

  PowerLawFit fit;
  fit.num_points = count;
  fit.a = sxy / sxx;
  const double intercept = my - fit.a * mx;
  fit.c = std::exp(intercept);
  double rss = 0.0;
  fit.residuals.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    fit.residuals[i] = y[i] - (intercept + fit.a * x[i]);
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.residual_rms = std::sqrt(rss / nd);
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  const double sigma2 = rss / (nd - 2.0);
  fit.stderr_a = std::sqrt(sigma2 / sxx);
  fit.stderr_log_c = std::sqrt(sigma2 * (1.0 / nd + mx * mx / sxx));
  const boost::math::students_t dist(nd - 2.0);
  const double q = boost::math::quantile(dist, 0.975);
  fit.ci95_a_low = fit.a - q * fit.stderr_a;
  fit.ci95_a_high = fit.a + q * fit.stderr_a;
  return fit;
}

std::string input_digest(std::span<const PowerLawPoint> points) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& text) {
    for (unsigned char ch : text) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const PowerLawPoint& pt : points) feed(fmt::format("{},{};", pt.p, pt.s_max));
  return fmt::format("{:016x}", h);
}

nlohmann::json power_law_report(std::span<const PowerLawPoint> points, const PowerLawFit& fit) {
  nlohmann::json doc;
  doc["model"] = "s_max = c * p^a";
  doc["c"] = fit.c;
  doc["a"] = fit.a;
  doc["ci95_a"] = {fit.ci95_a_low, fit.ci95_a_high};
  doc["stderr_a"] = fit.stderr_a;
  doc["stderr_log_c"] = fit.stderr_log_c;
  doc["r_squared"] = fit.r_squared;
  doc["residual_rms_log"] = fit.residual_rms;
  doc["residuals_log"] = fit.residuals;
  nlohmann::json input = nlohmann::json::array();
  for (const PowerLawPoint& pt : points) input.push_back({{"p", pt.p}, {"s_max", pt.s_max}});
  doc["points"] = std::move(input);
  doc["input_digest"] = input_digest(points);
  return doc;
}

B0Fit fit_b0_from_renyi(std::span<const RenyiSample> samples, double p) {
  if (!(p > 0.0)) throw ArgumentError("fit_b0_from_renyi needs p > 0");
  std::vector<RenyiSample> used;
  for (const RenyiSample& s : samples) {
    if (!std::isfinite(s.t) || !std::isfinite(s.n) || !std::isfinite(s.s2) || s.t < 0.0 || s.n <= 0.0) {
      throw ArgumentError("Renyi samples need finite t >= 0, n > 0 and S2");
    }
    if (s.s2 < s.n - 0.1) used.push_back(s);
  }
  if (used.empty()) throw ArgumentError("every Renyi sample is saturated (S2 >= n - 0.1)");

  auto sse = [&](double b0) {
    double total = 0.0;
    for (const RenyiSample& s : used) {
      const double r = s.s2 - predicted_second_renyi(s.t, s.n, p, b0);
      total += r * r;
    }
    return total;
  };
  const auto [log_b0, unused] = boost::math::tools::brent_find_minima(
      [&](double lb) { return sse(std::exp(lb)); }, std::log(1e-6), std::log(1e3),
      std::numeric_limits<double>::digits / 2);
  (void)unused;

  // Gauss-Newton polish with the analytic derivative of the model.
  double b0 = std::exp(log_b0);
  for (int iter = 0; iter < 50; ++iter) {
    double jtj = 0.0, jtr = 0.0;
    for (const RenyiSample& s : used) {
      const double a2 = std::exp(-2.0 * b0 * p * s.n * s.t);
      const double floor = std::exp2(-s.n);
      const double g = a2 + floor * (1.0 - a2);
      const double dg = (1.0 - floor) * (-2.0 * p * s.n * s.t) * a2;
      const double jac = -dg / (g * std::numbers::ln2);
      const double r = s.s2 + std::log2(g);
      jtj += jac * jac;
      jtr += jac * r;
    }
    if (!(jtj > 0.0)) break;
    const double step = jtr / jtj;
    const double next = b0 + step;
    if (!(next > 0.0) || sse(next) > sse(b0)) break;
    b0 = next;
    if (std::abs(step) <= 1e-15 * b0) break;
  }
  return {b0, std::sqrt(sse(b0) / static_cast<double>(used.size())), used.size()};
}

}  // namespace nrqc
