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


#include <cmath>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "nrqc/errors.hpp"
#include "nrqc/theory.hpp"

namespace nrqc {
namespace {

constexpr double kLn2 = std::numbers::ln2;

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<PowerLawPoint> synthetic(double c, double a, const std::vector<double>& ps) {
  std::vector<PowerLawPoint> pts;
  for (double p : ps) pts.push_back({p, c * std::pow(p, a)});
  return pts;
}

TEST_CASE("parameter validation", "[theory]") {
  CHECK_NOTHROW(TheoryParams{}.validate());
  CHECK_THROWS_AS((TheoryParams{0.0, 1.0, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((TheoryParams{0.2, -1.0, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((TheoryParams{0.2, 1.0, std::nan("")}.validate()), ArgumentError);
  CHECK(std::string(branch_name(EntanglementBranch::VolumeLaw)) == "volume-law");
  CHECK(std::string(branch_name(EntanglementBranch::AreaLaw)) == "area-law");
}

TEST_CASE("circuit fidelity estimate", "[theory]") {
  CHECK(predicted_fidelity(0.0, 16, 0.16, 0.2) == 1.0);
  CHECK(predicted_fidelity(30.0, 16, 0.0, 0.2) == 1.0);
  CHECK(close_rel(predicted_fidelity(1.0, 16, 0.16, 0.2), std::exp(-0.512), 1e-15));
  CHECK(std::abs(predicted_fidelity(1.0, 16, 0.16, 0.2) - 0.599) <= 5e-4);
  CHECK_THROWS_AS(predicted_fidelity(-1.0, 16, 0.16, 0.2), ArgumentError);
}

TEST_CASE("operator entanglement estimate", "[theory]") {
  const TheoryParams params{0.2, 1.0, 1.0};
  CHECK(predicted_operator_ee(0.0, 4, 4, 0.16, params) == 0.0);
  CHECK(predicted_operator_ee(1e4, 4, 4, 0.16, params) <= 1e-12);

  // Logistic midpoint with the growth law saturated: half of 2 b1 L1 L2.
  const double p = 0.05;
  const double mid = kLn2 / (2.0 * params.b0 * p);
  REQUIRE(params.b2 * mid >= 4.0);
  CHECK(close_rel(predicted_operator_ee(mid, 4, 4, p, params), 1.0 * 4 * 4, 1e-12));

  // Noise-free limit is the pure growth law.
  CHECK(predicted_operator_ee(2.5, 4, 6, 0.0, params) == 2.0 * 4 * 2.5);
  CHECK(predicted_operator_ee(50.0, 4, 6, 0.0, params) == 2.0 * 4 * 6);

  for (double t = 0.0; t <= 40.0; t += 0.25) {
    for (double q : {0.01, 0.1, 0.3}) {
      const double bound = 2.0 * params.b1 * 3 * std::min(params.b2 * t, 5.0);
      CHECK(predicted_operator_ee(t, 3, 5, q, params) <= bound);
    }
  }
  CHECK_THROWS_AS(predicted_operator_ee(1.0, 5, 4, 0.1, params), ArgumentError);
}

TEST_CASE("maximum achievable entanglement and peak depth", "[theory]") {
  const TheoryParams params{0.2, 1.0, 1.0};
  SECTION("area-law branch") {
    const auto a = predicted_s_max_and_t_peak(4, 20, 0.16, params);
    const auto b = predicted_s_max_and_t_peak(4, 40, 0.16, params);
    const auto c = predicted_s_max_and_t_peak(8, 40, 0.16, params);
    CHECK(a.branch == EntanglementBranch::AreaLaw);
    CHECK(a.s_max == b.s_max);
    CHECK(close_rel(c.s_max, 2.0 * b.s_max, 1e-15));
    CHECK(close_rel(a.s_max, kLn2 * 4 / (0.2 * 0.16), 1e-15));
    CHECK(close_rel(a.t_peak, kLn2 / (2 * 0.2 * 0.16), 1e-15));
    CHECK(std::abs(a.t_peak - 10.83) <= 0.01);
  }
  SECTION("volume-law branch") {
    const auto v = predicted_s_max_and_t_peak(4, 4, 0.16, params);
    CHECK(v.branch == EntanglementBranch::VolumeLaw);
    CHECK(v.s_max == 32.0);
    CHECK(v.t_peak == 4.0);
    CHECK(close_rel(v.l_tran, 10.83, 1e-3));
  }
  SECTION("branch choice tracks the transition size") {
    for (std::size_t l2 = 2; l2 <= 30; ++l2) {
      for (double p : {0.02, 0.05, 0.1, 0.2}) {
        const auto pr = predicted_s_max_and_t_peak(2, l2, p, params);
        CHECK((pr.branch == EntanglementBranch::VolumeLaw) == (double(l2) <= pr.l_tran));
      }
    }
  }
  SECTION("branches meet at L2 = l_tran") {
    for (std::size_t l2 : {4u, 7u, 12u}) {
      const double p = 0.16;
      // Choose b2 so that the transition falls exactly on L2.
      const TheoryParams at{0.2, 1.3, double(l2) * 2.0 * 0.2 * p / kLn2};
      const auto vol = predicted_s_max_and_t_peak(3, l2, p, at);
      const auto area = predicted_s_max_and_t_peak(3, l2 + 1, p, at);
      CHECK(vol.branch == EntanglementBranch::VolumeLaw);
      CHECK(area.branch == EntanglementBranch::AreaLaw);
      CHECK(close_rel(vol.s_max, area.s_max, 1e-14));
      CHECK(close_rel(vol.t_peak, area.t_peak, 1e-14));
    }
  }
  SECTION("doubling L2 while halving p keeps the regime") {
    for (std::size_t l2 : {4u, 8u, 16u, 30u}) {
      const auto a = predicted_s_max_and_t_peak(4, l2, 0.1, params);
      const auto b = predicted_s_max_and_t_peak(4, 2 * l2, 0.05, params);
      CHECK(a.branch == b.branch);
      CHECK(close_rel(a.s_max / double(l2), b.s_max / double(2 * l2), 1e-14));
      CHECK(close_rel(double(l2) / a.l_tran, double(2 * l2) / b.l_tran, 1e-14));
    }
  }
  CHECK_THROWS_AS(predicted_s_max_and_t_peak(4, 4, 0.0, params), ArgumentError);
  CHECK_THROWS_AS(predicted_s_max_and_t_peak(5, 4, 0.1, params), ArgumentError);
}

TEST_CASE("second Renyi entropy estimate", "[theory]") {
  CHECK(predicted_second_renyi(0.0, 16, 0.16, 0.2) == 0.0);
  CHECK(std::abs(predicted_second_renyi(1e3, 16, 0.16, 0.2) - 16.0) <= 1e-12);
  // Early times: S2 grows linearly as 2 b0 p n t / ln 2.
  CHECK(close_rel(predicted_second_renyi(0.5, 49, 0.16, 0.2), 2 * 0.2 * 0.16 * 49 * 0.5 / kLn2, 1e-12));

  // The knee where S2 reaches n - 1 sits near t = 12 for every size.
  std::vector<double> knees;
  for (double n : {16.0, 25.0, 36.0, 49.0}) {
    double lo = 0.0, hi = 100.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (predicted_second_renyi(mid, n, 0.16, 0.2) < n - 1.0 ? lo : hi) = mid;
    }
    knees.push_back(lo);
    CHECK(std::abs(lo - 12.0) <= 2.0);
    double prev = -1.0;
    for (double t = 0.0; t <= 40.0; t += 0.5) {
      const double s = predicted_second_renyi(t, n, 0.16, 0.2);
      CHECK(s >= prev);
      CHECK(s <= n + 1e-12);
      prev = s;
    }
  }
  CHECK(*std::max_element(knees.begin(), knees.end()) - *std::min_element(knees.begin(), knees.end()) <= 0.5);
}

TEST_CASE("power-law fit recovers noise-free data", "[theory]") {
  const auto pts = synthetic(2.0, -0.8, {0.12, 0.14, 0.16, 0.18, 0.2});
  const PowerLawFit fit = fit_power_law(pts);
  CHECK(std::abs(fit.c - 2.0) <= 1e-10);
  CHECK(std::abs(fit.a + 0.8) <= 1e-10);
  CHECK(fit.ci95_a_low <= fit.a);
  CHECK(fit.ci95_a_high >= fit.a);
  CHECK(fit.residual_rms <= 1e-12);
  CHECK(fit.num_points == 5);
  CHECK(fit.residuals.size() == 5);
}

TEST_CASE("power-law fit statistics against closed forms", "[theory]") {
  const std::vector<PowerLawPoint> pts = {{0.1, 5.0}, {0.2, 3.1}, {0.3, 2.0}, {0.4, 1.7}, {0.5, 1.2}};
  const PowerLawFit fit = fit_power_law(pts);
  // Independent least squares via normal equations.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : pts) {
    const double x = std::log(pt.p), y = std::log(pt.s_max);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = 5.0;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  CHECK(std::abs(fit.a - slope) <= 1e-12);
  CHECK(std::abs(std::log(fit.c) - icept) <= 1e-12);
  // Two-sided 95% Student t quantile with three degrees of freedom.
  CHECK(std::abs((fit.ci95_a_high - fit.a) / fit.stderr_a - 3.182446305284263) <= 1e-9);
  CHECK(std::abs((fit.a - fit.ci95_a_low) / fit.stderr_a - 3.182446305284263) <= 1e-9);
  CHECK(fit.r_squared > 0.9);
  CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("power-law fit is scale-equivariant", "[theory]") {
  const std::vector<PowerLawPoint> pts = {{0.1, 5.0}, {0.2, 3.1}, {0.3, 2.0}, {0.4, 1.7}};
  const PowerLawFit base = fit_power_law(pts);
  for (double k : {0.01, 3.0, 1e4}) {
    std::vector<PowerLawPoint> scaled = pts;
    for (auto& pt : scaled) pt.s_max *= k;
    const PowerLawFit f = fit_power_law(scaled);
    CHECK(close_rel(f.c, k * base.c, 1e-12));
    CHECK(std::abs(f.a - base.a) <= 1e-12);
    CHECK(std::abs(f.ci95_a_low - base.ci95_a_low) <= 1e-12);
    CHECK(std::abs(f.ci95_a_high - base.ci95_a_high) <= 1e-12);
  }
}

TEST_CASE("power-law confidence interval coverage", "[theory]") {
  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> noise(0.0, 0.01);
  const std::vector<double> ps = {0.12, 0.14, 0.16, 0.18, 0.2};
  int covered = 0;
  constexpr int kTrials = 1000;
  for (int trial = 0; trial < kTrials; ++trial) {
    auto pts = synthetic(1.41, -0.8267, ps);
    for (auto& pt : pts) pt.s_max *= std::exp(noise(rng));
    const PowerLawFit f = fit_power_law(pts);
    if (f.ci95_a_low <= -0.8267 && -0.8267 <= f.ci95_a_high) ++covered;
  }
  CHECK(covered >= 900);
}

TEST_CASE("power-law fit input validation", "[theory]") {
  CHECK_THROWS_AS(fit_power_law(synthetic(1.0, -1.0, {0.1, 0.2})), ArgumentError);
  CHECK_THROWS_AS(fit_power_law(synthetic(1.0, -1.0, {0.1, 0.1, 0.1})), ArgumentError);
  std::vector<PowerLawPoint> bad = synthetic(1.0, -1.0, {0.1, 0.2, 0.3});
  bad[1].s_max = 0.0;
  CHECK_THROWS_AS(fit_power_law(bad), ArgumentError);
  bad[1] = {-0.2, 1.0};
  CHECK_THROWS_AS(fit_power_law(bad), ArgumentError);
}

TEST_CASE("power-law report", "[theory]") {
  const auto pts = synthetic(1.41, -0.8267, {0.12, 0.16, 0.2});
  const PowerLawFit fit = fit_power_law(pts);
  const nlohmann::json doc = power_law_report(pts, fit);
  CHECK(doc.at("a").get<double>() == fit.a);
  CHECK(doc.at("c").get<double>() == fit.c);
  CHECK(doc.at("ci95_a").size() == 2);
  CHECK(doc.at("points").size() == 3);
  CHECK(doc.at("input_digest").get<std::string>() == input_digest(pts));
  CHECK(input_digest(pts).size() == 16);
  auto other = pts;
  other[0].s_max += 1e-9;
  CHECK(input_digest(other) != input_digest(pts));
}

TEST_CASE("b0 recovery from the second Renyi law", "[theory]") {
  std::vector<RenyiSample> samples;
  for (double n : {16.0, 25.0}) {
    for (double t = 0.0; t <= 20.0; t += 2.0) samples.push_back({t, n, predicted_second_renyi(t, n, 0.16, 0.2)});
  }
  const B0Fit fit = fit_b0_from_renyi(samples, 0.16);
  CHECK(std::abs(fit.b0 - 0.2) <= 1e-8);
  CHECK(fit.residual_rms <= 1e-8);
  CHECK(fit.samples_used < samples.size());  // saturated depths excluded

  std::vector<RenyiSample> doubled = samples;
  doubled.insert(doubled.end(), samples.begin(), samples.end());
  const B0Fit twice = fit_b0_from_renyi(doubled, 0.16);
  CHECK(std::abs(twice.b0 - fit.b0) <= 1e-12);
  CHECK(twice.samples_used == 2 * fit.samples_used);

  for (double b0 : {0.05, 0.35, 1.0}) {
    std::vector<RenyiSample> s;
    for (double t = 0.0; t <= 10.0; t += 1.0) s.push_back({t, 36.0, predicted_second_renyi(t, 36.0, 0.1, b0)});
    CHECK(std::abs(fit_b0_from_renyi(s, 0.1).b0 - b0) <= 1e-8 * b0);
  }
}

TEST_CASE("b0 fit input validation", "[theory]") {
  const std::vector<RenyiSample> saturated = {{30.0, 16.0, 15.95}, {40.0, 16.0, 16.0}};
  CHECK_THROWS_AS(fit_b0_from_renyi(saturated, 0.16), ArgumentError);
  const std::vector<RenyiSample> ok = {{2.0, 16.0, 3.0}};
  CHECK_THROWS_AS(fit_b0_from_renyi(ok, 0.0), ArgumentError);
  const std::vector<RenyiSample> bad = {{-1.0, 16.0, 3.0}};
  CHECK_THROWS_AS(fit_b0_from_renyi(bad, 0.16), ArgumentError);
}

}  // namespace
}  // namespace nrqc
