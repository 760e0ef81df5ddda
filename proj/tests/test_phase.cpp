// Copyright 2026 The qpotts Authors
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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpotts/error.hpp"
#include "qpotts/phase.hpp"

using namespace qpotts;

namespace {

// Textbook two-pass Pearson coefficient.
double reference_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k] / n;
    mb += b[k] / n;
  }
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

SweepSpec small_spec() {
  SweepSpec spec;
  spec.t_lo = 0.5;
  spec.t_hi = 2.6;
  spec.t_n = 3;
  spec.lambda_lo = 0.0;
  spec.lambda_hi = 4.0;
  spec.lambda_n = 3;
  spec.run.t_end = 600.0;
  spec.run.window = {400.0, 600.0, 200};
  spec.run.early_stop_time = 300.0;
  spec.seed = 7;
  return spec;
}

}  // namespace

TEST_CASE("label and family names round trip") {
  CHECK(to_string(PhaseLabel::kCoexistence) == "coexistence");
  CHECK(to_string(PhaseLabel::kLimitCycle) == "limit-cycle");
  for (auto f : {IcFamily::kNearPattern, IcFamily::kWeak, IcFamily::kNegative, IcFamily::kZeroPlus}) {
    CHECK(parse_ic_family(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_ic_family("strong"), ParameterError);
}

TEST_CASE("initial overlaps stay inside their family ranges") {
  Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const double near = draw_ic(IcFamily::kNearPattern, rng);
    CHECK((near >= 0.9 && near <= 1.0));
    const double weak = draw_ic(IcFamily::kWeak, rng);
    CHECK((weak > 0.0 && weak <= 0.2));
    const double neg = draw_ic(IcFamily::kNegative, rng);
    CHECK((neg >= -0.4 && neg <= -0.05));
  }
  CHECK(draw_ic(IcFamily::kZeroPlus, rng) == 1e-3);
}

TEST_CASE("pearson correlation matches the two-pass formula") {
  Rng rng(3);
  std::vector<double> a(500), b(500);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = rng.uniform(-1.0, 1.0);
    b[k] = 0.3 * a[k] + rng.uniform(-1.0, 1.0);
  }
  CHECK(pearson_correlation(a, b) == doctest::Approx(reference_pearson(a, b)).epsilon(1e-12));
  std::vector<double> c(a);
  for (auto& x : c) x = -2.0 * x + 1.0;
  CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sweep grid validation") {
  SweepSpec spec;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.temperature(0) == doctest::Approx(0.2));
  CHECK(spec.temperature(spec.t_n - 1) == doctest::Approx(3.0));
  spec.t_hi = 0.1;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec = SweepSpec{};
  spec.lambda_n = 0;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec = SweepSpec{};
  spec.ics.clear();
  CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("high temperature point is paramagnetic") {
  const SweepSpec spec;
  const auto r = classify_point(3.0, 0.0, spec);
  CHECK(r.label == PhaseLabel::kParamagnetic);
  for (const auto& o : r.outcomes) {
    CHECK(o.attractor == Attractor::kParamagnetic);
    CHECK(std::abs(o.m_final[0]) < 1e-3);
  }
}

TEST_CASE("coexistence inside the first-order strip at lambda 0") {
  const SweepSpec spec;
  const auto r = classify_point(2.14, 0.0, spec);
  REQUIRE(r.label == PhaseLabel::kCoexistence);
  REQUIRE(r.outcomes.size() == 2);
  const auto& near = r.outcomes[0];
  const auto& weak = r.outcomes[1];
  CHECK(near.family == IcFamily::kNearPattern);
  CHECK(near.attractor == Attractor::kRetrieval);
  CHECK(weak.attractor == Attractor::kParamagnetic);
  CHECK(std::abs(near.m_final[0] - weak.m_final[0]) > spec.thresholds.distinct);
}

TEST_CASE("limit cycle deep in the high lambda pocket") {
  const SweepSpec spec;
  const auto r = classify_point(0.5, 4.0, spec);
  CHECK(r.label == PhaseLabel::kLimitCycle);
  CHECK(*std::max_element(r.sigma.begin(), r.sigma.end()) >= spec.thresholds.sigma);
}

TEST_CASE("sweep is deterministic and consistent with classify_point") {
  auto spec = small_spec();
  spec.threads = 3;
  const auto a = sweep(spec);
  spec.threads = 1;
  const auto b = sweep(spec);
  REQUIRE(a.size() == 9);
  REQUIRE(b.size() == 9);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].temperature == b[k].temperature);
    CHECK(a[k].lambda == b[k].lambda);
    CHECK(a[k].label == b[k].label);
    for (std::size_t c = 0; c < a[k].outcomes.size(); ++c) {
      CHECK(a[k].outcomes[c].m0 == b[k].outcomes[c].m0);
      CHECK(a[k].outcomes[c].m_final == b[k].outcomes[c].m_final);
    }
  }
  // T-major order, lambda fastest.
  CHECK(a[1].temperature == a[0].temperature);
  CHECK(a[1].lambda > a[0].lambda);
  const auto single = classify_point(a[4].temperature, a[4].lambda, spec, 1, 1);
  CHECK(single.label == a[4].label);
  CHECK(single.outcomes[0].m_final == a[4].outcomes[0].m_final);
}

TEST_CASE("label invariants hold on a sweep") {
  const auto spec = small_spec();
  for (const auto& r : sweep(spec)) {
    const double smax = *std::max_element(r.sigma.begin(), r.sigma.end());
    if (r.label == PhaseLabel::kLimitCycle) CHECK(smax >= spec.thresholds.sigma);
    if (r.label == PhaseLabel::kCoexistence) {
      double lo = 1e9, hi = -1e9;
      for (const auto& o : r.outcomes) {
        lo = std::min(lo, o.m_final[0]);
        hi = std::max(hi, o.m_final[0]);
      }
      CHECK(hi - lo > spec.thresholds.distinct);
    }
  }
}

TEST_CASE("hysteresis branches at lambda 0") {
  std::vector<double> temps;
  for (double t = 1.0; t <= 2.4001; t += 0.05) temps.push_back(t);
  const auto h = hysteresis_scan(0.0, temps, 1, {IcFamily::kWeak, IcFamily::kNearPattern}, 5);
  REQUIRE(h.first.size() == temps.size());
  CHECK(h.first.front().m_stat > 0.9);
  CHECK(h.second.front().m_stat > 0.9);
  const auto weak_drop = drop_temperature(h.first);
  const auto near_drop = drop_temperature(h.second);
  REQUIRE(weak_drop.has_value());
  REQUIRE(near_drop.has_value());
  CHECK(*weak_drop >= 2.0 - 1e-9);
  CHECK(*weak_drop <= *near_drop);
}

TEST_CASE("retrieval persists with reduced overlap at lambda 0.8") {
  // Below T ~ 0.45 the near-pattern run is still on a long oscillating
  // transient at t = 1000.
  const auto h = hysteresis_scan(0.8, {0.5, 0.6, 0.7}, 1, {IcFamily::kWeak, IcFamily::kNearPattern}, 2);
  for (const auto* branch : {&h.first, &h.second}) {
    for (const auto& row : *branch) {
      CHECK(row.m_stat > 0.05);
      CHECK(row.m_stat < 0.6);
    }
  }
}

TEST_CASE("no cycles at lambda 0.2") {
  SweepSpec spec;
  spec.t_lo = 0.2;
  spec.t_hi = 3.0;
  spec.t_n = 8;
  spec.lambda_lo = 0.2;
  spec.lambda_hi = 0.2;
  spec.lambda_n = 1;
  for (const auto& row : limit_cycle_map(spec)) {
    CHECK(row.sigma[0] < spec.thresholds.sigma);
  }
}

TEST_CASE("p = 2 out-of-phase cycle") {
  const auto params = ModelParams::at_temperature(0.6, 4.5, 2);
  const auto o = run_initial_condition(params, IcFamily::kZeroPlus, {1e-3, 1e-3}, RunSettings{},
                                       Thresholds{});
  CHECK(o.attractor == Attractor::kLimitCycle);
  CHECK(o.sigma[0] > 1e-6);
  CHECK(o.sigma[1] > 1e-6);
  CHECK(o.correlation < -0.5);
}

TEST_CASE("orbit section") {
  SUBCASE("closed orbit in the cycling regime, period stable under dt halving") {
    const auto a = orbit_section(0.6, 4.5, 2, 0, 1e4, 0.01);
    const auto b = orbit_section(0.6, 4.5, 2, 0, 1e4, 0.005);
    REQUIRE(a.is_cycle);
    REQUIRE(b.is_cycle);
    CHECK(a.closed);
    CHECK(a.closure < 0.01);
    CHECK(!a.samples.empty());
    CHECK(std::abs(a.period - b.period) < 0.01 * b.period);
  }
  SUBCASE("fixed point parameters report not a cycle") {
    const auto o = orbit_section(1.5, 0.0, 2, 0, 2000.0);
    CHECK(!o.is_cycle);
    CHECK(!o.reason.empty());
    CHECK(o.samples.empty());
  }
}
