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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// fails. Pass criterion names as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qpotts/classical.hpp"
#include "qpotts/lindblad.hpp"
#include "qpotts/meanfield.hpp"
#include "qpotts/phase.hpp"

using namespace qpotts;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// First-order transition at lambda 0: weak branch drops in [2.0, 2.25],
// near-pattern branch survives at least 0.05 longer.
Verdict first_order_transition() {
  std::vector<double> temps;
  for (int k = 0; k <= 80; ++k) temps.push_back(1.8 + 0.01 * k);
  const auto h = hysteresis_scan(0.0, temps, 1, {IcFamily::kWeak, IcFamily::kNearPattern}, 1);
  const auto weak = drop_temperature(h.first);
  const auto near = drop_temperature(h.second);
  if (!weak || !near) return {false, "a branch never lost retrieval on [1.8, 2.6]"};
  const bool ok = *weak >= 2.0 && *weak <= 2.25 && *near - *weak >= 0.05 - 1e-9;
  return {ok, fmt("T_drop weak=%.2f near-pattern=%.2f gap=%.2f", *weak, *near, *near - *weak)};
}

Verdict paramagnetic_stationarity() {
  Rng rng(2024);
  double worst = 0.0;
  for (int a = 0; a < 10; ++a) {
    const double t = rng.uniform(0.2, 3.0);
    for (int b = 0; b < 10; ++b) {
      const double l = rng.uniform(0.0, 5.0);
      for (int p : {1, 2}) {
        const MeanFieldModel model(ModelParams::at_temperature(t, l, p));
        std::vector<double> zero(model.dim(), 0.0), out(model.dim());
        model.rhs(zero, out);
        for (double v : out) worst = std::max(worst, std::abs(v));
      }
    }
  }
  return {worst < 1e-14, fmt("max |rhs(0)| = %.3g over 100 points, p = 1, 2", worst)};
}

Verdict disorder_anchor() {
  double worst = 0.0;
  for (int p = 1; p <= 3; ++p) {
    const std::vector<double> m(p, 0.0);
    for (double beta : {0.3, 1.0, 4.0}) {
      for (int alpha = 1; alpha <= 3; ++alpha) {
        for (int s : {+1, -1}) {
          const double avg = disorder_average(
              [&](std::span<const int> k) {
                return damping_coefficient(meanfield_rates(m, k, beta), s, alpha);
              },
              p);
          worst = std::max(worst, std::abs(avg - 2.0 / 3.0));
        }
      }
    }
  }
  return {worst < 1e-12, fmt("max |<<h>> - 2/3| = %.3g", worst)};
}

// The window statistic is computed on the full run (no early stop).
Verdict single_pattern_cycle() {
  RunSettings run;
  run.early_stop_time = 0.0;
  const auto o = run_initial_condition(ModelParams::at_temperature(0.86, 4.0), IcFamily::kZeroPlus,
                                       {1e-3}, run, Thresholds{});
  const double s = o.sigma[0];
  return {s > 1e-6 && s < 1e-3,
          fmt("sigma_m = %.3g, m_final = %.4f (want 1e-6 < sigma_m < 1e-3)", s, o.m_final[0])};
}

Verdict two_pattern_cycles() {
  RunSettings run;
  run.early_stop_time = 0.0;
  const Thresholds thr;
  const auto a = run_initial_condition(ModelParams::at_temperature(0.6, 4.5, 2), IcFamily::kZeroPlus,
                                       {1e-3, 1e-3}, run, thr);
  const bool a_ok = a.sigma[0] > thr.sigma && a.sigma[1] > thr.sigma && a.correlation < -0.5;

  // Any initial family that shows single-overlap oscillation counts.
  SweepSpec spec;
  spec.p = 2;
  spec.ics = {IcFamily::kZeroPlus, IcFamily::kWeak, IcFamily::kNearPattern, IcFamily::kNegative};
  spec.run = run;
  const auto b = classify_point(0.99, 3.0, spec);
  int best = 0;
  std::string sig;
  for (const auto& o : b.outcomes) {
    const int above = (o.sigma[0] > thr.sigma) + (o.sigma[1] > thr.sigma);
    if (above == 1) best = 1;
    sig += " " + std::string(to_string(o.family)) + fmt("=(%.2g,%.2g)", o.sigma[0], o.sigma[1]);
  }
  const bool b_ok = best == 1;
  return {a_ok && b_ok,
          fmt("(4.5,0.6): sigma=(%.3g,%.3g) corr=%.3f", a.sigma[0], a.sigma[1], a.correlation) +
              (a_ok ? " ok" : " FAIL") + "; (3.0,0.99) sigma per IC:" + sig +
              (b_ok ? " ok" : " FAIL (no IC with exactly one overlap cycling)")};
}

Verdict hopf_crossing() {
  const auto scan = hopf_scan(2.5, 0.5, 1.5, 201);
  if (scan.crossings.size() != 1) {
    return {false, "found " + std::to_string(scan.crossings.size()) + " crossings in (0.5, 1.5)"};
  }
  const double t = scan.crossings[0], w = scan.crossing_frequencies[0];
  return {t > 0.5 && t < 1.5 && w > 0.0, fmt("T* = %.5f, |Im| = %.4f", t, w)};
}

// Exact N = 2 against mean field from the same planted overlap.
Verdict exact_vs_meanfield() {
  const auto pat = PatternSet::generate(2, 1, 3, 1);
  const double m0 = 1.0;
  struct Diffs {
    double early = 0.0, late = 0.0, final_exact = 0.0, final_mf = 0.0;
  };
  auto compare = [&](double temperature) {
    const auto params = ModelParams::at_temperature(temperature, 0.1);
    const LindbladSolver solver(pat, params);
    LindbladOptions opt;
    opt.t_end = 100.0;
    opt.dt = 1e-3;
    opt.record_every = 100;
    const auto rec =
        solver.evolve(initial_density_matrix(InitialState::kPlantedMixture, pat, 0, m0), opt);
    const auto mf = integrate(CollectiveState::classical({m0}), params, 100.0, 1e-3, 100);
    Diffs d;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
      const double diff = std::abs(rec.overlaps[k][0] - mf.interpolate(0, rec.times[k]));
      if (rec.times[k] < 5.0) d.early = std::max(d.early, diff);
      if (rec.times[k] > 20.0) d.late = std::max(d.late, diff);
    }
    d.final_exact = rec.overlaps.back()[0];
    d.final_mf = mf.state(mf.size() - 1)[0];
    return d;
  };
  const auto hot = compare(2.5);
  const auto cold = compare(0.5);
  const bool hot_ok = hot.late < 0.05 && hot.early > hot.late;
  const double offset = std::abs(cold.final_exact - cold.final_mf);
  const bool cold_ok = offset > 1e-3 && offset < 0.2;
  return {hot_ok && cold_ok,
          fmt("T=2.5: late %.4f early %.4f", hot.late, hot.early) + (hot_ok ? " ok" : " FAIL") +
              fmt("; T=0.5: exact %.4f mf %.4f offset %.4f", cold.final_exact, cold.final_mf,
                  offset) +
              (cold_ok ? " ok" : " FAIL (want 0 < offset < 0.2)")};
}

Verdict quantum_map_sanity() {
  Rng rng(8);
  double trace = 0.0, herm = 0.0, min_eig = 1.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double t = rng.uniform(0.3, 3.0), l = rng.uniform(0.0, 3.0);
    const auto kind = static_cast<InitialState>(rng.uniform_int(4));
    const auto pat = PatternSet::generate(3, 1 + rng.uniform_int(2), 3, 100 + trial);
    const LindbladSolver solver(pat, ModelParams::at_temperature(t, l, pat.n_patterns()));
    LindbladOptions opt;
    opt.t_end = 5.0;
    opt.dt = 1e-3;
    opt.record_every = 50;
    opt.positivity_every = 1;
    const auto rec = solver.evolve(initial_density_matrix(kind, pat, 0, 0.6), opt);
    trace = std::max(trace, rec.max_trace_drift);
    herm = std::max(herm, rec.max_hermiticity);
    min_eig = std::min(min_eig, rec.min_eigenvalue);
  }
  return {trace < 1e-10 && herm < 1e-10 && min_eig >= -1e-8,
          fmt("trace drift %.3g, hermiticity %.3g, min eigenvalue %.3g", trace, herm, min_eig)};
}

Verdict classical_diagonal() {
  const auto pat = PatternSet::generate(3, 2, 3, 31);
  const auto params = ModelParams::at_temperature(0.7, 0.0, 2);
  const LindbladSolver solver(pat, params);
  const ClassicalMasterEquation me(pat, params);
  const auto rho0 = initial_density_matrix(InitialState::kPlantedMixture, pat, 0, 0.4);
  LindbladOptions opt;
  opt.t_end = 10.0;
  opt.dt = 1e-3;
  opt.record_every = 500;
  opt.record_populations = true;
  const auto rec = solver.evolve(rho0, opt);
  std::vector<double> p(me.dim());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = rho0(k, k).real();
  double worst = 0.0, t_prev = 0.0;
  for (std::size_t r = 0; r < rec.times.size(); ++r) {
    if (rec.times[r] > t_prev) p = me.evolve(p, rec.times[r] - t_prev, 1e-3);
    t_prev = rec.times[r];
    for (std::size_t k = 0; k < p.size(); ++k) {
      worst = std::max(worst, std::abs(rec.populations[r][k] - p[k]));
    }
  }
  return {worst < 1e-8, fmt("max |diag rho - p| = %.3g over %g records", worst,
                            static_cast<double>(rec.times.size()))};
}

Verdict q2_reduction() {
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto pat = PatternSet::generate(3, 1, 2, 40 + trial);
    const auto params = ModelParams::at_temperature(0.5 + 0.5 * trial, 0.0, 1, 1.0, 2);
    const auto rho0 = initial_density_matrix(InitialState::kPlantedMixture, pat, 0, 0.5);
    worst = std::max(worst, q2_reduction_check(pat, params, rho0, 3.0, 1e-3));
  }
  return {worst < 1e-6, fmt("max deviation %.3g", worst)};
}

Verdict mc_gibbs() {
  const auto pat = PatternSet::generate(3, 1, 3, 12);
  const auto params = ModelParams::at_temperature(2.0);
  const auto pi = gibbs_distribution(pat, params.beta);
  Rng rng(mix_seed(12, {1}));
  HeatBathChain chain(pat, params, SpinConfig::from_pattern(pat, 0));
  const BasisIndexer basis(3, 3);
  std::vector<double> hist(basis.dim(), 0.0);
  const long steps = 10000000;
  for (long k = 0; k < 10000; ++k) chain.step(rng);
  for (long k = 0; k < steps; ++k) {
    chain.step(rng);
    hist[basis.index_of(chain.config())] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) tv += 0.5 * std::abs(hist[k] / steps - pi[k]);
  return {tv < 0.01, fmt("total variation %.4g after 1e7 steps at beta = 0.5", tv)};
}

// Coarse 12 x 12 label map.
Verdict coarse_sweep() {
  SweepSpec spec;
  spec.t_lo = 0.2;
  spec.t_hi = 2.9;
  spec.t_n = 12;
  spec.lambda_lo = 0.0;
  spec.lambda_hi = 5.0;
  spec.lambda_n = 12;
  const auto pts = sweep(spec);
  auto at = [&](int it, int il) { return pts[static_cast<std::size_t>(it * spec.lambda_n + il)].label; };

  std::map<PhaseLabel, int> counts;
  for (const auto& r : pts) counts[r.label]++;
  std::string problems;
  if (counts.size() != 4) problems += " not all four labels present;";
  for (int il = 0; il < spec.lambda_n; ++il) {
    if (at(spec.t_n - 1, il) != PhaseLabel::kParamagnetic) problems += " top row not paramagnetic;";
  }
  if (at(0, 0) != PhaseLabel::kRetrieval) problems += " lowest T at lambda 0 not retrieval;";
  for (int it = 0; it < spec.t_n; ++it) {
    for (int il = 0; il < spec.lambda_n; ++il) {
      if (at(it, il) == PhaseLabel::kCoexistence) {
        bool ordered_below = false, para_above = false;
        for (int k = 0; k < it; ++k) {
          ordered_below |= at(k, il) == PhaseLabel::kRetrieval || at(k, il) == PhaseLabel::kLimitCycle;
        }
        for (int k = it + 1; k < spec.t_n; ++k) para_above |= at(k, il) == PhaseLabel::kParamagnetic;
        if (!ordered_below || !para_above) problems += " coexistence cell out of order;";
      }
      if (at(it, il) == PhaseLabel::kLimitCycle && spec.lambda(il) <= 0.2) {
        problems += " limit cycle at lambda <= 0.2;";
      }
    }
    // Cycling cells of a row form one block reaching the largest lambda.
    bool seen = false;
    for (int il = 0; il < spec.lambda_n; ++il) {
      const bool lc = at(it, il) == PhaseLabel::kLimitCycle;
      if (seen && !lc) problems += " limit-cycle cells not a high-lambda block;";
      seen |= lc;
    }
  }
  std::string map;
  for (int it = spec.t_n - 1; it >= 0; --it) {
    map += "\n    " + fmt("T=%5.3f ", spec.temperature(it));
    for (int il = 0; il < spec.lambda_n; ++il) {
      static const char kLetter[] = {'P', 'R', 'C', 'L'};
      map += kLetter[static_cast<int>(at(it, il))];
    }
  }
  std::string summary;
  for (const auto& [label, n] : counts) summary += " " + std::string(to_string(label)) + "=" + std::to_string(n);
  return {problems.empty(), "counts:" + summary + (problems.empty() ? "" : " |" + problems) + map};
}

// Pointwise examples quoted with specific parameters.
Verdict example_limit_cycle_point() {
  const SweepSpec spec;
  const auto r = classify_point(0.86, 4.0, spec);
  return {r.label == PhaseLabel::kLimitCycle,
          "(T=0.86, lambda=4.0) labelled " + std::string(to_string(r.label)) +
              fmt(", sigma_m = %.3g, m_final = %.4f", r.sigma[0], r.outcomes[0].m_final[0])};
}

Verdict example_closed_orbit() {
  const auto o = orbit_section(0.8, 4.5, 2, 0);
  return {o.is_cycle && o.closed,
          o.is_cycle ? fmt("period %.4f closure %.3g", o.period, o.closure)
                     : "(T=0.8, lambda=4.5, p=2) not a cycle: " + o.reason};
}

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"1-first-order-transition", first_order_transition},
      {"2-paramagnetic-stationarity", paramagnetic_stationarity},
      {"3-disorder-average-anchor", disorder_anchor},
      {"4-limit-cycle-p1", single_pattern_cycle},
      {"5-limit-cycle-p2", two_pattern_cycles},
      {"6-hopf-crossing", hopf_crossing},
      {"7-exact-vs-meanfield", exact_vs_meanfield},
      {"8-quantum-map-sanity", quantum_map_sanity},
      {"9-classical-diagonal", classical_diagonal},
      {"10-q2-reduction", q2_reduction},
      {"11-mc-gibbs", mc_gibbs},
      {"12-coarse-sweep", coarse_sweep},
      {"example-classify-limit-cycle", example_limit_cycle_point},
      {"example-closed-orbit", example_closed_orbit},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.name)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
