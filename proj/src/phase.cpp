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

#include "qpotts/phase.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpotts/error.hpp"
#include "qpotts/parallel.hpp"

namespace qpotts {

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::kParamagnetic: return "paramagnetic";
    case PhaseLabel::kRetrieval: return "retrieval";
    case PhaseLabel::kCoexistence: return "coexistence";
    case PhaseLabel::kLimitCycle: return "limit-cycle";
  }
  return "unknown";
}

std::string_view to_string(IcFamily family) {
  switch (family) {
    case IcFamily::kNearPattern: return "near-pattern";
    case IcFamily::kWeak: return "weak";
    case IcFamily::kNegative: return "negative";
    case IcFamily::kZeroPlus: return "zero-plus";
  }
  return "unknown";
}

IcFamily parse_ic_family(std::string_view name) {
  if (name == "near-pattern") return IcFamily::kNearPattern;
  if (name == "weak") return IcFamily::kWeak;
  if (name == "negative") return IcFamily::kNegative;
  if (name == "zero-plus") return IcFamily::kZeroPlus;
  throw ParameterError("unknown initial-condition family '" + std::string(name) + "'");
}

double draw_ic(IcFamily family, Rng& rng) {
  switch (family) {
    case IcFamily::kNearPattern: return rng.uniform(0.9, 1.0);
    case IcFamily::kWeak: return 0.2 - rng.uniform(0.0, 0.2);  // (0, 0.2]
    case IcFamily::kNegative: return rng.uniform(-0.4, -0.05);
    case IcFamily::kZeroPlus: return 1e-3;
  }
  throw ParameterError("unknown initial-condition family");
}

void SweepSpec::validate() const {
  if (t_n < 1 || lambda_n < 1) throw ParameterError("sweep grid needs at least one point per axis");
  if (!(t_lo > 0.0) || t_hi < t_lo) throw ParameterError("sweep needs 0 < t_lo <= t_hi");
  if (lambda_lo < 0.0 || lambda_hi < lambda_lo) {
    throw ParameterError("sweep needs 0 <= lambda_lo <= lambda_hi");
  }
  if (ics.empty()) throw ParameterError("sweep needs at least one initial-condition family");
  if (p < 1 || p > kMaxDisorderPatterns) {
    throw ParameterError("sweep p must be in [1, " + std::to_string(kMaxDisorderPatterns) + "]");
  }
  if (!(run.dt > 0.0) || !(run.t_end > 0.0)) throw ParameterError("sweep needs dt > 0, t_end > 0");
  if (run.window.t_hi > run.t_end + 1e-9 || !(run.window.t_hi > run.window.t_lo) ||
      run.window.t_lo < 0.0) {
    throw ParameterError("sigma window must lie inside [0, t_end]");
  }
}

double SweepSpec::temperature(int k) const {
  return t_n == 1 ? t_lo : t_lo + (t_hi - t_lo) * k / (t_n - 1);
}

double SweepSpec::lambda(int k) const {
  return lambda_n == 1 ? lambda_lo : lambda_lo + (lambda_hi - lambda_lo) * k / (lambda_n - 1);
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ParameterError("correlation needs two equal series of length >= 2");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

namespace {

double max_abs(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

Attractor classify_outcome(const IcOutcome& o, const Thresholds& th) {
  if (o.blow_up_time) return Attractor::kFailed;
  if (!o.sigma.empty() && *std::max_element(o.sigma.begin(), o.sigma.end()) >= th.sigma) {
    return Attractor::kLimitCycle;
  }
  double m_max = 0.0;
  for (double m : o.m_final) m_max = std::max(m_max, std::abs(m));
  return m_max >= th.retrieval_overlap ? Attractor::kRetrieval : Attractor::kParamagnetic;
}

}  // namespace

IcOutcome run_initial_condition(const ModelParams& params, IcFamily family,
                                const std::vector<double>& m0, const RunSettings& run,
                                const Thresholds& thresholds) {
  params.validate();
  if (static_cast<int>(m0.size()) != params.p) throw ParameterError("m0 must have p entries");
  if (run.window.t_hi > run.t_end + 1e-9) throw ParameterError("sigma window exceeds t_end");

  const MeanFieldModel model(params);
  IcOutcome out;
  out.family = family;
  out.m0 = m0;
  out.sigma.assign(params.p, 0.0);

  const long steps = std::max(1L, std::lround(std::ceil(run.t_end / run.dt - 1e-9)));
  const double h = run.t_end / static_cast<double>(steps);
  const long check_every = std::max(1L, std::lround(1.0 / h));

  CollectiveState start = CollectiveState::classical(m0);
  std::vector<double> state(start.values().begin(), start.values().end());
  std::vector<double> scratch, rate(state.size());

  Trajectory window;
  window.p = params.p;
  window.params = params;
  const double record_from = run.window.t_lo - h;

  long n = 0;
  for (n = 1; n <= steps; ++n) {
    model.rk4_step(state, h, scratch);
    const double t = static_cast<double>(n) * h;
    for (double v : state) {
      if (!std::isfinite(v) || std::abs(v) > kBlowUpBound) {
        out.blow_up_time = t;
        break;
      }
    }
    if (out.blow_up_time) break;
    if (t < run.early_stop_time && n % check_every == 0) {
      model.rhs(state, rate);
      if (max_abs(rate) < run.early_stop_residual) {
        out.stopped_early = true;
        break;
      }
    }
    if (t >= record_from) {
      window.times.push_back(t);
      window.states.insert(window.states.end(), state.begin(), state.end());
    }
  }
  out.t_reached = static_cast<double>(std::min(n, steps)) * h;
  out.m_final.assign(state.begin(), state.begin() + params.p);

  if (!out.stopped_early && !out.blow_up_time && window.size() >= 2) {
    const auto samples = sample_overlaps(window, run.window);
    for (int mu = 0; mu < params.p; ++mu) {
      const auto& s = samples[mu];
      double mean = 0.0;
      for (double v : s) mean += v;
      mean /= static_cast<double>(s.size());
      double var = 0.0;
      for (double v : s) var += (v - mean) * (v - mean);
      out.sigma[mu] = std::sqrt(var / static_cast<double>(s.size()));
    }
    if (params.p >= 2) out.correlation = pearson_correlation(samples[0], samples[1]);
  }
  out.attractor = classify_outcome(out, thresholds);
  return out;
}

PointResult classify_point(double temperature, double lambda, const SweepSpec& spec, int t_index,
                           int lambda_index) {
  spec.validate();
  const ModelParams params = ModelParams::at_temperature(temperature, lambda, spec.p, spec.gamma);
  PointResult point{temperature, lambda, PhaseLabel::kParamagnetic, {},
                    std::vector<double>(spec.p, 0.0)};
  for (std::size_t c = 0; c < spec.ics.size(); ++c) {
    Rng rng(mix_seed(spec.seed, {static_cast<std::uint64_t>(t_index),
                                 static_cast<std::uint64_t>(lambda_index), c}));
    std::vector<double> m0(spec.p);
    for (double& m : m0) m = draw_ic(spec.ics[c], rng);
    point.outcomes.push_back(run_initial_condition(params, spec.ics[c], m0, spec.run,
                                                   spec.thresholds));
  }

  bool cycling = false;
  std::vector<const IcOutcome*> settled;
  for (const auto& o : point.outcomes) {
    for (int mu = 0; mu < spec.p; ++mu) point.sigma[mu] = std::max(point.sigma[mu], o.sigma[mu]);
    if (o.attractor == Attractor::kLimitCycle) cycling = true;
    if (o.attractor == Attractor::kRetrieval || o.attractor == Attractor::kParamagnetic) {
      settled.push_back(&o);
    }
  }
  if (cycling) {
    point.label = PhaseLabel::kLimitCycle;
    return point;
  }
  bool distinct = false;
  bool any_retrieval = false;
  for (std::size_t a = 0; a < settled.size(); ++a) {
    any_retrieval = any_retrieval || settled[a]->attractor == Attractor::kRetrieval;
    for (std::size_t b = a + 1; b < settled.size(); ++b) {
      for (int mu = 0; mu < spec.p; ++mu) {
        if (std::abs(settled[a]->m_final[mu] - settled[b]->m_final[mu]) >
            spec.thresholds.distinct) {
          distinct = true;
        }
      }
    }
  }
  if (distinct) {
    point.label = PhaseLabel::kCoexistence;
  } else if (any_retrieval) {
    point.label = PhaseLabel::kRetrieval;
  }
  return point;
}

std::vector<PointResult> sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = static_cast<std::size_t>(spec.t_n) * spec.lambda_n;
  std::vector<PointResult> out(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        const int it = static_cast<int>(k / spec.lambda_n);
        const int il = static_cast<int>(k % spec.lambda_n);
        out[k] = classify_point(spec.temperature(it), spec.lambda(il), spec, it, il);
      },
      spec.threads);
  return out;
}

std::vector<SigmaRow> limit_cycle_map(const SweepSpec& spec) {
  const auto points = sweep(spec);
  std::vector<SigmaRow> rows;
  rows.reserve(points.size());
  for (const auto& pt : points) rows.push_back({pt.temperature, pt.lambda, pt.sigma});
  return rows;
}

HysteresisBranches hysteresis_scan(double lambda, const std::vector<double>& temperatures, int p,
                                   std::pair<IcFamily, IcFamily> ic_pair, std::uint64_t seed,
                                   double t_end, double dt, double gamma) {
  if (temperatures.empty()) throw ParameterError("hysteresis scan needs temperatures");
  HysteresisBranches out;
  out.first_family = ic_pair.first;
  out.second_family = ic_pair.second;
  Rng rng_a(mix_seed(seed, {0}));
  Rng rng_b(mix_seed(seed, {1}));
  out.first_m0 = draw_ic(ic_pair.first, rng_a);
  out.second_m0 = draw_ic(ic_pair.second, rng_b);

  const std::size_t n = temperatures.size();
  out.first.resize(n);
  out.second.resize(n);
  parallel_for(2 * n, [&](std::size_t k) {
    const std::size_t i = k % n;
    const bool first = k < n;
    const double temp = temperatures[i];
    const ModelParams params = ModelParams::at_temperature(temp, lambda, p, gamma);
    const double m0 = first ? out.first_m0 : out.second_m0;
    const auto traj = integrate(CollectiveState::classical(std::vector<double>(p, m0)), params,
                                t_end, dt, 1, t_end);
    const double m = traj.state(traj.size() - 1)[0];
    (first ? out.first : out.second)[i] = {temp, m};
  });
  return out;
}

std::optional<double> drop_temperature(const std::vector<HysteresisRow>& branch,
                                       double threshold) {
  for (const auto& row : branch) {
    if (std::abs(row.m_stat) < threshold) return row.temperature;
  }
  return std::nullopt;
}

OrbitSection orbit_section(double temperature, double lambda, int p, int mu, double t_end,
                           double dt, double gamma, double sigma_threshold) {
  if (mu < 0 || mu >= p) throw ParameterError("orbit pattern index out of range");
  const double span = std::min(500.0, 0.5 * t_end);
  const ModelParams params = ModelParams::at_temperature(temperature, lambda, p, gamma);
  const auto traj = integrate(CollectiveState::classical(std::vector<double>(p, 1e-3)), params,
                              t_end, dt, 1, t_end - span);

  OrbitSection out;
  const auto sigma = limit_cycle_sigma(traj, {t_end - span, t_end, 2000});
  if (sigma[mu] < sigma_threshold) {
    out.reason = "trajectory settles to a fixed point (sigma_m = " + std::to_string(sigma[mu]) +
                 ")";
    return out;
  }
  out.is_cycle = true;

  // Late samples, skipping the t = 0 record.
  const std::size_t y_index = static_cast<std::size_t>(3 * p + mu);
  std::vector<double> t, m, y;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    t.push_back(traj.times[k]);
    m.push_back(traj.state(k)[mu]);
    y.push_back(traj.state(k)[y_index]);
  }
  double mean = 0.0;
  for (double v : m) mean += v;
  mean /= static_cast<double>(m.size());
  std::vector<double> crossings;
  for (std::size_t k = 1; k < m.size(); ++k) {
    if (m[k - 1] < mean && m[k] >= mean) {
      const double f = (mean - m[k - 1]) / (m[k] - m[k - 1]);
      crossings.push_back(t[k - 1] + f * (t[k] - t[k - 1]));
    }
  }
  if (crossings.size() < 3) {
    out.reason = "fewer than three mean crossings in the late window";
    return out;
  }
  const std::size_t use = std::min<std::size_t>(crossings.size() - 1, 10);
  out.period = (crossings.back() - crossings[crossings.size() - 1 - use]) / use;

  const double tc = crossings.back();
  const double tp = tc - out.period;
  const double dm = traj.interpolate(mu, tc) - traj.interpolate(mu, tp);
  const double dy = traj.interpolate(y_index, tc) - traj.interpolate(y_index, tp);

  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= tp && t[k] <= tc) out.samples.emplace_back(y[k], m[k]);
  }
  const std::size_t stride = std::max<std::size_t>(1, out.samples.size() / 400);
  double diameter = 0.0;
  for (std::size_t a = 0; a < out.samples.size(); a += stride) {
    for (std::size_t b = a + stride; b < out.samples.size(); b += stride) {
      diameter = std::max(diameter, std::hypot(out.samples[a].first - out.samples[b].first,
                                               out.samples[a].second - out.samples[b].second));
    }
  }
  out.closure = diameter > 0.0 ? std::hypot(dm, dy) / diameter : 0.0;
  out.closed = out.closure < 0.01;
  out.reason = out.closed ? "closed orbit" : "orbit does not close within 1% of its diameter";
  return out;
}

}  // namespace qpotts
