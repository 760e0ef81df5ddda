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

// Phase classification on the (T, lambda) plane from long-time mean-field
// runs, plus hysteresis branches, limit-cycle maps and orbit sections.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpotts/meanfield.hpp"
#include "qpotts/random.hpp"

namespace qpotts {

enum class PhaseLabel { kParamagnetic, kRetrieval, kCoexistence, kLimitCycle };

std::string_view to_string(PhaseLabel label);

/// Named families of initial overlaps; coherences always start at zero.
enum class IcFamily { kNearPattern, kWeak, kNegative, kZeroPlus };

std::string_view to_string(IcFamily family);
/// Accepts "near-pattern", "weak", "negative", "zero-plus".
IcFamily parse_ic_family(std::string_view name);

/// Draws one overlap from the family range: near-pattern [0.9, 1],
/// weak (0, 0.2], negative [-0.4, -0.05], zero-plus exactly 1e-3.
double draw_ic(IcFamily family, Rng& rng);

struct Thresholds {
  double paramagnetic_norm = 1e-3;  ///< ||state||_inf below this at the end: paramagnetic
  double retrieval_overlap = 0.05;  ///< some |m| at or above this: retrieval
  double sigma = 1e-6;              ///< sigma_m at or above this: limit cycle
  double distinct = 0.1;            ///< attractors differ when some |m_a - m_b| exceeds this
};

struct RunSettings {
  double dt = 0.01;
  double t_end = 10000.0;
  SigmaWindow window{};
  /// A run stops early once ||rhs||_inf < early_stop_residual before early_stop_time.
  double early_stop_time = 500.0;
  double early_stop_residual = 1e-9;
};

struct SweepSpec {
  double t_lo = 0.2, t_hi = 3.0;
  int t_n = 60;
  double lambda_lo = 0.0, lambda_hi = 5.0;
  int lambda_n = 60;
  std::vector<IcFamily> ics{IcFamily::kNearPattern, IcFamily::kWeak};
  int p = 1;
  double gamma = 1.0;
  Thresholds thresholds{};
  RunSettings run{};
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0: QPOTTS_THREADS or hardware concurrency

  void validate() const;
  double temperature(int k) const;
  double lambda(int k) const;
};

enum class Attractor { kParamagnetic, kRetrieval, kLimitCycle, kFailed };

/// Outcome of one initial condition.
struct IcOutcome {
  IcFamily family;
  std::vector<double> m0;
  std::vector<double> m_final;
  std::vector<double> sigma;  ///< per pattern, 0 if the run stopped at a fixed point
  double correlation = 0.0;   ///< Pearson corr of m^1, m^2 over the window (p >= 2)
  double t_reached = 0.0;
  bool stopped_early = false;
  Attractor attractor = Attractor::kFailed;
  std::optional<double> blow_up_time;
};

/// Integrates one initial condition and classifies its long-time behaviour.
IcOutcome run_initial_condition(const ModelParams& params, IcFamily family,
                                const std::vector<double>& m0, const RunSettings& run,
                                const Thresholds& thresholds);

struct PointResult {
  double temperature;
  double lambda;
  PhaseLabel label;
  std::vector<IcOutcome> outcomes;
  std::vector<double> sigma;  ///< per pattern, max over initial conditions
};

/// ICs are drawn with seeds mixed from (seed, t_index, lambda_index, ic_index).
PointResult classify_point(double temperature, double lambda, const SweepSpec& spec,
                           int t_index = 0, int lambda_index = 0);

/// Full grid, T-major (lambda fastest) order; parallel over points.
std::vector<PointResult> sweep(const SweepSpec& spec);

/// sigma_m per pattern on every grid point (max over ICs).
struct SigmaRow {
  double temperature;
  double lambda;
  std::vector<double> sigma;
};
std::vector<SigmaRow> limit_cycle_map(const SweepSpec& spec);

struct HysteresisRow {
  double temperature;
  double m_stat;
};

struct HysteresisBranches {
  IcFamily first_family, second_family;
  double first_m0, second_m0;
  std::vector<HysteresisRow> first, second;
};

/// One overlap draw per branch, reused at every temperature; m_stat is m^1 at
/// t_end.
HysteresisBranches hysteresis_scan(double lambda, const std::vector<double>& temperatures,
                                   int p, std::pair<IcFamily, IcFamily> ic_pair,
                                   std::uint64_t seed, double t_end = 1000.0,
                                   double dt = 0.01, double gamma = 1.0);

/// First temperature on the branch with m_stat below `threshold`.
std::optional<double> drop_temperature(const std::vector<HysteresisRow>& branch,
                                       double threshold = 0.05);

struct OrbitSection {
  bool is_cycle = false;
  std::string reason;
  double period = 0.0;
  double closure = 0.0;  ///< return distance / orbit diameter
  bool closed = false;
  std::vector<std::pair<double, double>> samples;  ///< (y^mu, m^mu) over the last period
};

/// Late-time (y^mu, m^mu) orbit from the zero-plus initial condition.
OrbitSection orbit_section(double temperature, double lambda, int p = 2, int mu = 0,
                           double t_end = 10000.0, double dt = 0.01, double gamma = 1.0,
                           double sigma_threshold = 1e-6);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qpotts
