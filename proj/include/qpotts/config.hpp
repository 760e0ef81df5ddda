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

// Experiment configuration: line-oriented `key = value` text with `#`
// comments and dotted section keys.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpotts/model.hpp"
#include "qpotts/phase.hpp"

namespace qpotts {

enum class Mode { kMc, kClassicalExact, kMeanfield, kLindblad, kSweep, kHysteresis, kHopf, kLcMap, kOrbit };

std::string_view to_string(Mode mode);
/// Throws ParameterError on an unknown name.
Mode parse_mode(std::string_view name);
const std::vector<Mode>& all_modes();

struct GridConfig {
  double t_lo = 0.2, t_hi = 3.0;
  int t_n = 60;
  double lambda_lo = 0.0, lambda_hi = 5.0;
  int lambda_n = 60;
};

struct McConfig {
  int sweeps = 2000;
  int burn_in = 500;
  double m0 = 1.0;
  std::vector<double> temperatures;  ///< empty: just T
};

struct ExactConfig {
  double t_end = 10.0;
  double dt = 1e-3;
  int record_every = 10;
  double m0 = 1.0;
};

struct MeanfieldConfig {
  double dt = 0.01;
  double t_end = 100.0;
  double m0 = 1.0;
  int record_every = 10;
};

struct LindbladConfig {
  double t_end = 10.0;
  double dt = 1e-3;
  int record_every = 10;
  std::string initial = "planted";  ///< pattern | planted | mixed | superposition
  double m0 = 1.0;
  std::string dump;                 ///< optional path for the final density matrix
  std::string dump_format = "text"; ///< text | binary
};

struct SweepConfig {
  std::vector<IcFamily> ics{IcFamily::kNearPattern, IcFamily::kWeak};
  double t_end = 10000.0;
  double window_lo = 9000.0;
  double window_hi = 10000.0;
  int window_n = 2000;
  double sigma_threshold = 1e-6;
  double retrieval_threshold = 0.05;
  double paramagnetic_threshold = 1e-3;
  double distinct_threshold = 0.1;
  double early_stop_time = 500.0;
  double early_stop_residual = 1e-9;
};

struct HysteresisConfig {
  IcFamily first = IcFamily::kWeak;
  IcFamily second = IcFamily::kNearPattern;
  double t_end = 1000.0;
};

struct OrbitConfig {
  int mu = 1;  ///< 1-based pattern index
  double t_end = 10000.0;
};

struct ExperimentConfig {
  Mode mode = Mode::kMeanfield;
  double temperature = 1.0;
  double lambda = 0.0;
  int p = 1;
  int q = 3;
  double gamma = 1.0;
  int n_sites = 3;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output = "qpotts_out.csv";
  std::string json;  ///< optional JSON summary path

  GridConfig grid;
  McConfig mc;
  ExactConfig classical;
  MeanfieldConfig meanfield;
  LindbladConfig lindblad;
  SweepConfig sweep;
  HysteresisConfig hysteresis;
  OrbitConfig orbit;

  ModelParams model_params() const;
  SweepSpec sweep_spec() const;
};

/// Parses config text. `mode` is required; everything else has a default.
/// Throws ConfigError (with the line number) on syntax errors, unknown or
/// repeated keys, type mismatches and out-of-range values.
ExperimentConfig parse_config(std::string_view text);

/// As above, but `mode` may be omitted from the text and is taken from
/// `expected`; a conflicting `mode` line is a ConfigError.
ExperimentConfig parse_config(std::string_view text, std::optional<Mode> expected);

/// Applies one `key=value` override on top of an existing config.
void apply_override(ExperimentConfig& config, std::string_view assignment);

/// Every key in a fixed order, one `key = value` line each.
/// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

/// Names of all accepted keys, in serialization order.
std::vector<std::string> config_keys();

}  // namespace qpotts
