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

#include "qpotts/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "qpotts/error.hpp"

namespace qpotts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BadValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw BadValue("expected a real number, got '" + std::string(v) + "'");
  }
  return out;
}

long long to_integer(std::string_view v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw BadValue("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  if (trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(trim(v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class Access>
Field real_field(std::string key, Access access, double lo, double hi, bool lo_open = false) {
  auto set = [=](ExperimentConfig& c, std::string_view v) {
    const double x = to_real(v);
    if (x < lo || x > hi || (lo_open && x == lo)) {
      throw BadValue("value " + std::string(v) + " out of range " + (lo_open ? "(" : "[") +
                     format_real(lo) + ", " + format_real(hi) + "]");
    }
    access(c) = x;
  };
  auto get = [=](const ExperimentConfig& c) {
    return format_real(access(c));
  };
  return {std::move(key), set, get};
}

template <class Access>
Field int_field(std::string key, Access access, long long lo, long long hi) {
  auto set = [=](ExperimentConfig& c, std::string_view v) {
    const long long x = to_integer(v);
    if (x < lo || x > hi) {
      throw BadValue("value " + std::string(v) + " out of range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
    }
    access(c) = static_cast<int>(x);
  };
  auto get = [=](const ExperimentConfig& c) {
    return std::to_string(access(c));
  };
  return {std::move(key), set, get};
}

template <class Access>
Field string_field(std::string key, Access access, std::vector<std::string> allowed = {}) {
  auto set = [=](ExperimentConfig& c, std::string_view v) {
    if (!allowed.empty()) {
      bool ok = false;
      for (const auto& a : allowed) ok = ok || a == v;
      if (!ok) throw BadValue("unsupported value '" + std::string(v) + "'");
    }
    access(c) = std::string(v);
  };
  auto get = [=](const ExperimentConfig& c) { return access(c); };
  return {std::move(key), set, get};
}

IcFamily to_family(std::string_view v) {
  try {
    return parse_ic_family(v);
  } catch (const ParameterError&) {
    throw BadValue("unknown initial-condition family '" + std::string(v) + "'");
  }
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"mode",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.mode = parse_mode(v);
                   } catch (const ParameterError&) {
                     throw BadValue("unknown mode '" + std::string(v) + "'");
                   }
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.mode)); }});
    f.push_back(real_field("T", [](auto& c) -> auto& { return c.temperature; }, 0.0,
                           kInf, true));
    f.push_back(real_field("lambda", [](auto& c) -> auto& { return c.lambda; }, 0.0,
                           kInf));
    f.push_back(int_field("p", [](auto& c) -> auto& { return c.p; }, 1, 64));
    f.push_back(int_field("q", [](auto& c) -> auto& { return c.q; }, 2, 64));
    f.push_back(real_field("gamma", [](auto& c) -> auto& { return c.gamma; }, 0.0,
                           kInf, true));
    f.push_back(int_field("N", [](auto& c) -> auto& { return c.n_sites; }, 1,
                          100000000));
    f.push_back({"seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   std::uint64_t x = 0;
                   const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                   if (ec != std::errc{} || ptr != v.data() + v.size()) {
                     throw BadValue("expected a non-negative integer, got '" + std::string(v) +
                                    "'");
                   }
                   c.seed = x;
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    f.push_back(int_field("threads", [](auto& c) -> auto& { return c.threads; }, 0,
                          4096));
    f.push_back(string_field("output", [](auto& c) -> auto& { return c.output; }));
    f.push_back(string_field("json", [](auto& c) -> auto& { return c.json; }));

    f.push_back(real_field("grid.t_lo", [](auto& c) -> auto& { return c.grid.t_lo; },
                           0.0, kInf, true));
    f.push_back(real_field("grid.t_hi", [](auto& c) -> auto& { return c.grid.t_hi; },
                           0.0, kInf, true));
    f.push_back(int_field("grid.t_n", [](auto& c) -> auto& { return c.grid.t_n; }, 1,
                          100000));
    f.push_back(real_field("grid.lambda_lo",
                           [](auto& c) -> auto& { return c.grid.lambda_lo; }, 0.0,
                           kInf));
    f.push_back(real_field("grid.lambda_hi",
                           [](auto& c) -> auto& { return c.grid.lambda_hi; }, 0.0,
                           kInf));
    f.push_back(int_field("grid.lambda_n", [](auto& c) -> auto& { return c.grid.lambda_n; },
                          1, 100000));

    f.push_back(int_field("mc.sweeps", [](auto& c) -> auto& { return c.mc.sweeps; }, 1,
                          1000000000));
    f.push_back(int_field("mc.burn_in", [](auto& c) -> auto& { return c.mc.burn_in; },
                          0, 1000000000));
    f.push_back(real_field("mc.m0", [](auto& c) -> auto& { return c.mc.m0; }, -1.0,
                           1.0));
    f.push_back({"mc.temperatures",
                 [](ExperimentConfig& c, std::string_view v) {
                   std::vector<double> out;
                   for (auto item : split_list(v)) {
                     const double t = to_real(item);
                     if (!(t > 0.0)) throw BadValue("temperatures must be positive");
                     out.push_back(t);
                   }
                   c.mc.temperatures = std::move(out);
                 },
                 [](const ExperimentConfig& c) {
                   std::string s;
                   for (std::size_t k = 0; k < c.mc.temperatures.size(); ++k) {
                     if (k) s += ",";
                     s += format_real(c.mc.temperatures[k]);
                   }
                   return s;
                 }});

    f.push_back(real_field("classical.t_end",
                           [](auto& c) -> auto& { return c.classical.t_end; }, 0.0,
                           kInf, true));
    f.push_back(real_field("classical.dt", [](auto& c) -> auto& { return c.classical.dt; },
                           0.0, kInf, true));
    f.push_back(int_field("classical.record_every",
                          [](auto& c) -> auto& { return c.classical.record_every; }, 1,
                          1000000000));
    f.push_back(real_field("classical.m0", [](auto& c) -> auto& { return c.classical.m0; },
                           -1.0, 1.0));

    f.push_back(real_field("meanfield.dt", [](auto& c) -> auto& { return c.meanfield.dt; },
                           0.0, kInf, true));
    f.push_back(real_field("meanfield.t_end",
                           [](auto& c) -> auto& { return c.meanfield.t_end; }, 0.0,
                           kInf, true));
    f.push_back(real_field("meanfield.m0", [](auto& c) -> auto& { return c.meanfield.m0; },
                           -0.5, 1.0));
    f.push_back(int_field("meanfield.record_every",
                          [](auto& c) -> auto& { return c.meanfield.record_every; }, 1,
                          1000000000));

    f.push_back(real_field("lindblad.t_end",
                           [](auto& c) -> auto& { return c.lindblad.t_end; }, 0.0,
                           kInf, true));
    f.push_back(real_field("lindblad.dt", [](auto& c) -> auto& { return c.lindblad.dt; },
                           0.0, kInf, true));
    f.push_back(int_field("lindblad.record_every",
                          [](auto& c) -> auto& { return c.lindblad.record_every; }, 1,
                          1000000000));
    f.push_back(string_field("lindblad.initial",
                             [](auto& c) -> auto& { return c.lindblad.initial; },
                             {"pattern", "planted", "mixed", "superposition"}));
    f.push_back(real_field("lindblad.m0", [](auto& c) -> auto& { return c.lindblad.m0; },
                           -1.0, 1.0));
    f.push_back(string_field("lindblad.dump",
                             [](auto& c) -> auto& { return c.lindblad.dump; }));
    f.push_back(string_field("lindblad.dump_format",
                             [](auto& c) -> auto& { return c.lindblad.dump_format; },
                             {"text", "binary"}));

    f.push_back({"sweep.ics",
                 [](ExperimentConfig& c, std::string_view v) {
                   std::vector<IcFamily> out;
                   for (auto item : split_list(v)) out.push_back(to_family(item));
                   if (out.empty()) throw BadValue("at least one initial-condition family needed");
                   c.sweep.ics = std::move(out);
                 },
                 [](const ExperimentConfig& c) {
                   std::string s;
                   for (std::size_t k = 0; k < c.sweep.ics.size(); ++k) {
                     if (k) s += ",";
                     s += to_string(c.sweep.ics[k]);
                   }
                   return s;
                 }});
    f.push_back(real_field("sweep.t_end", [](auto& c) -> auto& { return c.sweep.t_end; },
                           0.0, kInf, true));
    f.push_back(real_field("sweep.window_lo",
                           [](auto& c) -> auto& { return c.sweep.window_lo; }, 0.0,
                           kInf));
    f.push_back(real_field("sweep.window_hi",
                           [](auto& c) -> auto& { return c.sweep.window_hi; }, 0.0,
                           kInf, true));
    f.push_back(int_field("sweep.window_n", [](auto& c) -> auto& { return c.sweep.window_n; },
                          2, 100000000));
    f.push_back(real_field("sweep.sigma_threshold",
                           [](auto& c) -> auto& { return c.sweep.sigma_threshold; },
                           0.0, kInf, true));
    f.push_back(real_field("sweep.retrieval_threshold",
                           [](auto& c) -> auto& { return c.sweep.retrieval_threshold; },
                           0.0, 1.0, true));
    f.push_back(real_field(
        "sweep.paramagnetic_threshold",
        [](auto& c) -> auto& { return c.sweep.paramagnetic_threshold; }, 0.0, kInf,
        true));
    f.push_back(real_field("sweep.distinct_threshold",
                           [](auto& c) -> auto& { return c.sweep.distinct_threshold; },
                           0.0, kInf, true));
    f.push_back(real_field("sweep.early_stop_time",
                           [](auto& c) -> auto& { return c.sweep.early_stop_time; },
                           0.0, kInf));
    f.push_back(real_field(
        "sweep.early_stop_residual",
        [](auto& c) -> auto& { return c.sweep.early_stop_residual; }, 0.0, kInf));

    f.push_back({"hysteresis.ics",
                 [](ExperimentConfig& c, std::string_view v) {
                   const auto items = split_list(v);
                   if (items.size() != 2) throw BadValue("expected two comma-separated families");
                   c.hysteresis.first = to_family(items[0]);
                   c.hysteresis.second = to_family(items[1]);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(to_string(c.hysteresis.first)) + "," +
                          std::string(to_string(c.hysteresis.second));
                 }});
    f.push_back(real_field("hysteresis.t_end",
                           [](auto& c) -> auto& { return c.hysteresis.t_end; }, 0.0,
                           kInf, true));

    f.push_back(int_field("orbit.mu", [](auto& c) -> auto& { return c.orbit.mu; }, 1, 64));
    f.push_back(real_field("orbit.t_end", [](auto& c) -> auto& { return c.orbit.t_end; },
                           0.0, kInf, true));
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void apply(ExperimentConfig& c, std::string_view key, std::string_view value, int line) {
  const Field* field = find_field(key);
  if (!field) throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  try {
    field->set(c, value);
  } catch (const BadValue& e) {
    throw ConfigError(line, std::string(key) + ": " + e.what());
  }
}

void check_consistency(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(0, what); };
  if (c.grid.t_hi < c.grid.t_lo) fail("grid.t_hi must not be below grid.t_lo");
  if (c.grid.lambda_hi < c.grid.lambda_lo) fail("grid.lambda_hi must not be below grid.lambda_lo");
  if (!(c.sweep.window_hi > c.sweep.window_lo)) fail("sweep.window_hi must exceed sweep.window_lo");
  if (c.sweep.window_hi > c.sweep.t_end) fail("sweep.window_hi must not exceed sweep.t_end");
  if (c.orbit.mu > c.p) fail("orbit.mu must not exceed p");
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kMc: return "mc";
    case Mode::kClassicalExact: return "classical-exact";
    case Mode::kMeanfield: return "meanfield";
    case Mode::kLindblad: return "lindblad";
    case Mode::kSweep: return "sweep";
    case Mode::kHysteresis: return "hysteresis";
    case Mode::kHopf: return "hopf";
    case Mode::kLcMap: return "lc-map";
    case Mode::kOrbit: return "orbit";
  }
  return "unknown";
}

const std::vector<Mode>& all_modes() {
  static const std::vector<Mode> modes{Mode::kMc,    Mode::kClassicalExact, Mode::kMeanfield,
                                       Mode::kLindblad, Mode::kSweep,       Mode::kHysteresis,
                                       Mode::kHopf,  Mode::kLcMap,          Mode::kOrbit};
  return modes;
}

Mode parse_mode(std::string_view name) {
  for (Mode m : all_modes()) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown mode '" + std::string(name) + "'");
}

ModelParams ExperimentConfig::model_params() const {
  ModelParams params = ModelParams::at_temperature(temperature, lambda, p, gamma, q);
  params.validate();
  return params;
}

SweepSpec ExperimentConfig::sweep_spec() const {
  SweepSpec spec;
  spec.t_lo = grid.t_lo;
  spec.t_hi = grid.t_hi;
  spec.t_n = grid.t_n;
  spec.lambda_lo = grid.lambda_lo;
  spec.lambda_hi = grid.lambda_hi;
  spec.lambda_n = grid.lambda_n;
  spec.ics = sweep.ics;
  spec.p = p;
  spec.gamma = gamma;
  spec.thresholds = {sweep.paramagnetic_threshold, sweep.retrieval_threshold,
                     sweep.sigma_threshold, sweep.distinct_threshold};
  spec.run.dt = meanfield.dt;
  spec.run.t_end = sweep.t_end;
  spec.run.window = {sweep.window_lo, sweep.window_hi, sweep.window_n};
  spec.run.early_stop_time = sweep.early_stop_time;
  spec.run.early_stop_residual = sweep.early_stop_residual;
  spec.seed = seed;
  spec.threads = static_cast<unsigned>(threads);
  return spec;
}

ExperimentConfig parse_config(std::string_view text) { return parse_config(text, std::nullopt); }

ExperimentConfig parse_config(std::string_view text, std::optional<Mode> expected) {
  ExperimentConfig config;
  if (expected) config.mode = *expected;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos
                                                                           : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    // A '#' starts a comment at the beginning of a line or after whitespace.
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '#' && (k == 0 || line[k - 1] == ' ' || line[k - 1] == '\t')) {
        line = line.substr(0, k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (seen.count(key)) throw ConfigError(line_no, "key '" + std::string(key) + "' repeated");
    apply(config, key, value, line_no);
    if (key == "mode" && expected && config.mode != *expected) {
      throw ConfigError(line_no, "mode '" + std::string(value) + "' conflicts with requested mode '" +
                                     std::string(to_string(*expected)) + "'");
    }
    seen.emplace(key);
  }
  if (!expected && !seen.count(std::string_view("mode"))) {
    throw ConfigError(0, "required key 'mode' missing");
  }
  check_consistency(config);
  return config;
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(0, "override '" + std::string(assignment) + "' is not key=value");
  }
  apply(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), 0);
  check_consistency(config);
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace qpotts
