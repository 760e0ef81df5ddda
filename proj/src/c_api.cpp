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

#include "qpotts/qpotts.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qpotts/config.hpp"
#include "qpotts/error.hpp"
#include "qpotts/meanfield.hpp"
#include "qpotts/model.hpp"
#include "qpotts/run.hpp"

struct qp_patterns {
  qpotts::PatternSet value;
};

struct qp_trajectory {
  qpotts::Trajectory value;
};

struct qp_config {
  qpotts::ExperimentConfig value;
};

namespace {

thread_local std::string g_last_error;

qp_status fail(qp_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

qp_status status_of(const qpotts::Error& e) {
  using qpotts::ErrorCode;
  switch (e.code()) {
    case ErrorCode::kParameter: return QP_ERR_PARAMETER;
    case ErrorCode::kConfig: return QP_ERR_CONFIG;
    case ErrorCode::kNumeric: return QP_ERR_NUMERIC;
    case ErrorCode::kCapacity: return QP_ERR_CAPACITY;
    case ErrorCode::kConvergence: return QP_ERR_CONVERGENCE;
    case ErrorCode::kUnsupportedModel: return QP_ERR_UNSUPPORTED;
    case ErrorCode::kIo: return QP_ERR_IO;
  }
  return QP_ERR_INTERNAL;
}

template <class Fn>
qp_status guarded(Fn&& fn) {
  try {
    fn();
    return QP_OK;
  } catch (const qpotts::Error& e) {
    return fail(status_of(e), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QP_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(QP_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define QP_REQUIRE(ptr) \
  if (!(ptr)) return fail(QP_ERR_NULL_ARGUMENT, "null argument: " #ptr)

}  // namespace

extern "C" {

const char* qp_version(void) { return QPOTTS_VERSION_STRING; }

const char* qp_last_error(void) { return g_last_error.c_str(); }

const char* qp_status_name(qp_status status) {
  switch (status) {
    case QP_OK: return "ok";
    case QP_ERR_PARAMETER: return "parameter error";
    case QP_ERR_CONFIG: return "config error";
    case QP_ERR_NUMERIC: return "numeric error";
    case QP_ERR_CAPACITY: return "capacity error";
    case QP_ERR_CONVERGENCE: return "convergence error";
    case QP_ERR_UNSUPPORTED: return "unsupported model";
    case QP_ERR_IO: return "i/o error";
    case QP_ERR_NULL_ARGUMENT: return "null argument";
    case QP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qp_string_free(char* s) { std::free(s); }

int qp_mode_count(void) { return static_cast<int>(qpotts::all_modes().size()); }

const char* qp_mode_name(int index) {
  const auto& modes = qpotts::all_modes();
  if (index < 0 || index >= static_cast<int>(modes.size())) return nullptr;
  return qpotts::to_string(modes[index]).data();
}

qp_status qp_patterns_generate(int n_sites, int n_patterns, int q, uint64_t seed,
                               qp_patterns** out) {
  QP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new qp_patterns{qpotts::PatternSet::generate(n_sites, n_patterns, q, seed)};
  });
}

void qp_patterns_free(qp_patterns* patterns) { delete patterns; }

qp_status qp_patterns_exponent(const qp_patterns* patterns, int site, int mu, int* out) {
  QP_REQUIRE(patterns);
  QP_REQUIRE(out);
  const auto& p = patterns->value;
  if (site < 0 || site >= p.n_sites() || mu < 0 || mu >= p.n_patterns()) {
    return fail(QP_ERR_PARAMETER, "site or pattern index out of range");
  }
  *out = p.exponent(site, mu);
  return QP_OK;
}

qp_status qp_classical_energy(const qp_patterns* patterns, const int* config, int n_sites,
                              double* out) {
  QP_REQUIRE(patterns);
  QP_REQUIRE(config);
  QP_REQUIRE(out);
  return guarded([&] {
    const qpotts::SpinConfig spins(std::vector<int>(config, config + n_sites));
    *out = qpotts::classical_energy(spins, patterns->value);
  });
}

qp_status qp_overlap(const qp_patterns* patterns, const int* config, int n_sites, double* out) {
  QP_REQUIRE(patterns);
  QP_REQUIRE(config);
  QP_REQUIRE(out);
  return guarded([&] {
    const qpotts::SpinConfig spins(std::vector<int>(config, config + n_sites));
    const auto m = qpotts::overlap(spins, patterns->value);
    std::copy(m.begin(), m.end(), out);
  });
}

qp_status qp_meanfield_rhs(double temperature, double lambda, int p, double gamma,
                           const double* state, double* out) {
  QP_REQUIRE(state);
  QP_REQUIRE(out);
  return guarded([&] {
    const auto params = qpotts::ModelParams::at_temperature(temperature, lambda, p, gamma);
    const qpotts::MeanFieldModel model(params);
    model.rhs(std::span<const double>(state, model.dim()), std::span<double>(out, model.dim()));
  });
}

qp_status qp_meanfield_integrate(double temperature, double lambda, int p, double gamma,
                                 const double* state0, double t_end, double dt, int record_every,
                                 qp_trajectory** out) {
  QP_REQUIRE(state0);
  QP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto params = qpotts::ModelParams::at_temperature(temperature, lambda, p, gamma);
    params.validate();
    const std::size_t d = static_cast<std::size_t>(5 * p);
    const qpotts::CollectiveState start(p, std::vector<double>(state0, state0 + d));
    *out = new qp_trajectory{qpotts::integrate(start, params, t_end, dt, record_every)};
  });
}

void qp_trajectory_free(qp_trajectory* traj) { delete traj; }

size_t qp_trajectory_size(const qp_trajectory* traj) { return traj ? traj->value.size() : 0; }

int qp_trajectory_width(const qp_trajectory* traj) { return traj ? 5 * traj->value.p : 0; }

qp_status qp_trajectory_row(const qp_trajectory* traj, size_t k, double* t, double* state) {
  QP_REQUIRE(traj);
  QP_REQUIRE(t);
  QP_REQUIRE(state);
  if (k >= traj->value.size()) return fail(QP_ERR_PARAMETER, "trajectory row out of range");
  *t = traj->value.times[k];
  const auto row = traj->value.state(k);
  std::copy(row.begin(), row.end(), state);
  return QP_OK;
}

qp_status qp_config_parse(const char* text, const char* mode, qp_config** out) {
  QP_REQUIRE(text);
  QP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::optional<qpotts::Mode> expected;
    if (mode) {
      try {
        expected = qpotts::parse_mode(mode);
      } catch (const qpotts::ParameterError& e) {
        throw qpotts::ConfigError(0, e.what());
      }
    }
    *out = new qp_config{qpotts::parse_config(text, expected)};
  });
}

void qp_config_free(qp_config* config) { delete config; }

qp_status qp_config_set(qp_config* config, const char* assignment) {
  QP_REQUIRE(config);
  QP_REQUIRE(assignment);
  return guarded([&] {
    // Work on a copy so a rejected override leaves the config untouched.
    auto updated = config->value;
    qpotts::apply_override(updated, assignment);
    config->value = std::move(updated);
  });
}

qp_status qp_config_serialize(const qp_config* config, char** out) {
  QP_REQUIRE(config);
  QP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = copy_string(qpotts::serialize_config(config->value)); });
}

qp_status qp_config_run(const qp_config* config, int* exit_code, char** summary) {
  QP_REQUIRE(config);
  QP_REQUIRE(exit_code);
  if (summary) *summary = nullptr;
  const auto result = qpotts::run_experiment(config->value);
  *exit_code = result.exit_code;
  qp_status status = QP_OK;
  switch (result.exit_code) {
    case qpotts::kExitOk: break;
    case qpotts::kExitConfig: status = QP_ERR_CONFIG; break;
    case qpotts::kExitNumeric: status = QP_ERR_NUMERIC; break;
    case qpotts::kExitCapacity: status = QP_ERR_CAPACITY; break;
    default: status = QP_ERR_INTERNAL; break;
  }
  if (status != QP_OK) g_last_error = result.error;
  if (summary) {
    const qp_status copied = guarded([&] {
      *summary = copy_string(status == QP_OK ? result.summary : result.error);
    });
    if (copied != QP_OK) return copied;
  }
  return status;
}

}  // extern "C"
