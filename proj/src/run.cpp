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

#include "qpotts/run.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "qpotts/classical.hpp"
#include "qpotts/csv.hpp"
#include "qpotts/error.hpp"
#include "qpotts/lindblad.hpp"
#include "qpotts/meanfield.hpp"
#include "qpotts/phase.hpp"

namespace qpotts {

std::string_view version() { return QPOTTS_VERSION_STRING; }

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::kConfig:
      case ErrorCode::kParameter:
      case ErrorCode::kUnsupportedModel: return kExitConfig;
      case ErrorCode::kNumeric:
      case ErrorCode::kConvergence: return kExitNumeric;
      case ErrorCode::kCapacity: return kExitCapacity;
      case ErrorCode::kIo: return kExitOther;
    }
  }
  return kExitOther;
}

namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

/// Collects output files; committed files are deleted again if the run fails.
class Outputs {
 public:
  explicit Outputs(const ExperimentConfig& config) : config_(config) {}

  ~Outputs() {
    if (done_) return;
    for (const auto& path : committed_) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }

  /// Opens the CSV at the configured output path with metadata written.
  std::unique_ptr<AtomicFile> open_csv(CsvWriter*& writer_out) {
    auto file = std::make_unique<AtomicFile>(config_.output);
    writer_ = std::make_unique<CsvWriter>(file->stream());
    writer_->comment("qpotts " + std::string(version()));
    writer_->comment("mode = " + std::string(to_string(config_.mode)));
    writer_->comment("seed = " + std::to_string(config_.seed));
    writer_->config_block(serialize_config(config_));
    writer_out = writer_.get();
    return file;
  }

  void commit(AtomicFile& file) {
    file.commit();
    committed_.push_back(file.path().string());
  }

  void write_json(const json& body) {
    if (config_.json.empty()) return;
    AtomicFile file(config_.json);
    json doc = body;
    doc["mode"] = std::string(to_string(config_.mode));
    doc["version"] = std::string(version());
    doc["seed"] = config_.seed;
    file.stream() << doc.dump(2) << '\n';
    commit(file);
  }

  void finish() { done_ = true; }
  const std::vector<std::string>& files() const { return committed_; }

 private:
  const ExperimentConfig& config_;
  std::unique_ptr<CsvWriter> writer_;
  std::vector<std::string> committed_;
  bool done_ = false;
};

std::vector<std::string> trajectory_columns(int p, bool coherences) {
  std::vector<std::string> cols{"t"};
  std::vector<std::string> names{"m"};
  if (coherences) names = {"m", "x", "xbar", "y", "ybar"};
  for (const auto& n : names) {
    for (int mu = 1; mu <= p; ++mu) cols.push_back(n + "_" + std::to_string(mu));
  }
  return cols;
}

std::vector<double> grid_temperatures(const GridConfig& g) {
  std::vector<double> out(g.t_n);
  for (int k = 0; k < g.t_n; ++k) {
    out[k] = g.t_n == 1 ? g.t_lo : g.t_lo + (g.t_hi - g.t_lo) * k / (g.t_n - 1);
  }
  return out;
}

std::string run_mc(const ExperimentConfig& c, Outputs& out) {
  const ModelParams params = c.model_params();
  const auto patterns = PatternSet::generate(c.n_sites, params.p, params.q, c.seed);
  const auto temps = c.mc.temperatures.empty() ? std::vector<double>{c.temperature}
                                               : c.mc.temperatures;
  MCSettings settings;
  settings.n_sweeps = c.mc.sweeps;
  settings.burn_in = c.mc.burn_in;
  settings.rng_seed = mix_seed(c.seed, {1});
  const auto curve = equilibrium_overlap_curve(patterns, temps, settings, c.mc.m0);

  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  csv->header({"T", "m_stat"});
  json rows = json::array();
  for (const auto& pt : curve) {
    csv->row(std::vector<double>{pt.temperature, pt.m_stat});
    rows.push_back({{"T", pt.temperature}, {"m_stat", pt.m_stat}});
  }
  out.commit(*file);
  out.write_json({{"points", rows}});
  return "mc: N=" + std::to_string(c.n_sites) + ", " + std::to_string(curve.size()) +
         " temperatures, m_stat(T=" + fmt(curve.front().temperature) +
         ") = " + fmt(curve.front().m_stat);
}

std::string run_classical_exact(const ExperimentConfig& c, Outputs& out) {
  const ModelParams params = c.model_params();
  const auto patterns = PatternSet::generate(c.n_sites, params.p, params.q, c.seed);
  const ClassicalMasterEquation master(patterns, params);
  const BasisIndexer& basis = master.basis();

  // Product distribution with overlap m0 planted on pattern 1.
  const double f = (c.classical.m0 * (params.q - 1) + 1.0) / params.q;
  std::vector<double> prob(basis.dim());
  std::vector<std::vector<double>> overlaps(basis.dim());
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    const SpinConfig config = basis.config_of(idx);
    double w = 1.0;
    for (int i = 0; i < c.n_sites; ++i) {
      w *= config[i] == patterns.exponent(i, 0) ? f : (1.0 - f) / (params.q - 1);
    }
    prob[idx] = w;
    overlaps[idx] = overlap(config, patterns);
  }
  auto mean_overlap = [&](const std::vector<double>& pr) {
    std::vector<double> m(params.p, 0.0);
    for (std::size_t idx = 0; idx < pr.size(); ++idx) {
      for (int mu = 0; mu < params.p; ++mu) m[mu] += pr[idx] * overlaps[idx][mu];
    }
    return m;
  };

  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  csv->header(trajectory_columns(params.p, false));
  const double chunk = c.classical.dt * c.classical.record_every;
  double t = 0.0;
  std::vector<double> m = mean_overlap(prob);
  auto emit = [&] {
    std::vector<double> row{t};
    row.insert(row.end(), m.begin(), m.end());
    csv->row(row);
  };
  emit();
  while (t < c.classical.t_end - 1e-12) {
    const double h = std::min(chunk, c.classical.t_end - t);
    prob = master.evolve(prob, h, c.classical.dt);
    t += h;
    m = mean_overlap(prob);
    emit();
  }
  out.commit(*file);
  out.write_json({{"t_end", t}, {"m_final", m}});
  return "classical-exact: dim=" + std::to_string(basis.dim()) + ", m_1(t=" + fmt(t) +
         ") = " + fmt(m[0]);
}

std::string run_meanfield(const ExperimentConfig& c, Outputs& out) {
  const ModelParams params = c.model_params();
  const auto traj = integrate(CollectiveState::classical(std::vector<double>(params.p, c.meanfield.m0)),
                              params, c.meanfield.t_end, c.meanfield.dt, c.meanfield.record_every);
  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  csv->header(trajectory_columns(params.p, true));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    const auto s = traj.state(k);
    row.insert(row.end(), s.begin(), s.end());
    csv->row(row);
  }
  out.commit(*file);
  const auto last = traj.state(traj.size() - 1);
  std::vector<double> m_final(last.begin(), last.begin() + params.p);
  out.write_json({{"t_end", traj.times.back()}, {"m_final", m_final}});
  return "meanfield: T=" + fmt(c.temperature) + ", lambda=" + fmt(c.lambda) + ", m_1(t=" +
         fmt(traj.times.back()) + ") = " + fmt(m_final[0]);
}

std::string run_lindblad(const ExperimentConfig& c, Outputs& out) {
  const ModelParams params = c.model_params();
  const auto patterns = PatternSet::generate(c.n_sites, params.p, params.q, c.seed);
  const LindbladSolver solver(patterns, params);
  static const std::map<std::string, InitialState> kinds{
      {"pattern", InitialState::kPatternPure},
      {"planted", InitialState::kPlantedMixture},
      {"mixed", InitialState::kMaximallyMixed},
      {"superposition", InitialState::kUniformSuperposition}};
  const auto rho0 = initial_density_matrix(kinds.at(c.lindblad.initial), patterns, 0, c.lindblad.m0);
  LindbladOptions options;
  options.t_end = c.lindblad.t_end;
  options.dt = c.lindblad.dt;
  options.record_every = c.lindblad.record_every;
  options.record_coherences = params.q == kMeanFieldQ;
  const auto record = solver.evolve(rho0, options);

  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  const bool coh = options.record_coherences;
  csv->comment("max_trace_drift = " + format_number(record.max_trace_drift));
  csv->comment("min_eigenvalue = " + format_number(record.min_eigenvalue));
  csv->header(trajectory_columns(params.p, coh));
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    std::vector<double> row{record.times[k]};
    row.insert(row.end(), record.overlaps[k].begin(), record.overlaps[k].end());
    if (coh) {
      const auto& co = record.coherences[k];
      for (const auto* v : {&co.x, &co.xbar, &co.y, &co.ybar}) row.insert(row.end(), v->begin(), v->end());
    }
    csv->row(row);
  }
  out.commit(*file);

  if (!c.lindblad.dump.empty()) {
    const bool binary = c.lindblad.dump_format == "binary";
    AtomicFile dump(c.lindblad.dump, binary);
    dump_matrix(record.final_state, dump.stream(), binary);
    out.commit(dump);
  }
  out.write_json({{"t_end", record.times.back()},
                  {"m_final", record.overlaps.back()},
                  {"max_trace_drift", record.max_trace_drift},
                  {"min_eigenvalue", record.min_eigenvalue}});
  return "lindblad: dim=" + std::to_string(solver.dim()) + ", m_1(t=" + fmt(record.times.back()) +
         ") = " + fmt(record.overlaps.back()[0]);
}

std::string run_sweep(const ExperimentConfig& c, Outputs& out) {
  const SweepSpec spec = c.sweep_spec();
  const auto points = sweep(spec);

  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  for (const auto& pt : points) {
    for (const auto& o : pt.outcomes) {
      if (o.blow_up_time) {
        csv->comment("blow-up at T = " + format_number(pt.temperature) + ", lambda = " +
                     format_number(pt.lambda) + ", ic = " + std::string(to_string(o.family)) +
                     ", t = " + format_number(*o.blow_up_time));
      }
    }
  }
  std::vector<std::string> cols{"T", "lambda", "label"};
  for (IcFamily ic : spec.ics) {
    for (int mu = 1; mu <= spec.p; ++mu) {
      cols.push_back("m_final_" + std::string(to_string(ic)) + "_" + std::to_string(mu));
    }
  }
  for (int mu = 1; mu <= spec.p; ++mu) cols.push_back("sigma_m_" + std::to_string(mu));
  csv->header(cols);

  std::map<std::string, int> counts;
  for (PhaseLabel label : {PhaseLabel::kParamagnetic, PhaseLabel::kRetrieval,
                           PhaseLabel::kCoexistence, PhaseLabel::kLimitCycle}) {
    counts[std::string(to_string(label))] = 0;
  }
  // Lowest paramagnetic temperature per lambda column.
  std::vector<double> onset(spec.lambda_n, std::nan(""));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    std::vector<CsvField> row{pt.temperature, pt.lambda, std::string(to_string(pt.label))};
    for (const auto& o : pt.outcomes) {
      for (double m : o.m_final) row.emplace_back(m);
    }
    for (double s : pt.sigma) row.emplace_back(s);
    csv->row(row);
    ++counts[std::string(to_string(pt.label))];
    const std::size_t il = k % spec.lambda_n;
    if (pt.label == PhaseLabel::kParamagnetic && std::isnan(onset[il])) onset[il] = pt.temperature;
  }
  out.commit(*file);

  json boundary = json::array();
  for (int il = 0; il < spec.lambda_n; ++il) {
    json entry{{"lambda", spec.lambda(il)}};
    entry["paramagnetic_onset_T"] = std::isnan(onset[il]) ? json(nullptr) : json(onset[il]);
    boundary.push_back(entry);
  }
  out.write_json({{"phase_counts", counts}, {"boundary", boundary}});
  std::string summary = "sweep: " + std::to_string(points.size()) + " points";
  for (const auto& [name, n] : counts) summary += ", " + name + "=" + std::to_string(n);
  return summary;
}

std::string run_hysteresis(const ExperimentConfig& c, Outputs& out) {
  const auto temps = grid_temperatures(c.grid);
  const auto branches =
      hysteresis_scan(c.lambda, temps, c.p, {c.hysteresis.first, c.hysteresis.second}, c.seed,
                      c.hysteresis.t_end, c.meanfield.dt, c.gamma);
  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  const std::string a(to_string(branches.first_family));
  const std::string b(to_string(branches.second_family));
  csv->comment("m0_" + a + " = " + format_number(branches.first_m0));
  csv->comment("m0_" + b + " = " + format_number(branches.second_m0));
  csv->header({"T", "m_" + a, "m_" + b});
  for (std::size_t k = 0; k < temps.size(); ++k) {
    csv->row(std::vector<double>{temps[k], branches.first[k].m_stat, branches.second[k].m_stat});
  }
  out.commit(*file);
  const auto d1 = drop_temperature(branches.first);
  const auto d2 = drop_temperature(branches.second);
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  out.write_json({{"drop_T_" + a, opt(d1)}, {"drop_T_" + b, opt(d2)}});
  auto show = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("none"); };
  return "hysteresis: drop T (" + a + ") = " + show(d1) + ", drop T (" + b + ") = " + show(d2);
}

std::string run_hopf(const ExperimentConfig& c, Outputs& out) {
  const auto scan = hopf_scan(c.lambda, c.grid.t_lo, c.grid.t_hi, std::max(2, c.grid.t_n), c.p,
                              c.gamma);
  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  for (std::size_t k = 0; k < scan.crossings.size(); ++k) {
    csv->comment("crossing T = " + format_number(scan.crossings[k]) +
                 ", |Im zeta1| = " + format_number(scan.crossing_frequencies[k]));
  }
  csv->header({"T", "re_zeta1", "im_zeta1", "re_zeta2", "im_zeta2"});
  const double nan = std::nan("");
  for (const auto& row : scan.rows) {
    if (row.has_pair) {
      csv->row(std::vector<double>{row.temperature, row.zeta1.real(), row.zeta1.imag(),
                                   row.zeta2.real(), row.zeta2.imag()});
    } else {
      csv->row(std::vector<double>{row.temperature, nan, nan, nan, nan});
    }
  }
  out.commit(*file);
  out.write_json({{"crossings", scan.crossings}, {"frequencies", scan.crossing_frequencies}});
  std::string summary = "hopf: lambda=" + fmt(c.lambda) + ", " +
                        std::to_string(scan.crossings.size()) + " crossing(s)";
  if (!scan.crossings.empty()) summary += ", first at T = " + fmt(scan.crossings.front());
  return summary;
}

std::string run_lc_map(const ExperimentConfig& c, Outputs& out) {
  const SweepSpec spec = c.sweep_spec();
  const auto rows = limit_cycle_map(spec);
  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  std::vector<std::string> cols{"T", "lambda"};
  for (int mu = 1; mu <= spec.p; ++mu) cols.push_back("sigma_m_" + std::to_string(mu));
  csv->header(cols);
  int cycling = 0;
  for (const auto& r : rows) {
    std::vector<double> row{r.temperature, r.lambda};
    row.insert(row.end(), r.sigma.begin(), r.sigma.end());
    csv->row(row);
    bool any = false;
    for (double s : r.sigma) any = any || s >= spec.thresholds.sigma;
    cycling += any ? 1 : 0;
  }
  out.commit(*file);
  out.write_json({{"points", rows.size()}, {"cycling_points", cycling}});
  return "lc-map: " + std::to_string(rows.size()) + " points, " + std::to_string(cycling) +
         " with sigma_m above threshold";
}

std::string run_orbit(const ExperimentConfig& c, Outputs& out) {
  const auto orbit = orbit_section(c.temperature, c.lambda, c.p, c.orbit.mu - 1, c.orbit.t_end,
                                   c.meanfield.dt, c.gamma, c.sweep.sigma_threshold);
  CsvWriter* csv = nullptr;
  auto file = out.open_csv(csv);
  csv->comment("is_cycle = " + std::string(orbit.is_cycle ? "true" : "false"));
  csv->comment("closed = " + std::string(orbit.closed ? "true" : "false"));
  csv->comment("period = " + format_number(orbit.period));
  csv->comment("closure = " + format_number(orbit.closure));
  csv->comment("note = " + orbit.reason);
  const std::string mu = std::to_string(c.orbit.mu);
  csv->header({"y_" + mu, "m_" + mu});
  for (const auto& [y, m] : orbit.samples) csv->row(std::vector<double>{y, m});
  out.commit(*file);
  out.write_json({{"is_cycle", orbit.is_cycle},
                  {"closed", orbit.closed},
                  {"period", orbit.period},
                  {"closure", orbit.closure},
                  {"note", orbit.reason}});
  if (!orbit.is_cycle) return "orbit: not a cycle (" + orbit.reason + ")";
  return "orbit: period = " + fmt(orbit.period) + ", closure = " + fmt(orbit.closure) +
         (orbit.closed ? " (closed)" : " (not closed)");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  try {
    Outputs out(config);
    switch (config.mode) {
      case Mode::kMc: result.summary = run_mc(config, out); break;
      case Mode::kClassicalExact: result.summary = run_classical_exact(config, out); break;
      case Mode::kMeanfield: result.summary = run_meanfield(config, out); break;
      case Mode::kLindblad: result.summary = run_lindblad(config, out); break;
      case Mode::kSweep: result.summary = run_sweep(config, out); break;
      case Mode::kHysteresis: result.summary = run_hysteresis(config, out); break;
      case Mode::kHopf: result.summary = run_hopf(config, out); break;
      case Mode::kLcMap: result.summary = run_lc_map(config, out); break;
      case Mode::kOrbit: result.summary = run_orbit(config, out); break;
    }
    out.finish();
    result.files = out.files();
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    result.error = e.what();
    result.summary.clear();
  }
  return result;
}

}  // namespace qpotts
