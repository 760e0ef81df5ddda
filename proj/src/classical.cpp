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

#include "qpotts/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpotts/parallel.hpp"

namespace qpotts {
namespace {

void check_site(int site, const PatternSet& patterns) {
  if (site < 0 || site >= patterns.n_sites()) {
    throw ParameterError("site index " + std::to_string(site) + " out of range");
  }
}

// Heat-bath draw over q candidates with energies h, at inverse temperature
// beta. `weights` is scratch of size q.
int heat_bath_draw(const std::vector<double>& h, double beta, std::vector<double>& weights,
                   Rng& rng) {
  const int q = static_cast<int>(h.size());
  const double low = *std::min_element(h.begin(), h.end());
  double z = 0.0;
  for (int k = 0; k < q; ++k) {
    weights[k] = std::exp(-beta * (h[k] - low));
    z += weights[k];
  }
  double r = rng.uniform01() * z;
  for (int k = 0; k < q - 1; ++k) {
    r -= weights[k];
    if (r < 0.0) return k;
  }
  return q - 1;
}

}  // namespace

std::vector<double> potential(int site, const SpinConfig& config, const PatternSet& patterns) {
  check_compatible(config, patterns);
  check_site(site, patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  std::vector<double> h(q, 0.0);
  for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
    double rest = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != site) rest += potts_u(patterns.exponent(j, mu), config[j], q);
    }
    for (int k = 0; k < q; ++k) h[k] -= potts_u(patterns.exponent(site, mu), k, q) * rest / n;
  }
  return h;
}

void MCSettings::validate() const {
  if (burn_in < 0 || n_sweeps <= burn_in) {
    throw ParameterError("MC settings need n_sweeps > burn_in >= 0");
  }
}

int mc_step(SpinConfig& config, const PatternSet& patterns, const ModelParams& params, Rng& rng) {
  const int site = rng.uniform_int(patterns.n_sites());
  const std::vector<double> h = potential(site, config, patterns);
  std::vector<double> weights(h.size());
  config.set(site, heat_bath_draw(h, params.beta, weights, rng));
  return site;
}

void mc_sweep(SpinConfig& config, const PatternSet& patterns, const ModelParams& params, Rng& rng) {
  for (int n = 0; n < patterns.n_sites(); ++n) mc_step(config, patterns, params, rng);
}

HeatBathChain::HeatBathChain(const PatternSet& patterns, const ModelParams& params,
                             SpinConfig initial)
    : patterns_(patterns), beta_(params.beta), config_(std::move(initial)),
      sums_(patterns.n_patterns(), 0.0), weights_(patterns.q()), h_(patterns.q()) {
  check_compatible(config_, patterns_);
  const int q = patterns_.q();
  for (int mu = 0; mu < patterns_.n_patterns(); ++mu) {
    for (int i = 0; i < patterns_.n_sites(); ++i) {
      sums_[mu] += potts_u(patterns_.exponent(i, mu), config_[i], q);
    }
  }
}

int HeatBathChain::step(Rng& rng) {
  const int n = patterns_.n_sites();
  const int q = patterns_.q();
  const int p = patterns_.n_patterns();
  const int site = rng.uniform_int(n);
  const int old = config_[site];
  const auto xi = patterns_.site(site);
  std::fill(h_.begin(), h_.end(), 0.0);
  for (int mu = 0; mu < p; ++mu) {
    const double rest = sums_[mu] - potts_u(xi[mu], old, q);
    for (int k = 0; k < q; ++k) h_[k] -= potts_u(xi[mu], k, q) * rest / n;
  }
  const int next = heat_bath_draw(h_, beta_, weights_, rng);
  if (next != old) {
    for (int mu = 0; mu < p; ++mu) {
      sums_[mu] += potts_u(xi[mu], next, q) - potts_u(xi[mu], old, q);
    }
    config_.set(site, next);
  }
  return site;
}

void HeatBathChain::sweep(Rng& rng) {
  for (int n = 0; n < patterns_.n_sites(); ++n) step(rng);
}

std::vector<double> HeatBathChain::overlap() const {
  const double norm = static_cast<double>(patterns_.n_sites()) * (patterns_.q() - 1);
  std::vector<double> m(sums_.size());
  for (std::size_t mu = 0; mu < m.size(); ++mu) m[mu] = sums_[mu] / norm;
  return m;
}

SpinConfig planted_config(const PatternSet& patterns, int mu, double m0, Rng& rng) {
  const int q = patterns.q();
  const double lo = -1.0 / (q - 1);
  if (!(m0 >= lo && m0 <= 1.0)) {
    throw ParameterError("planted overlap must lie in [-1/(q-1), 1]");
  }
  if (mu < 0 || mu >= patterns.n_patterns()) throw ParameterError("pattern index out of range");
  const double aligned = (m0 * (q - 1) + 1.0) / q;
  std::vector<int> sites(patterns.n_sites());
  for (int i = 0; i < patterns.n_sites(); ++i) {
    const int k = patterns.exponent(i, mu);
    if (rng.uniform01() < aligned) {
      sites[i] = k;
    } else {
      sites[i] = mod_q(k + 1 + rng.uniform_int(q - 1), q);
    }
  }
  return SpinConfig(std::move(sites));
}

std::vector<double> gibbs_distribution(const PatternSet& patterns, double beta) {
  const BasisIndexer basis(patterns.q(), patterns.n_sites());
  if (basis.dim() > kMaxMasterDim) {
    throw CapacityError("q^N = " + std::to_string(basis.dim()) + " exceeds enumeration cap " +
                        std::to_string(kMaxMasterDim));
  }
  std::vector<double> energy(basis.dim());
  double low = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    energy[idx] = classical_energy(basis.config_of(idx), patterns);
    low = std::min(low, energy[idx]);
  }
  double z = 0.0;
  for (double& e : energy) {
    e = std::exp(-beta * (e - low));
    z += e;
  }
  for (double& e : energy) e /= z;
  return energy;
}

ClassicalMasterEquation::ClassicalMasterEquation(const PatternSet& patterns,
                                                 const ModelParams& params)
    : basis_(patterns.q(), patterns.n_sites()) {
  params.validate();
  if (basis_.dim() > kMaxMasterDim) {
    throw CapacityError("master equation dimension q^N = " + std::to_string(basis_.dim()) +
                        " exceeds cap " + std::to_string(kMaxMasterDim));
  }
  const int n = patterns.n_sites();
  const int q = patterns.q();
  const int p = patterns.n_patterns();
  moves_per_state_ = 2 * n;
  moves_.resize(basis_.dim() * moves_per_state_);

  std::vector<double> sums(p);
  std::vector<double> h(q);
  std::vector<double> label_exp(2 * q);
  for (std::size_t idx = 0; idx < basis_.dim(); ++idx) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int mu = 0; mu < p; ++mu) {
      for (int j = 0; j < n; ++j) sums[mu] += potts_u(patterns.exponent(j, mu), basis_.digit(idx, j), q);
    }
    for (int i = 0; i < n; ++i) {
      const int level = basis_.digit(idx, i);
      std::fill(h.begin(), h.end(), 0.0);
      for (int mu = 0; mu < p; ++mu) {
        const int xi = patterns.exponent(i, mu);
        const double rest = sums[mu] - potts_u(xi, level, q);
        for (int k = 0; k < q; ++k) h[k] -= potts_u(xi, k, q) * rest / n;
      }
      // Label (alpha, s): target alpha-1, source alpha-1+s.
      double top = -std::numeric_limits<double>::infinity();
      for (int alpha = 1; alpha <= q; ++alpha) {
        for (int si = 0; si < 2; ++si) {
          const int s = si == 0 ? 1 : -1;
          const int tgt = alpha - 1;
          const int src = mod_q(alpha - 1 + s, q);
          const double e = -params.beta * (h[tgt] - h[src]) / 2.0;
          label_exp[(alpha - 1) * 2 + si] = e;
          top = std::max(top, e);
        }
      }
      double z = 0.0;
      for (double e : label_exp) z += std::exp(e - top);
      for (int si = 0; si < 2; ++si) {
        const int s = si == 0 ? 1 : -1;
        const int tgt = mod_q(level - s, q);
        const int alpha = tgt + 1;
        Move& move = moves_[idx * moves_per_state_ + 2 * i + si];
        move.target = basis_.moved(idx, i, level, tgt);
        move.rate = params.gamma * std::exp(label_exp[(alpha - 1) * 2 + si] - top) / z;
      }
    }
  }
}

double ClassicalMasterEquation::rate(std::size_t index, int site, int target) const {
  if (index >= dim() || site < 0 || site >= basis_.n_sites()) {
    throw ParameterError("master-equation rate query out of range");
  }
  const int level = basis_.digit(index, site);
  if (target == level) return 0.0;
  const std::size_t dest = basis_.moved(index, site, level, target);
  double total = 0.0;
  for (int si = 0; si < 2; ++si) {
    const Move& move = moves_[index * moves_per_state_ + 2 * site + si];
    if (move.target == dest) total += move.rate;
  }
  return total;
}

void ClassicalMasterEquation::derivative(const std::vector<double>& p,
                                         std::vector<double>& dp) const {
  if (p.size() != dim()) throw ParameterError("probability vector has wrong dimension");
  dp.assign(dim(), 0.0);
  for (std::size_t idx = 0; idx < dim(); ++idx) {
    const double weight = p[idx];
    if (weight == 0.0) continue;
    const Move* moves = &moves_[idx * moves_per_state_];
    for (int k = 0; k < moves_per_state_; ++k) {
      const double flow = moves[k].rate * weight;
      dp[idx] -= flow;
      dp[moves[k].target] += flow;
    }
  }
}

std::vector<double> ClassicalMasterEquation::evolve(const std::vector<double>& p0, double t_end,
                                                    double dt) const {
  if (p0.size() != dim()) throw ParameterError("probability vector has wrong dimension");
  if (!(t_end >= 0.0) || !(dt > 0.0)) throw ParameterError("need t_end >= 0 and dt > 0");
  std::vector<double> p = p0;
  if (t_end == 0.0) return p;
  const long steps = std::max(1L, std::lround(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  const std::size_t d = dim();
  std::vector<double> k1, k2, k3, k4, tmp(d);
  for (long n = 0; n < steps; ++n) {
    derivative(p, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    derivative(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    derivative(tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = p[i] + h * k3[i];
    derivative(tmp, k4);
    for (std::size_t i = 0; i < d; ++i) {
      p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return p;
}

std::vector<OverlapPoint> equilibrium_overlap_curve(const PatternSet& patterns,
                                                    const std::vector<double>& temperatures,
                                                    const MCSettings& settings, double m0) {
  settings.validate();
  std::vector<OverlapPoint> out(temperatures.size());
  parallel_for(temperatures.size(), [&](std::size_t k) {
    const ModelParams params = ModelParams::at_temperature(temperatures[k], 0.0,
                                                           patterns.n_patterns(), 1.0,
                                                           patterns.q());
    Rng rng(mix_seed(settings.rng_seed, {k}));
    HeatBathChain chain(patterns, params, planted_config(patterns, 0, m0, rng));
    double acc = 0.0;
    for (long sweep = 0; sweep < settings.n_sweeps; ++sweep) {
      chain.sweep(rng);
      if (sweep >= settings.burn_in) acc += chain.overlap()[0];
    }
    out[k] = {temperatures[k], acc / static_cast<double>(settings.n_sweeps - settings.burn_in)};
  });
  return out;
}

}  // namespace qpotts
