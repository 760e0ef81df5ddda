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

#include "qpotts/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpotts/random.hpp"

namespace qpotts {

ModelParams ModelParams::at_temperature(double temperature, double lambda, int p,
                                        double gamma, int q) {
  if (!(temperature > 0.0)) {
    throw ParameterError("temperature must be positive, got " + std::to_string(temperature));
  }
  ModelParams params;
  params.q = q;
  params.p = p;
  params.beta = std::isinf(temperature) ? 0.0 : 1.0 / temperature;
  params.lambda = lambda;
  params.gamma = gamma;
  params.validate();
  return params;
}

double ModelParams::temperature() const {
  return beta > 0.0 ? 1.0 / beta : std::numeric_limits<double>::infinity();
}

void ModelParams::validate() const {
  if (q < 2) throw ParameterError("q must be >= 2");
  if (p < 1) throw ParameterError("p must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be finite and > 0");
}

PatternSet::PatternSet(int n_sites, int n_patterns, int q, std::vector<int> entries,
                       std::uint64_t seed)
    : n_sites_(n_sites), n_patterns_(n_patterns), q_(q), seed_(seed),
      entries_(std::move(entries)) {
  if (n_sites < 1 || n_patterns < 1 || q < 2) {
    throw ParameterError("pattern set needs N >= 1, p >= 1, q >= 2");
  }
  if (entries_.size() != static_cast<std::size_t>(n_sites) * n_patterns) {
    throw ParameterError("pattern entries must have N*p elements");
  }
  for (int k : entries_) {
    if (k < 0 || k >= q) throw ParameterError("pattern exponent out of range");
  }
}

PatternSet PatternSet::generate(int n_sites, int n_patterns, int q, std::uint64_t seed) {
  if (n_sites < 1 || n_patterns < 1 || q < 2) {
    throw ParameterError("pattern_generate needs N >= 1, p >= 1, q >= 2 (got N=" +
                         std::to_string(n_sites) + ", p=" + std::to_string(n_patterns) +
                         ", q=" + std::to_string(q) + ")");
  }
  Rng rng(seed);
  std::vector<int> entries(static_cast<std::size_t>(n_sites) * n_patterns);
  for (int& k : entries) k = rng.uniform_int(q);
  return PatternSet(n_sites, n_patterns, q, std::move(entries), seed);
}

std::vector<int> PatternSet::pattern(int mu) const {
  std::vector<int> out(n_sites_);
  for (int i = 0; i < n_sites_; ++i) out[i] = exponent(i, mu);
  return out;
}

PatternSet PatternSet::rotated(int mu, int shift) const {
  std::vector<int> entries = entries_;
  for (int i = 0; i < n_sites_; ++i) {
    auto& k = entries[index(i, mu)];
    k = mod_q(k + shift, q_);
  }
  return PatternSet(n_sites_, n_patterns_, q_, std::move(entries), seed_);
}

SpinConfig SpinConfig::from_pattern(const PatternSet& patterns, int mu) {
  return SpinConfig(patterns.pattern(mu));
}

void check_compatible(const SpinConfig& config, const PatternSet& patterns) {
  if (config.size() != patterns.n_sites()) {
    throw ParameterError("configuration has " + std::to_string(config.size()) +
                         " sites, patterns have " + std::to_string(patterns.n_sites()));
  }
  for (int k : config.sites()) {
    if (k < 0 || k >= patterns.q()) throw ParameterError("spin label out of range");
  }
}

double classical_energy(const SpinConfig& config, const PatternSet& patterns) {
  check_compatible(config, patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  // sum_a u_{xi,a} u_{s,a} = q u_{xi,s}, so the double sum over levels
  // collapses to -(1/2N) sum_mu sum_{i != j} u_i^mu u_j^mu.
  double energy = 0.0;
  for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
    double total = 0.0;
    double squares = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = potts_u(patterns.exponent(i, mu), config[i], q);
      total += u;
      squares += u * u;
    }
    energy -= (total * total - squares) / (2.0 * n);
  }
  return energy;
}

std::vector<double> overlap(const SpinConfig& config, const PatternSet& patterns) {
  check_compatible(config, patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  std::vector<double> m(patterns.n_patterns(), 0.0);
  for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
    for (int i = 0; i < n; ++i) m[mu] += potts_u(patterns.exponent(i, mu), config[i], q);
    m[mu] /= static_cast<double>(n) * (q - 1);
  }
  return m;
}

BasisIndexer::BasisIndexer(int q, int n_sites) : q_(q), n_sites_(n_sites), dim_(1) {
  if (q < 2 || n_sites < 1) throw ParameterError("basis needs q >= 2 and N >= 1");
  strides_.resize(n_sites);
  for (int i = 0; i < n_sites; ++i) {
    strides_[i] = dim_;
    if (dim_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(q)) {
      throw CapacityError("q^N overflows the index type");
    }
    dim_ *= static_cast<std::size_t>(q);
  }
}

std::size_t BasisIndexer::index_of(const SpinConfig& config) const {
  std::size_t idx = 0;
  for (int i = 0; i < n_sites_; ++i) idx += static_cast<std::size_t>(config[i]) * strides_[i];
  return idx;
}

SpinConfig BasisIndexer::config_of(std::size_t index) const {
  std::vector<int> sites(n_sites_);
  for (int i = 0; i < n_sites_; ++i) sites[i] = digit(index, i);
  return SpinConfig(std::move(sites));
}

double meanfield_delta_energy(int alpha, int s, std::span<const double> m,
                              std::span<const int> pattern_exponents) {
  if (alpha < 1 || alpha > kMeanFieldQ || (s != 1 && s != -1)) {
    throw ParameterError("rate label needs alpha in 1..3 and s = +-1");
  }
  if (m.size() != pattern_exponents.size()) {
    throw ParameterError("overlap and pattern-exponent vectors differ in length");
  }
  const int target = jump_target(alpha);
  const int source = jump_source(alpha, s);
  double acc = 0.0;
  for (std::size_t mu = 0; mu < m.size(); ++mu) {
    const int k = pattern_exponents[mu];
    if (k < 0 || k >= kMeanFieldQ) {
      throw UnsupportedModelError("mean-field delta energy is defined for q = 3 labels only");
    }
    acc += m[mu] * ((k == target ? 1.0 : 0.0) - (k == source ? 1.0 : 0.0));
  }
  return 3.0 * acc;
}

double RateVector::sum() const noexcept {
  double acc = 0.0;
  for (double v : values_) acc += v;
  return acc;
}

RateVector meanfield_rates(std::span<const double> m, std::span<const int> pattern_exponents,
                           double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
  for (double v : m) {
    if (!std::isfinite(v)) throw NumericError("non-finite overlap passed to meanfield_rates");
  }
  std::array<double, 6> exponent{};
  double top = -std::numeric_limits<double>::infinity();
  for (int alpha = 1; alpha <= kMeanFieldQ; ++alpha) {
    for (int s : {1, -1}) {
      const double e = beta * meanfield_delta_energy(alpha, s, m, pattern_exponents);
      exponent[RateVector::index(alpha, s)] = e;
      top = std::max(top, e);
    }
  }
  RateVector rates;
  double z = 0.0;
  for (int alpha = 1; alpha <= kMeanFieldQ; ++alpha) {
    for (int s : {1, -1}) {
      const double w = std::exp(exponent[RateVector::index(alpha, s)] - top);
      rates(alpha, s) = w;
      z += w;
    }
  }
  for (int alpha = 1; alpha <= kMeanFieldQ; ++alpha) {
    for (int s : {1, -1}) rates(alpha, s) /= z;
  }
  return rates;
}

double damping_coefficient(const RateVector& rates, int s, int alpha) {
  // Labels are cyclic: alpha runs over 1..3.
  auto wrap = [](int a) { return mod_q(a - 1, kMeanFieldQ) + 1; };
  double h = 0.0;
  for (int sp : {1, -1}) {
    h += rates(wrap(alpha - sp), sp) + rates(wrap(alpha - sp + s), sp);
  }
  return h;
}

}  // namespace qpotts
