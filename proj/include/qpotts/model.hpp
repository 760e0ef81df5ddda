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

// Shared model definitions for the q-state Potts-Hopfield network: stored
// patterns, spin configurations, the classical energy and overlaps, and the
// q = 3 mean-field transition rates.
//
// Labels are integer exponents k in {0, ..., q-1}; the complex spin value is
// omega^k with omega = exp(2 pi i / q). Complex values are never stored.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qpotts/error.hpp"

namespace qpotts {

/// Mean-field formulas are closed only for three-level spins.
inline constexpr int kMeanFieldQ = 3;

/// Largest p for which pattern-disorder averages are enumerated (3^p terms).
inline constexpr int kMaxDisorderPatterns = 6;

struct ModelParams {
  int q = 3;
  int p = 1;
  double beta = 1.0;    ///< inverse temperature 1/T
  double lambda = 0.0;  ///< coherent drive strength
  double gamma = 1.0;   ///< dissipation rate

  static ModelParams at_temperature(double temperature, double lambda = 0.0,
                                    int p = 1, double gamma = 1.0, int q = 3);
  double temperature() const;
  /// Throws ParameterError on q < 2, p < 1, beta < 0, lambda < 0, gamma <= 0.
  void validate() const;
};

/// u_{a,b} = q delta_{a,b} - 1 on exponent labels.
constexpr double potts_u(int a, int b, int q) noexcept {
  return a == b ? static_cast<double>(q - 1) : -1.0;
}

constexpr int mod_q(int a, int q) noexcept { return ((a % q) + q) % q; }

/// p stored patterns over N sites, stored site-major as exponents.
class PatternSet {
 public:
  PatternSet(int n_sites, int n_patterns, int q, std::vector<int> entries,
             std::uint64_t seed = 0);

  /// Entries i.i.d. uniform over {0, ..., q-1}; deterministic in the seed.
  static PatternSet generate(int n_sites, int n_patterns, int q, std::uint64_t seed);

  int n_sites() const noexcept { return n_sites_; }
  int n_patterns() const noexcept { return n_patterns_; }
  int q() const noexcept { return q_; }
  std::uint64_t seed() const noexcept { return seed_; }

  int exponent(int site, int mu) const { return entries_[index(site, mu)]; }
  /// Exponents k_i^1..k_i^p of one site.
  std::span<const int> site(int i) const {
    return {entries_.data() + static_cast<std::size_t>(i) * n_patterns_,
            static_cast<std::size_t>(n_patterns_)};
  }
  std::vector<int> pattern(int mu) const;
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// Adds `shift` to every exponent of pattern mu (global Z_q relabelling).
  PatternSet rotated(int mu, int shift) const;

  bool operator==(const PatternSet&) const = default;

 private:
  std::size_t index(int site, int mu) const {
    return static_cast<std::size_t>(site) * n_patterns_ + mu;
  }

  int n_sites_;
  int n_patterns_;
  int q_;
  std::uint64_t seed_;
  std::vector<int> entries_;
};

/// Classical network state: one exponent per site.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> sites) : sites_(std::move(sites)) {}

  int size() const noexcept { return static_cast<int>(sites_.size()); }
  int operator[](int i) const { return sites_[i]; }
  void set(int i, int k) { sites_[i] = k; }
  std::span<const int> sites() const noexcept { return sites_; }

  /// Copy of pattern mu as a configuration.
  static SpinConfig from_pattern(const PatternSet& patterns, int mu);

  bool operator==(const SpinConfig&) const = default;

 private:
  std::vector<int> sites_;
};

/// Throws ParameterError if sizes disagree or a label is out of range.
void check_compatible(const SpinConfig& config, const PatternSet& patterns);

/// E = -(1/2) sum_{i != j} sum_{a,b} J_ij^{ab} u_{s_i,a} u_{s_j,b} with Hebbian
/// couplings J_ij^{ab} = (1/(q^2 N)) sum_mu u_{xi_i,a} u_{xi_j,b}.
double classical_energy(const SpinConfig& config, const PatternSet& patterns);

/// m^mu = (1/(N(q-1))) sum_i u_{xi_i^mu, s_i}.
std::vector<double> overlap(const SpinConfig& config, const PatternSet& patterns);

/// Little-endian mixed-radix index of a configuration: index = sum_i k_i q^i.
/// Shared by the classical master equation and the density-matrix code so that
/// probability vectors and density-matrix diagonals line up entry by entry.
class BasisIndexer {
 public:
  BasisIndexer(int q, int n_sites);

  int q() const noexcept { return q_; }
  int n_sites() const noexcept { return n_sites_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t stride(int site) const { return strides_[site]; }

  int digit(std::size_t index, int site) const {
    return static_cast<int>((index / strides_[site]) % static_cast<std::size_t>(q_));
  }
  /// Index of the state with site i moved from level `from` to level `to`;
  /// the caller guarantees digit(index, i) == from.
  std::size_t moved(std::size_t index, int site, int from, int to) const {
    return index + static_cast<std::size_t>(to - from) * strides_[site];
  }
  std::size_t index_of(const SpinConfig& config) const;
  SpinConfig config_of(std::size_t index) const;

 private:
  int q_;
  int n_sites_;
  std::size_t dim_;
  std::vector<std::size_t> strides_;
};

// ---------------------------------------------------------------------------
// q = 3 mean-field rates.
//
// A rate label (alpha, s), alpha in {1,2,3}, s = +1/-1, names the single-site
// jump |alpha-1><alpha-1+s|: it lands on level alpha-1 coming from level
// alpha-1+s (mod 3). With this labelling the f1/f2/f3 combinations used by the
// mean-field equations reproduce the single-site population dynamics exactly.

constexpr int jump_target(int alpha) noexcept { return alpha - 1; }
constexpr int jump_source(int alpha, int s, int q = kMeanFieldQ) noexcept {
  return mod_q(alpha - 1 + s, q);
}

/// Rate exponent of the jump (alpha, s) at a site with pattern exponents k:
///   Delta = 3 sum_mu m^mu (delta_{k^mu, target} - delta_{k^mu, source}),
/// which is minus one half of the mean-field energy change of the jump.
/// Positive for moves into alignment with a pattern.
double meanfield_delta_energy(int alpha, int s, std::span<const double> m,
                              std::span<const int> pattern_exponents);

/// The six normalized squared jump amplitudes Gamma^2_{alpha,s}.
class RateVector {
 public:
  static constexpr std::size_t index(int alpha, int s) noexcept {
    return static_cast<std::size_t>((alpha - 1) * 2 + (s > 0 ? 0 : 1));
  }
  double operator()(int alpha, int s) const { return values_[index(alpha, s)]; }
  double& operator()(int alpha, int s) { return values_[index(alpha, s)]; }
  const std::array<double, 6>& values() const noexcept { return values_; }
  double sum() const noexcept;

 private:
  std::array<double, 6> values_{};
};

/// Gamma^2_{alpha,s} = exp(beta Delta_{alpha,s}) / Z, Z summed over all six
/// labels, computed with max-shifted exponentials.
RateVector meanfield_rates(std::span<const double> m, std::span<const int> pattern_exponents,
                           double beta);

/// Damping coefficient h^s(alpha) = sum_{s'} (G2_{alpha-s',s'} + G2_{alpha-s'+s,s'}).
double damping_coefficient(const RateVector& rates, int s, int alpha);

/// Calls fn(k) for all 3^p joint single-site pattern assignments k (odometer
/// order, k[0] fastest). Throws CapacityError for p > kMaxDisorderPatterns.
template <class Fn>
void for_each_pattern_assignment(int p, Fn&& fn) {
  if (p < 1) throw ParameterError("disorder enumeration needs p >= 1");
  if (p > kMaxDisorderPatterns) {
    throw CapacityError("disorder average enumerates 3^p terms; p = " +
                        std::to_string(p) + " exceeds the cap of " +
                        std::to_string(kMaxDisorderPatterns));
  }
  std::array<int, kMaxDisorderPatterns> k{};
  const std::span<const int> view(k.data(), static_cast<std::size_t>(p));
  for (;;) {
    fn(view);
    int pos = 0;
    while (pos < p && ++k[pos] == kMeanFieldQ) k[pos++] = 0;
    if (pos == p) break;
  }
}

/// <<fn>> = 3^-p sum over all joint assignments of fn(k).
template <class Fn>
double disorder_average(Fn&& fn, int p) {
  double acc = 0.0;
  std::size_t count = 0;
  for_each_pattern_assignment(p, [&](std::span<const int> k) {
    acc += fn(k);
    ++count;
  });
  return acc / static_cast<double>(count);
}

}  // namespace qpotts
