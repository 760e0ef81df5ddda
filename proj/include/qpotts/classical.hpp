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

// Classical stochastic dynamics: heat-bath Monte Carlo and the exact
// continuous-time master equation on the full q^N configuration space.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qpotts/model.hpp"
#include "qpotts/random.hpp"

namespace qpotts {

/// Largest configuration space handled by the master equation.
inline constexpr std::size_t kMaxMasterDim = 100000;

/// Site potential h_k(i) = -(1/N) sum_mu u_{xi_i^mu, k} sum_{j != i} u_{xi_j^mu, s_j}
/// for every candidate level k, others held fixed. A single-site move changes
/// the energy by h_new - h_old.
std::vector<double> potential(int site, const SpinConfig& config, const PatternSet& patterns);

struct MCSettings {
  long n_sweeps = 2000;
  long burn_in = 500;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// One heat-bath update at a uniformly chosen site: the new level k is drawn
/// with probability proportional to exp(-beta h_k) over all q candidates.
/// Modifies `config` in place and returns the updated site.
int mc_step(SpinConfig& config, const PatternSet& patterns, const ModelParams& params, Rng& rng);

/// N single-site updates.
void mc_sweep(SpinConfig& config, const PatternSet& patterns, const ModelParams& params, Rng& rng);

/// Heat-bath chain that keeps the pattern sums S^mu = sum_j u_{xi_j^mu, s_j}
/// up to date, so a step costs O(q p) instead of O(N p). Same update law as
/// mc_step.
class HeatBathChain {
 public:
  HeatBathChain(const PatternSet& patterns, const ModelParams& params, SpinConfig initial);

  int step(Rng& rng);
  void sweep(Rng& rng);
  const SpinConfig& config() const noexcept { return config_; }
  /// Current overlaps, from the cached sums.
  std::vector<double> overlap() const;

 private:
  PatternSet patterns_;
  double beta_;
  SpinConfig config_;
  std::vector<double> sums_;
  std::vector<double> weights_;
  std::vector<double> h_;
};

/// Configuration whose overlap with pattern mu equals m0 in expectation: a
/// fraction (m0 (q-1) + 1)/q of sites, chosen at random, copies the pattern;
/// each remaining site takes one of the q-1 misaligned levels uniformly.
SpinConfig planted_config(const PatternSet& patterns, int mu, double m0, Rng& rng);

/// exp(-beta E)/Z over all q^N configurations, in BasisIndexer order.
std::vector<double> gibbs_distribution(const PatternSet& patterns, double beta);

/// Continuous-time master equation with the normalized single-site rates
///   w(i: src -> tgt) = gamma exp(-beta (h_tgt - h_src) / 2) / Z_i,
/// Z_i summed over the 2q labelled moves (alpha, s) of site i. Z_i does not
/// depend on the level of site i itself.
class ClassicalMasterEquation {
 public:
  ClassicalMasterEquation(const PatternSet& patterns, const ModelParams& params);

  const BasisIndexer& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.dim(); }

  /// Total rate of moving site i of state `index` to level `target`,
  /// summed over every label that realizes the move. 0 if target equals the
  /// current level.
  double rate(std::size_t index, int site, int target) const;

  /// dp/dt for probability vector p.
  void derivative(const std::vector<double>& p, std::vector<double>& dp) const;

  /// Fixed-step RK4 from p0 to t_end.
  std::vector<double> evolve(const std::vector<double>& p0, double t_end, double dt) const;

 private:
  struct Move {
    std::size_t target;
    double rate;
  };

  BasisIndexer basis_;
  int moves_per_state_;
  std::vector<Move> moves_;  // dim * N * 2 outgoing moves
};

/// One row of an equilibrium overlap curve.
struct OverlapPoint {
  double temperature;
  double m_stat;  ///< mean overlap with pattern 0 over the post-burn-in sweeps
};

/// For each temperature: plant overlap m0 with pattern 0, run n_sweeps heat-bath
/// sweeps, average m over sweeps after burn_in. Temperatures run in parallel
/// with per-temperature seeds mixed from settings.rng_seed.
std::vector<OverlapPoint> equilibrium_overlap_curve(const PatternSet& patterns,
                                                    const std::vector<double>& temperatures,
                                                    const MCSettings& settings, double m0);

}  // namespace qpotts
