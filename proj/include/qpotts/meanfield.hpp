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

// Mean-field collective dynamics of the driven-dissipative q = 3 network:
// 5p coupled ODEs for the overlaps m and the coherences x, xbar, y, ybar.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qpotts/model.hpp"

namespace qpotts {

/// Flat 5p state, ordered (m^1..m^p, x^1..x^p, xbar^1..xbar^p, y^1..y^p, ybar^1..ybar^p).
class CollectiveState {
 public:
  CollectiveState() = default;
  explicit CollectiveState(int p) : p_(p), values_(static_cast<std::size_t>(5 * p), 0.0) {}
  CollectiveState(int p, std::vector<double> values);

  /// Overlaps given, coherences zero.
  static CollectiveState classical(const std::vector<double>& m);

  int p() const noexcept { return p_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& m(int mu) { return values_[mu]; }
  double& x(int mu) { return values_[p_ + mu]; }
  double& xbar(int mu) { return values_[2 * p_ + mu]; }
  double& y(int mu) { return values_[3 * p_ + mu]; }
  double& ybar(int mu) { return values_[4 * p_ + mu]; }
  double m(int mu) const { return values_[mu]; }
  double x(int mu) const { return values_[p_ + mu]; }
  double xbar(int mu) const { return values_[2 * p_ + mu]; }
  double y(int mu) const { return values_[3 * p_ + mu]; }
  double ybar(int mu) const { return values_[4 * p_ + mu]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double max_abs() const;

 private:
  int p_ = 0;
  std::vector<double> values_;
};

/// Per-site complex combinations of the six squared rates.
struct FCoefficients {
  std::complex<double> f1;
  std::complex<double> f2;
  std::complex<double> f3;
};

FCoefficients f_coefficients(const RateVector& rates);
FCoefficients f_coefficients(std::span<const double> m, std::span<const int> pattern_exponents,
                             double beta);

/// Right-hand side of the collective equations. Disorder averages of
/// Re[xi f2] and Re[xi* f3] are enumerated exactly over the 3^p single-site
/// pattern assignments; coherence damping uses the averaged constant gamma/3.
class MeanFieldModel {
 public:
  explicit MeanFieldModel(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  int p() const noexcept { return params_.p; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(5 * params_.p); }

  /// Writes d(state)/dt into `out` (both of length 5p). Throws NumericError
  /// on non-finite input.
  void rhs(std::span<const double> state, std::span<double> out) const;
  CollectiveState rhs(const CollectiveState& state) const;

  /// One classical RK4 step of size h, in place. `scratch` is resized as needed.
  void rk4_step(std::span<double> state, double h, std::vector<double>& scratch) const;

 private:
  ModelParams params_;
  std::vector<int> assignments_;  // 3^p rows of p exponents
  std::size_t n_assignments_;
};

/// Uniformly sampled solution.
struct Trajectory {
  int p = 0;
  std::vector<double> times;
  std::vector<double> states;  ///< row-major, 5p values per time
  ModelParams params;

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * 5 * static_cast<std::size_t>(p), static_cast<std::size_t>(5 * p)};
  }
  CollectiveState state_at(std::size_t k) const;
  /// Linear interpolation of component `index` at time t.
  double interpolate(std::size_t index, double t) const;
};

/// Blow-up threshold on |state entries|.
inline constexpr double kBlowUpBound = 1e6;

/// Fixed-step RK4 from state0 to t_end. Records the initial state, every
/// `record_every`-th step at or after `record_from`, and the final state.
/// Throws BlowUpError when an entry exceeds kBlowUpBound or becomes non-finite.
Trajectory integrate(const CollectiveState& state0, const ModelParams& params, double t_end,
                     double dt, int record_every = 1, double record_from = 0.0);

struct FixedPointOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/// Newton iteration with a central finite-difference Jacobian and step
/// halving. Throws ConvergenceError carrying the final residual.
CollectiveState find_fixed_point(const CollectiveState& guess, const ModelParams& params,
                                 const FixedPointOptions& options = {});

/// Dense central-difference Jacobian with step `step`, row-major 5p x 5p.
std::vector<double> jacobian(const CollectiveState& point, const ModelParams& params,
                             double step = 1e-6);

/// Eigenvalues of the Jacobian at an approximate fixed point, sorted by real
/// part descending (imaginary part descending on ties). Throws ParameterError
/// if ||rhs||_inf >= 1e-6 at the point.
std::vector<std::complex<double>> jacobian_eigenvalues(const CollectiveState& point,
                                                       const ModelParams& params);

struct SigmaWindow {
  double t_lo = 9000.0;
  double t_hi = 10000.0;
  int n_samples = 2000;
};

/// Overlap samples m^mu(t_k) at n uniformly spaced times spanning the window
/// (both ends included). Result is p rows of n values.
std::vector<std::vector<double>> sample_overlaps(const Trajectory& traj, const SigmaWindow& window);

/// sigma_m^mu = sqrt(mean_k (m^mu(t_k) - mean m^mu)^2) over the window samples.
std::vector<double> limit_cycle_sigma(const Trajectory& traj, const SigmaWindow& window = {});

struct HopfRow {
  double temperature;
  std::complex<double> zeta1;  ///< leading complex eigenvalue, Im > 0
  std::complex<double> zeta2;  ///< its conjugate
  bool has_pair;
};

struct HopfScan {
  std::vector<HopfRow> rows;
  /// Temperatures where Re(zeta1) changes sign, interpolated linearly.
  std::vector<double> crossings;
  /// |Im zeta1| interpolated at each crossing.
  std::vector<double> crossing_frequencies;
};

/// Tracks the leading complex-conjugate pair of the paramagnetic Jacobian on a
/// uniform temperature grid of n_points in [t_lo, t_hi].
HopfScan hopf_scan(double lambda, double t_lo, double t_hi, int n_points, int p = 1,
                   double gamma = 1.0);

}  // namespace qpotts
