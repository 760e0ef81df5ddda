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

#include "qpotts/meanfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qpotts {
namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kInvTwoSqrt3 = 1.0 / (2.0 * kSqrt3);
// omega^k = cos(2 pi k/3) + i sin(2 pi k/3)
constexpr std::array<double, 3> kCos = {1.0, -0.5, -0.5};
constexpr std::array<double, 3> kSin = {0.0, kSqrt3 / 2.0, -kSqrt3 / 2.0};

// g[alpha-1][0] = Gamma^2_{alpha,+}, g[alpha-1][1] = Gamma^2_{alpha,-}.
FCoefficients combine(const std::array<std::array<double, 2>, 3>& g) {
  const double g1p = g[0][0], g1m = g[0][1];
  const double g2p = g[1][0], g2m = g[1][1];
  const double g3p = g[2][0], g3m = g[2][1];
  FCoefficients f;
  f.f1 = {0.0, kInvTwoSqrt3 * (g1p + g2p + g3p - g1m - g2m - g3m)};
  f.f2 = {0.5 * (g3p - g3m - (g2p - g2m)),
          kInvTwoSqrt3 * (g3p - g3m + g2p - g2m - 2.0 * (g1p - g1m))};
  f.f3 = {0.5 * (g3p + g2m - g1p - g1m),
          kInvTwoSqrt3 * (g3p - g2m + g1p - g1m - 2.0 * (g2p - g3m))};
  return f;
}

double norm_inf(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace

CollectiveState::CollectiveState(int p, std::vector<double> values)
    : p_(p), values_(std::move(values)) {
  if (p < 1 || values_.size() != static_cast<std::size_t>(5 * p)) {
    throw ParameterError("collective state needs 5p values");
  }
}

CollectiveState CollectiveState::classical(const std::vector<double>& m) {
  CollectiveState s(static_cast<int>(m.size()));
  for (std::size_t mu = 0; mu < m.size(); ++mu) s.m(static_cast<int>(mu)) = m[mu];
  return s;
}

double CollectiveState::max_abs() const { return norm_inf(values_); }

FCoefficients f_coefficients(const RateVector& rates) {
  std::array<std::array<double, 2>, 3> g{};
  for (int alpha = 1; alpha <= 3; ++alpha) {
    g[alpha - 1][0] = rates(alpha, 1);
    g[alpha - 1][1] = rates(alpha, -1);
  }
  return combine(g);
}

FCoefficients f_coefficients(std::span<const double> m, std::span<const int> pattern_exponents,
                             double beta) {
  return f_coefficients(meanfield_rates(m, pattern_exponents, beta));
}

MeanFieldModel::MeanFieldModel(const ModelParams& params) : params_(params) {
  params_.validate();
  if (params_.q != kMeanFieldQ) {
    throw UnsupportedModelError("mean-field equations are closed only for q = 3");
  }
  for_each_pattern_assignment(params_.p, [&](std::span<const int> k) {
    assignments_.insert(assignments_.end(), k.begin(), k.end());
  });
  n_assignments_ = assignments_.size() / static_cast<std::size_t>(params_.p);
}

void MeanFieldModel::rhs(std::span<const double> state, std::span<double> out) const {
  const int p = params_.p;
  if (state.size() != dim() || out.size() != dim()) {
    throw ParameterError("state length must be 5p");
  }
  for (double v : state) {
    if (!std::isfinite(v)) throw NumericError("non-finite collective state");
  }
  const double beta = params_.beta;
  const double gamma = params_.gamma;
  const double lambda = params_.lambda;
  const double* m = state.data();

  std::array<double, kMaxDisorderPatterns> a2{};
  std::array<double, kMaxDisorderPatterns> a3{};
  std::array<std::array<double, 2>, 3> g{};
  std::array<double, 6> expo{};
  for (std::size_t c = 0; c < n_assignments_; ++c) {
    const int* k = assignments_.data() + c * p;
    // Overlap mass per level: M[l] = sum_mu m^mu delta_{k^mu, l}.
    std::array<double, 3> level{};
    for (int mu = 0; mu < p; ++mu) level[k[mu]] += m[mu];
    double top = -std::numeric_limits<double>::infinity();
    for (int alpha = 1; alpha <= 3; ++alpha) {
      for (int si = 0; si < 2; ++si) {
        const int s = si == 0 ? 1 : -1;
        const double delta = 3.0 * (level[alpha - 1] - level[mod_q(alpha - 1 + s, 3)]);
        expo[(alpha - 1) * 2 + si] = beta * delta;
        top = std::max(top, beta * delta);
      }
    }
    double z = 0.0;
    for (double& e : expo) {
      e = std::exp(e - top);
      z += e;
    }
    for (int alpha = 0; alpha < 3; ++alpha) {
      g[alpha][0] = expo[alpha * 2] / z;
      g[alpha][1] = expo[alpha * 2 + 1] / z;
    }
    const FCoefficients f = combine(g);
    for (int mu = 0; mu < p; ++mu) {
      const double c_k = kCos[k[mu]];
      const double s_k = kSin[k[mu]];
      a2[mu] += c_k * f.f2.real() - s_k * f.f2.imag();  // Re[xi f2]
      a3[mu] += c_k * f.f3.real() + s_k * f.f3.imag();  // Re[xi* f3]
    }
  }
  const double inv = 1.0 / static_cast<double>(n_assignments_);
  const double s3h = kSqrt3 / 2.0;
  for (int mu = 0; mu < p; ++mu) {
    const double mm = m[mu];
    const double x = state[p + mu];
    const double xb = state[2 * p + mu];
    const double y = state[3 * p + mu];
    const double yb = state[4 * p + mu];
    const double avg2 = a2[mu] * inv;
    const double avg3 = a3[mu] * inv;
    out[mu] = -0.5 * gamma * mm * (1.0 + 2.0 * avg2) - gamma * avg3 -
              3.0 * lambda * (1.5 * y + s3h * yb);
    out[p + mu] = -gamma / 3.0 * x - lambda * (-1.5 * y - s3h * yb);
    out[2 * p + mu] = -gamma / 3.0 * xb - lambda * (-1.5 * yb + s3h * y);
    out[3 * p + mu] = -gamma / 3.0 * y + lambda * (-1.5 * x + s3h * xb + mm);
    out[4 * p + mu] = -gamma / 3.0 * yb + lambda * (-1.5 * xb - s3h * x + mm / kSqrt3);
  }
}

CollectiveState MeanFieldModel::rhs(const CollectiveState& state) const {
  if (state.p() != params_.p) throw ParameterError("state p does not match model p");
  CollectiveState out(params_.p);
  rhs(state.values(), out.values());
  return out;
}

void MeanFieldModel::rk4_step(std::span<double> state, double h,
                              std::vector<double>& scratch) const {
  const std::size_t d = dim();
  scratch.resize(5 * d);
  std::span<double> k1(scratch.data(), d), k2(scratch.data() + d, d),
      k3(scratch.data() + 2 * d, d), k4(scratch.data() + 3 * d, d), tmp(scratch.data() + 4 * d, d);
  rhs(state, k1);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
  rhs(tmp, k2);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
  rhs(tmp, k3);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + h * k3[i];
  rhs(tmp, k4);
  for (std::size_t i = 0; i < d; ++i) {
    state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

CollectiveState Trajectory::state_at(std::size_t k) const {
  const auto s = state(k);
  return CollectiveState(p, std::vector<double>(s.begin(), s.end()));
}

double Trajectory::interpolate(std::size_t index, double t) const {
  if (times.empty() || t < times.front() - 1e-9 || t > times.back() + 1e-9) {
    throw ParameterError("interpolation time outside trajectory");
  }
  const std::size_t stride = static_cast<std::size_t>(5 * p);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return states[(times.size() - 1) * stride + index];
  if (it == times.begin()) return states[index];
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * states[lo * stride + index] + w * states[hi * stride + index];
}

Trajectory integrate(const CollectiveState& state0, const ModelParams& params, double t_end,
                     double dt, int record_every, double record_from) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ParameterError("integrate needs dt > 0 and t_end > 0");
  if (record_every < 1) throw ParameterError("record_every must be >= 1");
  if (state0.p() != params.p) throw ParameterError("initial state p does not match params");
  const MeanFieldModel model(params);
  const long steps = std::max(1L, std::lround(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.p = params.p;
  traj.params = params;
  std::vector<double> state(state0.values().begin(), state0.values().end());
  std::vector<double> scratch;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.insert(traj.states.end(), state.begin(), state.end());
  };
  record(0.0);
  for (long n = 1; n <= steps; ++n) {
    model.rk4_step(state, h, scratch);
    const double t = static_cast<double>(n) * h;
    for (double v : state) {
      if (!std::isfinite(v) || std::abs(v) > kBlowUpBound) {
        throw BlowUpError(t, "mean-field integration diverged at t = " + std::to_string(t));
      }
    }
    if (n == steps || (n % record_every == 0 && t >= record_from - 0.5 * h)) record(t);
  }
  return traj;
}

std::vector<double> jacobian(const CollectiveState& point, const ModelParams& params,
                             double step) {
  const MeanFieldModel model(params);
  const std::size_t d = model.dim();
  if (point.size() != d) throw ParameterError("point length must be 5p");
  std::vector<double> jac(d * d);
  std::vector<double> xp(point.values().begin(), point.values().end());
  std::vector<double> xm = xp;
  std::vector<double> fp(d), fm(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double x0 = xp[j];
    xp[j] = x0 + step;
    xm[j] = x0 - step;
    model.rhs(xp, fp);
    model.rhs(xm, fm);
    xp[j] = x0;
    xm[j] = x0;
    for (std::size_t i = 0; i < d; ++i) jac[i * d + j] = (fp[i] - fm[i]) / (2.0 * step);
  }
  return jac;
}

CollectiveState find_fixed_point(const CollectiveState& guess, const ModelParams& params,
                                 const FixedPointOptions& options) {
  const MeanFieldModel model(params);
  const std::size_t d = model.dim();
  if (guess.size() != d) throw ParameterError("guess length must be 5p");
  for (double v : guess.values()) {
    if (!std::isfinite(v)) throw ParameterError("fixed-point guess must be finite");
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(guess.values().data(), d);
  Eigen::VectorXd f(d);
  model.rhs(std::span<const double>(x.data(), d), std::span<double>(f.data(), d));
  double residual = f.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < options.max_iterations && residual >= options.tolerance; ++iter) {
    const CollectiveState here(params.p, std::vector<double>(x.data(), x.data() + d));
    const std::vector<double> jac = jacobian(here, params, 1e-7);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        j_mat(jac.data(), d, d);
    const Eigen::VectorXd delta = j_mat.colPivHouseholderQr().solve(-f);
    if (!delta.allFinite()) break;
    // Step halving keeps Newton from overshooting into another basin.
    double scale = 1.0;
    Eigen::VectorXd trial(d), f_trial(d);
    double trial_residual = residual;
    for (int half = 0; half < 30; ++half) {
      trial = x + scale * delta;
      model.rhs(std::span<const double>(trial.data(), d), std::span<double>(f_trial.data(), d));
      trial_residual = f_trial.lpNorm<Eigen::Infinity>();
      if (trial_residual < residual) break;
      scale *= 0.5;
    }
    if (!(trial_residual < residual)) break;
    x = trial;
    f = f_trial;
    residual = trial_residual;
  }
  if (!(residual < options.tolerance)) {
    throw ConvergenceError(residual, "Newton iteration did not converge; residual " +
                                         std::to_string(residual));
  }
  return CollectiveState(params.p, std::vector<double>(x.data(), x.data() + d));
}

std::vector<std::complex<double>> jacobian_eigenvalues(const CollectiveState& point,
                                                       const ModelParams& params) {
  const MeanFieldModel model(params);
  const double residual = model.rhs(point).max_abs();
  if (!(residual < 1e-6)) {
    throw ParameterError("jacobian_eigenvalues needs an approximate fixed point; ||rhs|| = " +
                         std::to_string(residual));
  }
  const std::size_t d = model.dim();
  const std::vector<double> jac = jacobian(point, params, 1e-6);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      j_mat(jac.data(), d, d);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(j_mat), false);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  std::vector<std::complex<double>> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return ev;
}

std::vector<std::vector<double>> sample_overlaps(const Trajectory& traj,
                                                 const SigmaWindow& window) {
  if (window.n_samples < 2 || !(window.t_hi > window.t_lo)) {
    throw ParameterError("sigma window needs t_hi > t_lo and n_samples >= 2");
  }
  if (traj.times.empty() || window.t_lo < traj.times.front() - 1e-9 ||
      window.t_hi > traj.times.back() + 1e-9) {
    throw ParameterError("sigma window [" + std::to_string(window.t_lo) + ", " +
                         std::to_string(window.t_hi) + "] lies outside the trajectory");
  }
  std::vector<std::vector<double>> out(traj.p, std::vector<double>(window.n_samples));
  const double span = (window.t_hi - window.t_lo) / (window.n_samples - 1);
  for (int k = 0; k < window.n_samples; ++k) {
    const double t = window.t_lo + span * k;
    for (int mu = 0; mu < traj.p; ++mu) out[mu][k] = traj.interpolate(mu, t);
  }
  return out;
}

std::vector<double> limit_cycle_sigma(const Trajectory& traj, const SigmaWindow& window) {
  const auto samples = sample_overlaps(traj, window);
  std::vector<double> sigma(samples.size());
  for (std::size_t mu = 0; mu < samples.size(); ++mu) {
    const auto& s = samples[mu];
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    sigma[mu] = std::sqrt(var / static_cast<double>(s.size()));
  }
  return sigma;
}

HopfScan hopf_scan(double lambda, double t_lo, double t_hi, int n_points, int p, double gamma) {
  if (n_points < 2 || !(t_hi > t_lo) || !(t_lo > 0.0)) {
    throw ParameterError("hopf_scan needs 0 < t_lo < t_hi and n_points >= 2");
  }
  HopfScan scan;
  for (int k = 0; k < n_points; ++k) {
    const double temp = t_lo + (t_hi - t_lo) * k / (n_points - 1);
    const ModelParams params = ModelParams::at_temperature(temp, lambda, p, gamma);
    const auto ev = jacobian_eigenvalues(CollectiveState(p), params);
    HopfRow row{temp, {}, {}, false};
    // Eigenvalues are sorted by real part, so the first with Im > 0 leads.
    for (const auto& z : ev) {
      if (z.imag() > 1e-9) {
        row.zeta1 = z;
        row.zeta2 = std::conj(z);
        row.has_pair = true;
        break;
      }
    }
    scan.rows.push_back(row);
  }
  for (std::size_t k = 1; k < scan.rows.size(); ++k) {
    const HopfRow& a = scan.rows[k - 1];
    const HopfRow& b = scan.rows[k];
    if (!a.has_pair || !b.has_pair) continue;
    const double ra = a.zeta1.real();
    const double rb = b.zeta1.real();
    if ((ra < 0.0) == (rb < 0.0)) continue;
    const double w = ra / (ra - rb);
    scan.crossings.push_back(a.temperature + w * (b.temperature - a.temperature));
    scan.crossing_frequencies.push_back(
        std::abs(a.zeta1.imag() + w * (b.zeta1.imag() - a.zeta1.imag())));
  }
  return scan;
}

}  // namespace qpotts
