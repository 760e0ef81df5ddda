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

#include "qpotts/lindblad.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <ostream>

namespace qpotts {
namespace {

std::vector<Complex> roots_of_unity(int q) {
  std::vector<Complex> w(q);
  for (int k = 0; k < q; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / q;
    w[k] = {std::cos(phase), std::sin(phase)};
  }
  // Exact values where the trig functions round.
  w[0] = {1.0, 0.0};
  if (q % 2 == 0) w[q / 2] = {-1.0, 0.0};
  if (q % 4 == 0) {
    w[q / 4] = {0.0, 1.0};
    w[3 * q / 4] = {0.0, -1.0};
  }
  return w;
}

BasisIndexer checked_basis(const PatternSet& patterns) {
  BasisIndexer basis(patterns.q(), patterns.n_sites());
  if (basis.dim() > kMaxLindbladDim) {
    throw CapacityError("Hilbert space dimension q^N = " + std::to_string(basis.dim()) +
                        " exceeds the exact-dynamics cap of " + std::to_string(kMaxLindbladDim) +
                        " (N <= 6 at q = 3)");
  }
  return basis;
}

}  // namespace

SiteOperatorSet build_site_operators(int q) {
  if (q < 2) throw ParameterError("site operators need q >= 2");
  const auto w = roots_of_unity(q);
  SiteOperatorSet ops;
  ops.q = q;
  ops.omega = ComplexMatrix::Zero(q, q);
  ops.t_plus = ComplexMatrix::Zero(q, q);
  ops.t_minus = ComplexMatrix::Zero(q, q);
  for (int k = 0; k < q; ++k) {
    ops.omega(k, k) = w[k];
    ops.t_plus(mod_q(k + 1, q), k) = 1.0;
    ops.t_minus(mod_q(k - 1, q), k) = 1.0;
    ComplexMatrix proj = ComplexMatrix::Zero(q, q);
    proj(k, k) = 1.0;
    ops.projectors.push_back(std::move(proj));
  }
  return ops;
}

Eigen::VectorXd build_delta_E(int site, int alpha, int s, const PatternSet& patterns) {
  const BasisIndexer basis = checked_basis(patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  if (site < 0 || site >= n) throw ParameterError("site index out of range");
  if (alpha < 1 || alpha > q || (s != 1 && s != -1)) {
    throw ParameterError("jump label needs alpha in 1..q and s = +-1");
  }
  const auto w = roots_of_unity(q);
  // Site-i factor per pattern: sum_eta (xi_i^*)^eta omega^{(alpha-1) eta} (omega^{s eta} - 1).
  std::vector<Complex> site_factor(patterns.n_patterns());
  for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
    const int xi = patterns.exponent(site, mu);
    Complex acc = 0.0;
    for (int eta = 1; eta < q; ++eta) {
      acc += w[mod_q(eta * (alpha - 1 + s - xi), q)] - w[mod_q(eta * (alpha - 1 - xi), q)];
    }
    site_factor[mu] = acc;
  }
  Eigen::VectorXd out(basis.dim());
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    Complex total = 0.0;
    for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
      Complex rest = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == site) continue;
        const int rel = basis.digit(idx, j) - patterns.exponent(j, mu);
        for (int eta = 1; eta < q; ++eta) rest += w[mod_q(eta * rel, q)];
      }
      total += site_factor[mu] * rest / static_cast<double>(n);
    }
    // -(1/2)(z + conj z) = -Re z
    out[static_cast<Eigen::Index>(idx)] = -total.real();
  }
  return out;
}

Eigen::VectorXd build_energy_operator(const PatternSet& patterns) {
  const BasisIndexer basis = checked_basis(patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  const auto w = roots_of_unity(q);
  Eigen::VectorXd out(basis.dim());
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    double e = 0.0;
    for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
      Complex a = 0.0;
      for (int i = 0; i < n; ++i) {
        const int rel = basis.digit(idx, i) - patterns.exponent(i, mu);
        for (int eta = 1; eta < q; ++eta) a += w[mod_q(eta * rel, q)];
      }
      e -= (a * a + std::conj(a * a)).real() / (2.0 * n);
    }
    out[static_cast<Eigen::Index>(idx)] = e;
  }
  return out;
}

std::vector<JumpOperator> build_jump_operators(const PatternSet& patterns,
                                               const ModelParams& params) {
  params.validate();
  const BasisIndexer basis = checked_basis(patterns);
  const int n = patterns.n_sites();
  const int q = patterns.q();
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  std::vector<JumpOperator> jumps;
  jumps.reserve(static_cast<std::size_t>(2 * q * n));
  for (int i = 0; i < n; ++i) {
    std::vector<Eigen::VectorXd> exponent;
    for (int alpha = 1; alpha <= q; ++alpha) {
      for (int s : {1, -1}) exponent.push_back(0.5 * params.beta * build_delta_E(i, alpha, s, patterns));
    }
    // Max-shifted normalization per basis state.
    Eigen::VectorXd top = exponent[0];
    for (const auto& e : exponent) top = top.cwiseMax(e);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
    for (const auto& e : exponent) z += (e - top).array().exp().matrix();
    int label = 0;
    for (int alpha = 1; alpha <= q; ++alpha) {
      for (int s : {1, -1}) {
        JumpOperator jump;
        jump.site = i;
        jump.alpha = alpha;
        jump.s = s;
        jump.target = alpha - 1;
        jump.source = mod_q(alpha - 1 + s, q);
        const Eigen::ArrayXd g2 = (exponent[label] - top).array().exp() / z.array();
        jump.amplitude = (params.gamma * g2).sqrt().matrix();
        jumps.push_back(std::move(jump));
        ++label;
      }
    }
  }
  return jumps;
}

ComplexMatrix embed_site_operator(const ComplexMatrix& op, int site, const BasisIndexer& basis) {
  const int q = basis.q();
  if (op.rows() != q || op.cols() != q) throw ParameterError("site operator must be q x q");
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t b = 0; b < basis.dim(); ++b) {
    const int kb = basis.digit(b, site);
    for (int ka = 0; ka < q; ++ka) {
      const Complex v = op(ka, kb);
      if (v == Complex(0.0)) continue;
      const std::size_t a = basis.moved(b, site, kb, ka);
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += v;
    }
  }
  return out;
}

ComplexMatrix build_hamiltonian(const PatternSet& patterns, const ModelParams& params) {
  params.validate();
  const BasisIndexer basis = checked_basis(patterns);
  const SiteOperatorSet ops = build_site_operators(patterns.q());
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  if (params.lambda == 0.0) return h;
  const ComplexMatrix t = ops.t_plus + ops.t_minus;
  for (int i = 0; i < patterns.n_sites(); ++i) h += embed_site_operator(t, i, basis);
  return params.lambda * h;
}

ComplexMatrix jump_matrix(const JumpOperator& jump, const BasisIndexer& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < basis.dim(); ++a) {
    if (basis.digit(a, jump.site) != jump.target) continue;
    const std::size_t b = basis.moved(a, jump.site, jump.target, jump.source);
    out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
        jump.amplitude[static_cast<Eigen::Index>(a)];
  }
  return out;
}

DensityCheck check_density_matrix(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ParameterError("density matrix must be square");
  DensityCheck check;
  check.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  check.trace_error = std::abs(rho.trace() - Complex(1.0));
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("density-matrix eigen-solver failed");
  check.min_eigenvalue = solver.eigenvalues().minCoeff();
  return check;
}

ComplexMatrix initial_density_matrix(InitialState kind, const PatternSet& patterns, int mu,
                                     double m0) {
  const BasisIndexer basis = checked_basis(patterns);
  const int q = patterns.q();
  const int n = patterns.n_sites();
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  if (mu < 0 || mu >= patterns.n_patterns()) throw ParameterError("pattern index out of range");
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  switch (kind) {
    case InitialState::kPatternPure: {
      const auto idx = static_cast<Eigen::Index>(basis.index_of(SpinConfig::from_pattern(patterns, mu)));
      rho(idx, idx) = 1.0;
      break;
    }
    case InitialState::kPlantedMixture: {
      if (!(m0 >= -1.0 / (q - 1) && m0 <= 1.0)) {
        throw ParameterError("planted overlap must lie in [-1/(q-1), 1]");
      }
      const double aligned = (m0 * (q - 1) + 1.0) / q;
      const double other = (1.0 - aligned) / (q - 1);
      for (std::size_t a = 0; a < basis.dim(); ++a) {
        double prob = 1.0;
        for (int i = 0; i < n; ++i) {
          prob *= basis.digit(a, i) == patterns.exponent(i, mu) ? aligned : other;
        }
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = prob;
      }
      break;
    }
    case InitialState::kMaximallyMixed:
      rho.diagonal().setConstant(1.0 / static_cast<double>(basis.dim()));
      break;
    case InitialState::kUniformSuperposition:
      rho.setConstant(1.0 / static_cast<double>(basis.dim()));
      break;
  }
  return rho;
}

ComplexMatrix reduced_site_matrix(const ComplexMatrix& rho, int site, const BasisIndexer& basis) {
  const int q = basis.q();
  ComplexMatrix r = ComplexMatrix::Zero(q, q);
  for (std::size_t a = 0; a < basis.dim(); ++a) {
    const int ka = basis.digit(a, site);
    if (ka != 0) continue;  // enumerate the rest once, via the level-0 representative
    for (int k = 0; k < q; ++k) {
      const auto ak = static_cast<Eigen::Index>(basis.moved(a, site, 0, k));
      for (int l = 0; l < q; ++l) {
        const auto al = static_cast<Eigen::Index>(basis.moved(a, site, 0, l));
        r(k, l) += rho(ak, al);
      }
    }
  }
  return r;
}

std::vector<double> expectation_overlap(const ComplexMatrix& rho, const PatternSet& patterns) {
  const BasisIndexer basis = checked_basis(patterns);
  if (static_cast<std::size_t>(rho.rows()) != basis.dim()) {
    throw ParameterError("density matrix dimension does not match the patterns");
  }
  const int n = patterns.n_sites();
  const int q = patterns.q();
  const SiteOperatorSet ops = build_site_operators(q);
  const auto w = roots_of_unity(q);
  std::vector<double> m(patterns.n_patterns(), 0.0);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix r = reduced_site_matrix(rho, i, basis);
    for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
      // sum_a (xi^* Omega)^a + h.c.
      const Complex xi_conj = std::conj(w[patterns.exponent(i, mu)]);
      ComplexMatrix base = xi_conj * ops.omega;
      ComplexMatrix power = ComplexMatrix::Identity(q, q);
      ComplexMatrix op = ComplexMatrix::Zero(q, q);
      for (int a = 1; a < q; ++a) {
        power = power * base;
        op += power;
      }
      op += ComplexMatrix(op.adjoint());
      m[mu] += (r * op).trace().real() / (2.0 * n * (q - 1));
    }
  }
  return m;
}

Coherences expectation_coherences(const ComplexMatrix& rho, const PatternSet& patterns) {
  if (patterns.q() != 3) throw UnsupportedModelError("coherence observables are defined for q = 3");
  const BasisIndexer basis = checked_basis(patterns);
  const int n = patterns.n_sites();
  const int p = patterns.n_patterns();
  const auto w = roots_of_unity(3);
  const Complex i_unit(0.0, 1.0);
  // T_{alpha,s} = |alpha-1><alpha-1+s|.
  auto t_op = [](int alpha, int s) {
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t(alpha - 1, mod_q(alpha - 1 + s, 3)) = 1.0;
    return t;
  };
  std::vector<ComplexMatrix> big_x, big_y;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const ComplexMatrix tm = t_op(alpha, -1);
    const ComplexMatrix tp = t_op(alpha, 1);
    big_x.push_back(tm + tm.adjoint());
    big_y.push_back(-i_unit * (tp - ComplexMatrix(tp.adjoint())));
  }
  Coherences c;
  c.x.assign(p, 0.0);
  c.xbar.assign(p, 0.0);
  c.y.assign(p, 0.0);
  c.ybar.assign(p, 0.0);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix r = reduced_site_matrix(rho, i, basis);
    for (int mu = 0; mu < p; ++mu) {
      const Complex xi = w[patterns.exponent(i, mu)];
      ComplexMatrix ax = ComplexMatrix::Zero(3, 3), bx = ax, ay = ax, by = ax;
      for (int alpha = 1; alpha <= 3; ++alpha) {
        const Complex fwd = w[mod_q(alpha, 3)] * xi;
        const Complex bwd = w[mod_q(-alpha, 3)] * std::conj(xi);
        ax += fwd * big_x[alpha - 1];
        bx += bwd * big_x[alpha - 1];
        ay += fwd * big_y[alpha - 1];
        by += bwd * big_y[alpha - 1];
      }
      const double norm = 1.0 / (6.0 * n);
      const ComplexMatrix ox = norm * (ax + ComplexMatrix(ax.adjoint()));
      const ComplexMatrix oxb = i_unit * norm * (bx - ComplexMatrix(bx.adjoint()));
      const ComplexMatrix oy = norm * (ay + ComplexMatrix(ay.adjoint()));
      const ComplexMatrix oyb = i_unit * norm * (by - ComplexMatrix(by.adjoint()));
      c.x[mu] += (r * ox).trace().real();
      c.xbar[mu] += (r * oxb).trace().real();
      c.y[mu] += (r * oy).trace().real();
      c.ybar[mu] += (r * oyb).trace().real();
    }
  }
  return c;
}

LindbladSolver::LindbladSolver(const PatternSet& patterns, const ModelParams& params)
    : patterns_(patterns), params_(params), basis_(checked_basis(patterns)) {
  params_.validate();
  if (params_.q != patterns.q()) throw ParameterError("params.q does not match the patterns");
  if (params_.p != patterns.n_patterns()) throw ParameterError("params.p does not match the patterns");
  jumps_ = build_jump_operators(patterns_, params_);
  const std::size_t dim = basis_.dim();
  decay_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  transfers_.resize(jumps_.size());
  for (std::size_t l = 0; l < jumps_.size(); ++l) {
    const JumpOperator& jump = jumps_[l];
    for (std::size_t a = 0; a < dim; ++a) {
      if (basis_.digit(a, jump.site) != jump.target) continue;
      const std::size_t from = basis_.moved(a, jump.site, jump.target, jump.source);
      const double amp = jump.amplitude[static_cast<Eigen::Index>(a)];
      transfers_[l].push_back({a, from, amp});
      // L^dagger L = |Gamma|^2 |source><source| at this site.
      decay_[static_cast<Eigen::Index>(from)] += amp * amp;
    }
  }
  const int q = basis_.q();
  up_.resize(basis_.n_sites());
  down_.resize(basis_.n_sites());
  for (int i = 0; i < basis_.n_sites(); ++i) {
    up_[i].resize(dim);
    down_[i].resize(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const int k = basis_.digit(a, i);
      up_[i][a] = basis_.moved(a, i, k, mod_q(k + 1, q));
      down_[i][a] = basis_.moved(a, i, k, mod_q(k - 1, q));
    }
  }
}

void LindbladSolver::derivative(const ComplexMatrix& rho, ComplexMatrix& out) const {
  const auto dim = static_cast<Eigen::Index>(basis_.dim());
  if (rho.rows() != dim || rho.cols() != dim) throw ParameterError("density matrix has wrong dimension");
  out.resize(dim, dim);
  // Anticommutator with sum L^dagger L.
  for (Eigen::Index b = 0; b < dim; ++b) {
    for (Eigen::Index a = 0; a < dim; ++a) out(a, b) = -0.5 * (decay_[a] + decay_[b]) * rho(a, b);
  }
  // L rho L^dagger by index permutation.
  for (const auto& list : transfers_) {
    for (const Transfer& tb : list) {
      const auto to_b = static_cast<Eigen::Index>(tb.to);
      const auto from_b = static_cast<Eigen::Index>(tb.from);
      for (const Transfer& ta : list) {
        out(static_cast<Eigen::Index>(ta.to), to_b) +=
            ta.amplitude * tb.amplitude * rho(static_cast<Eigen::Index>(ta.from), from_b);
      }
    }
  }
  if (params_.lambda != 0.0) {
    // -i[H, rho], H = lambda sum_i (T+_i + T-_i); (T+ rho)(a, b) = rho(down(a), b).
    const Complex coeff(0.0, -params_.lambda);
    for (int i = 0; i < basis_.n_sites(); ++i) {
      const auto& up = up_[i];
      const auto& down = down_[i];
      for (Eigen::Index b = 0; b < dim; ++b) {
        const auto ub = static_cast<Eigen::Index>(up[b]);
        const auto db = static_cast<Eigen::Index>(down[b]);
        for (Eigen::Index a = 0; a < dim; ++a) {
          const Complex h_rho = rho(static_cast<Eigen::Index>(down[a]), b) +
                                rho(static_cast<Eigen::Index>(up[a]), b);
          const Complex rho_h = rho(a, ub) + rho(a, db);
          out(a, b) += coeff * (h_rho - rho_h);
        }
      }
    }
  }
}

void LindbladSolver::rk4_step(ComplexMatrix& rho, double h) const {
  derivative(rho, k1_);
  tmp_ = rho + 0.5 * h * k1_;
  derivative(tmp_, k2_);
  tmp_ = rho + 0.5 * h * k2_;
  derivative(tmp_, k3_);
  tmp_ = rho + h * k3_;
  derivative(tmp_, k4_);
  rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

LindbladRecord LindbladSolver::evolve(const ComplexMatrix& rho0, const LindbladOptions& options) const {
  if (!(options.t_end >= 0.0) || !(options.dt > 0.0) || options.record_every < 1 ||
      options.positivity_every < 1) {
    throw ParameterError("lindblad options need t_end >= 0, dt > 0, record_every >= 1");
  }
  const DensityCheck start = check_density_matrix(rho0);
  if (start.hermiticity > 1e-10 || start.trace_error > 1e-10 || start.min_eigenvalue < -1e-8) {
    throw ParameterError("initial state is not a valid density matrix");
  }
  if (options.record_coherences && patterns_.q() != 3) {
    throw UnsupportedModelError("coherence observables are defined for q = 3");
  }
  LindbladRecord record;
  record.min_eigenvalue = start.min_eigenvalue;
  ComplexMatrix rho = rho0;
  long n_records = 0;
  auto observe = [&](double t) {
    record.times.push_back(t);
    record.overlaps.push_back(expectation_overlap(rho, patterns_));
    if (options.record_populations) {
      const Eigen::VectorXd diag = rho.diagonal().real();
      record.populations.emplace_back(diag.data(), diag.data() + diag.size());
    }
    if (options.record_coherences) record.coherences.push_back(expectation_coherences(rho, patterns_));
    const double drift = std::abs(rho.trace() - Complex(1.0));
    record.max_trace_drift = std::max(record.max_trace_drift, drift);
    record.max_hermiticity =
        std::max(record.max_hermiticity, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (drift > options.trace_tolerance) {
      throw IntegratorAccuracyError("trace drift " + std::to_string(drift) + " at t = " +
                                    std::to_string(t) + "; reduce dt");
    }
    if (n_records % options.positivity_every == 0) {
      const double low = check_density_matrix(rho).min_eigenvalue;
      record.min_eigenvalue = std::min(record.min_eigenvalue, low);
      if (low < -options.positivity_tolerance) {
        throw IntegratorAccuracyError("density matrix lost positivity (min eigenvalue " +
                                      std::to_string(low) + ") at t = " + std::to_string(t) +
                                      "; reduce dt");
      }
    }
    ++n_records;
  };
  observe(0.0);
  if (options.t_end > 0.0) {
    const long steps = std::max(1L, std::lround(std::ceil(options.t_end / options.dt - 1e-9)));
    const double h = options.t_end / static_cast<double>(steps);
    for (long n = 1; n <= steps; ++n) {
      rk4_step(rho, h);
      if (n % options.record_every == 0 || n == steps) observe(static_cast<double>(n) * h);
    }
  }
  record.final_state = rho;
  return record;
}

double q2_reduction_check(const PatternSet& patterns, const ModelParams& params,
                          const ComplexMatrix& rho0, double t_end, double dt) {
  if (patterns.q() != 2 || params.q != 2) throw ParameterError("q2_reduction_check needs q = 2");
  if (params.lambda != 0.0) throw ParameterError("q2_reduction_check needs lambda = 0");
  if (patterns.n_sites() > 8) throw CapacityError("q2_reduction_check supports N <= 8");
  if (!(t_end > 2.0 * dt)) throw ParameterError("need at least three grid times");
  const LindbladSolver solver(patterns, params);
  const BasisIndexer& basis = solver.basis();
  const int n = patterns.n_sites();
  const std::size_t dim = basis.dim();

  // Diagonal observables: sz_i(a) = +-1 and tanh(beta b_i(a)).
  auto spin = [](int level) { return level == 0 ? 1.0 : -1.0; };
  std::vector<Eigen::VectorXd> sz(n, Eigen::VectorXd(dim)), drive(n, Eigen::VectorXd(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    for (int i = 0; i < n; ++i) {
      double b = 0.0;
      for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
        double rest = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j != i) rest += spin(patterns.exponent(j, mu)) * spin(basis.digit(a, j));
        }
        b += spin(patterns.exponent(i, mu)) * rest / n;
      }
      sz[i][static_cast<Eigen::Index>(a)] = spin(basis.digit(a, i));
      drive[i][static_cast<Eigen::Index>(a)] = std::tanh(params.beta * b);
    }
  }

  const long steps = std::max(2L, std::lround(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  std::vector<std::vector<double>> mean_sz(steps + 1, std::vector<double>(n));
  std::vector<std::vector<double>> rhs(steps + 1, std::vector<double>(n));
  ComplexMatrix rho = rho0;
  for (long k = 0; k <= steps; ++k) {
    const Eigen::VectorXd diag = rho.diagonal().real();
    for (int i = 0; i < n; ++i) {
      mean_sz[k][i] = diag.dot(sz[i]);
      rhs[k][i] = params.gamma * (diag.dot(drive[i]) - mean_sz[k][i]);
    }
    if (k < steps) solver.rk4_step(rho, h);
  }
  double worst = 0.0;
  for (long k = 1; k < steps; ++k) {
    for (int i = 0; i < n; ++i) {
      const double numeric = (mean_sz[k + 1][i] - mean_sz[k - 1][i]) / (2.0 * h);
      worst = std::max(worst, std::abs(numeric - rhs[k][i]));
    }
  }
  return worst;
}

void dump_matrix(const ComplexMatrix& matrix, std::ostream& out, bool binary) {
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const double parts[2] = {matrix(r, c).real(), matrix(r, c).imag()};
      if (binary) {
        for (double v : parts) {
          std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
          if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
          char bytes[8];
          std::memcpy(bytes, &bits, 8);
          out.write(bytes, 8);
        }
      } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g %.17g", parts[0], parts[1]);
        out << buf << (c + 1 == matrix.cols() ? '\n' : ' ');
      }
    }
  }
  if (!out) throw IoError("failed writing matrix dump");
}

}  // namespace qpotts
