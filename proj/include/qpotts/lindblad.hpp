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

// Exact GKSL dynamics of N quantum Potts spins on the q^N-dimensional space.
//
// Basis states use the BasisIndexer ordering, so density-matrix diagonals line
// up with classical probability vectors. Jump operators are kept as
// (diagonal amplitude, single-site shift) pairs and applied by index
// permutation; no superoperator is ever formed.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpotts/model.hpp"

namespace qpotts {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest Hilbert-space dimension handled (N = 6 at q = 3).
inline constexpr std::size_t kMaxLindbladDim = 729;

/// Single-site Z_q operators. T_plus raises the level cyclically,
/// T_plus |k> = |k+1 mod q>, so Omega T_plus = omega T_plus Omega.
struct SiteOperatorSet {
  int q = 0;
  ComplexMatrix omega;
  ComplexMatrix t_plus;
  ComplexMatrix t_minus;
  std::vector<ComplexMatrix> projectors;  ///< projectors[eta-1] = |eta-1><eta-1|
};

SiteOperatorSet build_site_operators(int q);

/// Diagonal of the energy-change operator for the labelled jump (alpha, s) at
/// site i, built literally from the Omega_j (j != i) and the couplings
/// J_ij^{eta eta'} = (1/N) sum_mu (xi_i^*)^eta (xi_j^*)^eta'.
/// A label (alpha, s) moves site i into level alpha-1 from level alpha-1+s.
/// Entries equal minus the classical energy change of that move.
Eigen::VectorXd build_delta_E(int site, int alpha, int s, const PatternSet& patterns);

/// Diagonal of E = -(1/2N) sum_mu { [sum_i sum_{a=1}^{q-1} (xi_i^* Omega_i)^a]^2 + h.c. }.
Eigen::VectorXd build_energy_operator(const PatternSet& patterns);

/// L = sqrt(gamma) Gamma T with T = |target><source| at `site` and Gamma
/// diagonal. `amplitude` holds sqrt(gamma) Gamma entrywise; it depends only on
/// the other sites.
struct JumpOperator {
  int site;
  int alpha;
  int s;
  int target;
  int source;
  Eigen::VectorXd amplitude;
};

/// All 2qN jump operators. Squared amplitudes are
///   Gamma^2 = exp((beta/2) dE) / sum_{alpha', s'} exp((beta/2) dE_{alpha', s'}),
/// which makes the diagonal dynamics relax to exp(-beta E).
std::vector<JumpOperator> build_jump_operators(const PatternSet& patterns,
                                               const ModelParams& params);

/// Dense H = lambda sum_i (T_plus_i + T_minus_i).
ComplexMatrix build_hamiltonian(const PatternSet& patterns, const ModelParams& params);

/// Dense single-site operator `op` (q x q) acting on `site`.
ComplexMatrix embed_site_operator(const ComplexMatrix& op, int site, const BasisIndexer& basis);

/// Dense copy of a jump operator.
ComplexMatrix jump_matrix(const JumpOperator& jump, const BasisIndexer& basis);

struct DensityCheck {
  double hermiticity;   ///< max |rho - rho^dagger|
  double trace_error;   ///< |Tr rho - 1|
  double min_eigenvalue;
};

DensityCheck check_density_matrix(const ComplexMatrix& rho);

enum class InitialState { kPatternPure, kPlantedMixture, kMaximallyMixed, kUniformSuperposition };

/// Named initial states. `mu` selects the pattern; `m0` is the planted overlap
/// (each site independently copies the pattern with probability
/// (m0 (q-1) + 1)/q, otherwise sits uniformly on a misaligned level).
ComplexMatrix initial_density_matrix(InitialState kind, const PatternSet& patterns, int mu = 0,
                                     double m0 = 1.0);

/// Reduced q x q density matrix of one site.
ComplexMatrix reduced_site_matrix(const ComplexMatrix& rho, int site, const BasisIndexer& basis);

/// <m^mu> = Tr(rho m^mu), m^mu = (1/(2N(q-1))) sum_i sum_{a=1}^{q-1} (xi_i^* Omega_i)^a + h.c.
std::vector<double> expectation_overlap(const ComplexMatrix& rho, const PatternSet& patterns);

/// Collective coherences (x, xbar, y, ybar) per pattern for q = 3, built
/// from X_alpha = T_{alpha,-} + h.c. and Y_alpha = -i (T_{alpha,+} - h.c.).
struct Coherences {
  std::vector<double> x, xbar, y, ybar;
};
Coherences expectation_coherences(const ComplexMatrix& rho, const PatternSet& patterns);

struct LindbladOptions {
  double t_end = 10.0;
  double dt = 1e-3;
  int record_every = 1;
  bool record_populations = false;
  bool record_coherences = false;
  /// Positivity is checked on every n-th recorded step.
  int positivity_every = 100;
  double trace_tolerance = 1e-6;
  double positivity_tolerance = 1e-6;
};

struct LindbladRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> overlaps;     ///< per record, p values
  std::vector<std::vector<double>> populations;  ///< per record, dim values (optional)
  std::vector<Coherences> coherences;            ///< per record (optional)
  ComplexMatrix final_state;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermiticity = 0.0;
};

class LindbladSolver {
 public:
  LindbladSolver(const PatternSet& patterns, const ModelParams& params);

  const BasisIndexer& basis() const noexcept { return basis_; }
  const std::vector<JumpOperator>& jumps() const noexcept { return jumps_; }
  std::size_t dim() const noexcept { return basis_.dim(); }

  /// d rho/dt = -i[H, rho] + sum_l (L rho L^dagger - {L^dagger L, rho}/2).
  void derivative(const ComplexMatrix& rho, ComplexMatrix& out) const;

  void rk4_step(ComplexMatrix& rho, double h) const;

  /// Throws IntegratorAccuracyError on trace drift or loss of positivity.
  LindbladRecord evolve(const ComplexMatrix& rho0, const LindbladOptions& options) const;

 private:
  struct Transfer {
    std::size_t to;    // state with site at target
    std::size_t from;  // same state with site at source
    double amplitude;
  };

  PatternSet patterns_;
  ModelParams params_;
  BasisIndexer basis_;
  std::vector<JumpOperator> jumps_;
  std::vector<std::vector<Transfer>> transfers_;  // per jump
  Eigen::VectorXd decay_;                         // diag of sum_l L^dagger L
  std::vector<std::vector<std::size_t>> up_;      // per site, raised index
  std::vector<std::vector<std::size_t>> down_;    // per site, lowered index
  mutable ComplexMatrix k1_, k2_, k3_, k4_, tmp_;
};

/// Exact check of the q = 2 reduction: evolves rho with lambda = 0 and compares
/// a central-difference d<sz_i>/dt with <-gamma sz_i + gamma tanh(beta b_i)>,
/// b_i = (1/N) sum_mu xi_i sum_{j != i} xi_j sz_j. Returns the max deviation
/// over sites and interior grid times.
double q2_reduction_check(const PatternSet& patterns, const ModelParams& params,
                          const ComplexMatrix& rho0, double t_end, double dt);

/// Dense dump: "text" writes "re im" pairs row by row; "binary" writes
/// row-major little-endian float64 (re, im) pairs.
void dump_matrix(const ComplexMatrix& matrix, std::ostream& out, bool binary);

}  // namespace qpotts
