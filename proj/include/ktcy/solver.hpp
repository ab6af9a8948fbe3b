#pragma once

// Continuation in τ along F_τ = log(1 - τ + τ e^F) from the trivial solution
// u = 0 at τ = 0, with a damped Newton-Krylov iteration at each accepted τ.
// Everything is kept in the mean-zero subspace, where the linearized operator
// is injective.

#include <complex>
#include <optional>
#include <vector>

#include "ktcy/estimates.hpp"
#include "ktcy/field.hpp"
#include "ktcy/pde.hpp"

namespace ktcy::solver {

struct DampingConfig {
  bool enabled = true;
  double backtracking_factor = 0.5;
  int max_backtracks = 30;
};

struct SolverConfig {
  GridSpec grid = GridSpec::cube(16);
  double newton_tol = 1e-10;  // sup-norm residual target
  int newton_max_iters = 30;
  double krylov_tol = 1e-10;  // relative, 2-norm
  int krylov_max_iters = 400;
  int krylov_restart = 60;
  double tau_initial_step = 0.25;
  double tau_min_step = 1e-4;
  DampingConfig damping;

  /// Throws std::invalid_argument on non-positive tolerances or τ steps outside (0, 1].
  void validate() const;
};

struct ContinuationRecord {
  double tau = 0.0;
  int newton_iters = 0;
  double final_residual_sup = 0.0;
  double lambda_min = 0.0;
  bool accepted = false;
};

using ContinuationTrace = std::vector<ContinuationRecord>;

struct SolveReport {
  ScalarField u;
  ContinuationTrace trace;
  pde::EllipticityReport ellipticity;
  estimates::EstimateReport estimates;
  double residual_sup = 0.0;
  int newton_iters_total = 0;
  int krylov_iters_total = 0;
  bool converged = false;
};

/// Constant-coefficient preconditioner P̄ w_xx + Q̄ (w_yy + w_tt + w_t), with P̄, Q̄ the grid
/// means of the linearization coefficients, inverted mode by mode. The zero mode maps to 0.
class FourierPreconditioner {
 public:
  explicit FourierPreconditioner(const pde::LinearizedCoeffs& c);
  ScalarField apply(const ScalarField& rhs) const;
  double p_bar() const { return p_bar_; }
  double q_bar() const { return q_bar_; }

 private:
  GridSpec grid_;
  double p_bar_, q_bar_;
  std::vector<std::complex<double>> inverse_symbol_;
};

struct NewtonStep {
  ScalarField u_next;
  int krylov_iters = 0;
  double step_norm = 0.0;    // sup|s w|
  double step_length = 0.0;  // accepted s
  double residual_sup = 0.0; // at u_next
};

/// One damped Newton step for ma_lhs(u) = e^{F_target}. Throws EllipticityLost,
/// KrylovStalled or LineSearchFailed.
NewtonStep newton_step(const ScalarField& u, const ScalarField& F_target, const SolverConfig& cfg);

struct NewtonOutcome {
  ScalarField u;
  int iterations = 0;
  int krylov_iters = 0;
  double residual_sup = 0.0;
  bool converged = false;
};

/// Newton iteration at a fixed datum until ‖residual‖∞ ≤ newton_tol. Errors end the
/// iteration with converged = false instead of propagating.
NewtonOutcome newton_solve(const ScalarField& u0, const ScalarField& F, const SolverConfig& cfg);

/// Throws NormalizationError unless |∫e^F dV / volume - 1| ≤ 1e-10.
void require_normalized(const ScalarField& F);

/// Full continuation solve. Throws NormalizationError or ContinuationStalled.
SolveReport solve(const ScalarField& F, const SolverConfig& cfg);

/// Newton directly at τ = 1 from `initial` (projected to mean zero). Throws ContinuationStalled
/// if Newton does not converge from there.
SolveReport solve_from(const ScalarField& F, const SolverConfig& cfg, const ScalarField& initial);

}  // namespace ktcy::solver
