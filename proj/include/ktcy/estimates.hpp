#pragma once

// Runtime audit of the a-priori estimates satisfied by solutions of
// ma_lhs(u) = e^F. Every check reports lhs, rhs and a margin that is
// non-negative when the inequality holds.
//
// L² quantities use the normalized measure dV / volume, which is dV itself on
// the unit box and keeps the bounds meaningful on enlarged periodic cells.

#include <string>
#include <vector>

#include "ktcy/field.hpp"

namespace ktcy::solver {
struct SolverConfig;
}

namespace ktcy::estimates {

struct EstimateCheck {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool strict = false;  // strict checks need margin > 0; the rest margin ≥ -tol
  bool pass = false;
};

struct EstimateReport {
  std::vector<EstimateCheck> checks;
  bool informative = false;  // u does not pass the solution test; margins are for information only
  double residual_sup = 0.0;
  double solution_threshold = 0.0;
  // Bounds without a computable constant, recorded as-is.
  double sup_u = 0.0;
  double sup_laplacian = 0.0;

  bool all_pass() const;
  const EstimateCheck& check(const std::string& name) const;
};

/// tol = 1e-8 · (1 + |rhs|)
double check_tolerance(double rhs);

/// Runs checks (a)-(j) on u and the datum F:
///   a  sup|u_x| ≤ L_x                 f  ‖∇u‖² ≤ ¼‖u‖² + (5/2) sup|1+e^F| ‖u‖
///   b  min u_xx > -1                   g  (2π/L_max)² ‖u‖² ≤ ‖∇u‖²
///   c  min(u_yy+u_tt+u_t) > -1         h  ∫ u u_t = 0
///   d  min(Δu+u_t+2) ≥ 2 min e^{F/2}   i  inf Λ(u) > 0
///   e  ‖u‖ ≤ sup|1+e^F|                j  mean(ma_lhs(u) - e^F) = 0
EstimateReport verify(const ScalarField& u, const ScalarField& F);

struct UniquenessResult {
  double max_pairwise_sup_diff = 0.0;
  std::vector<ScalarField> solutions;
};

/// Solves from `trials` distinct starts (continuation from 0, then warm starts at
/// perturbed copies of the first solution) and reports the worst pairwise sup difference.
UniquenessResult uniqueness_probe(const ScalarField& F, const solver::SolverConfig& cfg, int trials);

}  // namespace ktcy::estimates
