#pragma once

// The reduced Calabi-Yau operator on the torus
//   ma_lhs(u) = (u_xx + 1)(u_yy + u_tt + u_t + 1) - u_xy² - u_xt²,
// its continuity path, linearization and ellipticity diagnostics.

#include "ktcy/field.hpp"

namespace ktcy::pde {

ScalarField ma_lhs(const ScalarField& u);

/// ma_lhs(u) - e^F
ScalarField residual(const ScalarField& u, const ScalarField& F);

/// F_τ = log(1 - τ + τ e^F), τ ∈ [0, 1].
ScalarField continuity_datum(const ScalarField& F, double tau);

/// Lw = P w_xx + Q (w_yy + w_tt) - 2R w_xy - 2S w_xt + Q w_t
struct LinearizedCoeffs {
  ScalarField p;  // u_yy + u_tt + u_t + 1
  ScalarField q;  // u_xx + 1
  ScalarField r;  // u_xy
  ScalarField s;  // u_xt
  const GridSpec& grid() const { return p.grid(); }
};

LinearizedCoeffs linearize(const ScalarField& u);
ScalarField apply_linearized(const LinearizedCoeffs& c, const ScalarField& w);

/// Eigenvalues of the principal symbol matrix
///   [[P, R, S], [R, Q, 0], [S, 0, Q]]
/// from its factored characteristic polynomial (λ - Q)(λ² - (P+Q)λ + PQ - R² - S²).
struct SymbolEigenvalues {
  ScalarField lower;   // λ-
  ScalarField middle;  // Q = u_xx + 1
  ScalarField upper;   // λ+
};
SymbolEigenvalues symbol_eigenvalues(const LinearizedCoeffs& c);

/// Λ(u) = ½(Δu + u_t + 2 - sqrt((Δu + u_t + 2)² - 4e^F)). The square-root argument is
/// clamped at 0 where it is negative, which only happens away from solutions.
struct LambdaField {
  ScalarField lambda;
  bool clamped = false;
};
LambdaField lambda_field(const ScalarField& u, const ScalarField& F);
/// Pointwise form of Λ given the trace Δu + u_t + 2 and e^F.
double lambda_value(double trace, double exp_f, bool* clamped = nullptr);

struct EllipticityReport {
  double min_q = 0.0;          // min(u_xx + 1)
  double min_p = 0.0;          // min(u_yy + u_tt + u_t + 1)
  double min_trace = 0.0;      // min(Δu + u_t + 2)
  double min_lambda = 0.0;     // inf Λ(u) with e^F
  double min_symbol_eig = 0.0; // inf of the smallest symbol eigenvalue, det = PQ - R² - S²
  double min_trace_gap = 0.0;  // min(Δu + u_t + 2 - 2e^{F/2}), pointwise form of the trace bound
  bool sqrt_clamped = false;
  bool u_xx_ok = false;        // u_xx > -1
  bool p_ok = false;           // u_yy + u_tt + u_t > -1
  bool trace_ok = false;       // Δu + u_t + 2 ≥ 2e^{F/2} up to the solution threshold
};

EllipticityReport ellipticity_report(const ScalarField& u, const ScalarField& F);

/// Default solution test threshold: 1e-10 · max(1, sup e^F).
double solution_threshold(const ScalarField& F);

}  // namespace ktcy::pde
