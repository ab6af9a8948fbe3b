#pragma once

// Rotated symplectic forms ω_θ with tan θ = n/m. The change of variables
//   x = cosθ p + sinθ q,  y = -sinθ p + cosθ q
// turns the equation for ω_θ into the base equation in (p, q, t), posed on the
// cell [0,L)² × [0,1) with L = sqrt(m² + n²). That cell covers the unit torus
// m² + n² times, so ∫e^G over it is L².

#include <string>

#include "ktcy/field.hpp"
#include "ktcy/solver.hpp"

namespace ktcy::rotation {

class RationalAngle {
 public:
  /// Throws std::invalid_argument unless gcd(|m|, |n|) = 1 and m² + n² > 0.
  RationalAngle(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  double period() const;  // L
  double cos() const;
  double sin() const;
  double theta() const;
  std::string describe() const;

 private:
  int m_, n_;
};

/// Cell grid for a base grid on the unit box: counts (|m| nx + |n| ny, |n| nx + |m| ny, nt),
/// periods (L, L, 1). Every base mode lands on a resolved cell mode.
GridSpec rotated_grid(const GridSpec& base, const RationalAngle& angle);

/// G(p, q, t) = F(x(p, q), y(p, q), t), evaluated exactly by relabeling Fourier modes:
/// base mode (kx, ky, kt) becomes (m kx - n ky, n kx + m ky, kt) on the cell.
/// Throws GridMismatch if F is not on the unit box or the grid periods are not (L, L, 1),
/// and PreconditionError if a non-negligible mode is not resolved by the grid.
ScalarField pullback_datum(const ScalarField& F, const RationalAngle& angle, const GridSpec& grid);

/// u(x, y, t) from a cell solution v by point evaluation at the rotated coordinates.
double evaluate_original(const ScalarField& v, const RationalAngle& angle, double x, double y, double t);

struct RotatedSolveReport {
  solver::SolveReport report;
  int m = 0, n = 0;
  double period = 1.0;              // L
  double cell_normalization = 0.0;  // ∫e^G dV over the cell, before the discrete correction
  double sup_vp = 0.0;
  bool vp_bound_ok = false;         // sup|v_p| ≤ L + 1e-8
};

/// Solves the rotated equation for unit-box datum F on rotated_grid(F.grid(), angle).
/// cfg.grid is replaced by the cell grid. Throws NormalizationError if F is not
/// normalized or if ∫e^G deviates from L² by more than 1e-8 relative; smaller deviations,
/// which come from the spectral tail of e^F, are removed by a constant shift of G.
RotatedSolveReport solve_rotated(const ScalarField& F, const RationalAngle& angle, solver::SolverConfig cfg);

}  // namespace ktcy::rotation
