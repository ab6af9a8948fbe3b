#pragma once

// Invariant forms on the Kodaira-Thurston manifold Nil³/Γ × S¹ with coframe
//   e1 = dy, e2 = dx, e3 = dt, e4 = dz - x dy,   de1 = de2 = de3 = 0, de4 = e12.
// Forms are S¹-invariant: their coefficients are fields on the (x, y, t) torus.
// The dual frame acts on such coefficients as e_1 = ∂y, e_2 = ∂x, e_3 = ∂t, e_4 = 0.
//
// Two-forms are stored on the i<j basis (e42 is kept as -e24). The reference
// volume is Ω² = 2 e1234 with Ω = e13 + e42.

#include <array>
#include <string>

#include "ktcy/field.hpp"

namespace ktcy::geometry {

struct OneForm {
  ScalarField a1, a2, a3, a4;

  explicit OneForm(const GridSpec& g) : a1(g), a2(g), a3(g), a4(g) {}
  OneForm(ScalarField c1, ScalarField c2, ScalarField c3, ScalarField c4);
  const GridSpec& grid() const { return a1.grid(); }
};

struct TwoForm {
  ScalarField c12, c13, c14, c23, c24, c34;

  explicit TwoForm(const GridSpec& g) : c12(g), c13(g), c14(g), c23(g), c24(g), c34(g) {}
  const GridSpec& grid() const { return c12.grid(); }

  /// Coefficient on e^{ij}, 1 ≤ i < j ≤ 4.
  const ScalarField& coefficient(int i, int j) const;
  ScalarField& coefficient(int i, int j);

  TwoForm& operator+=(const TwoForm& other);

  static constexpr std::array<const char*, 6> labels = {"e12", "e13", "e14", "e23", "e24", "e34"};
};

struct ThreeForm {
  ScalarField c123, c124, c134, c234;
  explicit ThreeForm(const GridSpec& g) : c123(g), c124(g), c134(g), c234(g) {}
};

/// Ω = e13 + e42
TwoForm reference_form(const GridSpec& grid);

/// α = d^c u - u e1 with d^c u = J du, i.e. α = -(u_t + u) e1 + u_y e3 - u_x e4.
OneForm alpha_from_u(const ScalarField& u);

/// dα = Σ_ij (e_j a_i) e^j∧e^i + a4 e12, collected on i<j.
TwoForm exterior_d(const OneForm& alpha);

/// d of a two-form; the only frame contribution is d(e34) = -e123.
ThreeForm exterior_d(const TwoForm& omega);

/// (Jω)(X, Y) = ω(JX, JY) with Je1 = e3, Je2 = -e4, Je3 = -e1, Je4 = e2.
TwoForm apply_j(const TwoForm& omega);

struct JInvariance {
  double max_violation = 0.0;  // sup|c14 + c23| ∨ sup|c12 + c34|
};
JInvariance check_j_invariance(const TwoForm& omega);

/// ω∧ω / Ω² = c12 c34 - c13 c24 + c14 c23.
ScalarField wedge_ratio(const TwoForm& omega);

/// ω_θ = (cosθ e1 + sinθ e2)∧e3 - (-sinθ e1 + cosθ e2)∧e4.
TwoForm omega_theta(const GridSpec& grid, double theta);

/// Symmetric 4x4 matrix of fields for the metric g̃ of Ω + dα(u) in the e1..e4 frame.
class MetricField {
 public:
  MetricField(const GridSpec& grid);
  const ScalarField& operator()(int row, int col) const { return entries_[slot(row, col)]; }
  ScalarField& operator()(int row, int col) { return entries_[slot(row, col)]; }
  const GridSpec& grid() const { return entries_[0].grid(); }

  ScalarField trace() const;
  /// Smallest eigenvalue per point. g̃ is Hermitian for the induced complex structure, so its
  /// spectrum is {λ-, λ-, λ+, λ+} with λ± the roots of λ² - (g11+g22)λ + det of the 2x2 block.
  ScalarField min_eigenvalue() const;

 private:
  static int slot(int row, int col);  // rows and columns are 1-based
  std::array<ScalarField, 10> entries_;
};

MetricField metric_field(const ScalarField& u);

void write_two_form(const std::string& directory, const std::string& prefix, const TwoForm& omega);
TwoForm read_two_form(const std::string& directory, const std::string& prefix);

}  // namespace ktcy::geometry
