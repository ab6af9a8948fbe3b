#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "ktcy/geometry.hpp"
#include "ktcy/pde.hpp"
#include "oracles.hpp"

using namespace ktcy;
using namespace ktcy::geometry;
using std::numbers::pi;

namespace {

using Mat4 = oracle::Matrix<4>;

// Antisymmetric matrix W_ij = ω(e_i, e_j) at one grid point.
Mat4 two_form_matrix(const TwoForm& w, std::size_t n) {
  Mat4 m{};
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      m[i - 1][j - 1] = w.coefficient(i, j)[n];
      m[j - 1][i - 1] = -w.coefficient(i, j)[n];
    }
  return m;
}

// Columns of J on the dual frame: J e_1 = -e_3, J e_2 = e_4, J e_3 = e_1, J e_4 = -e_2.
constexpr Mat4 kJ = {{{0, 0, 1, 0}, {0, 0, 0, -1}, {-1, 0, 0, 0}, {0, 1, 0, 0}}};

}  // namespace

TEST_CASE("reference form and rotated family") {
  const GridSpec g = GridSpec::cube(4);
  const TwoForm omega = reference_form(g);
  CHECK(sup_norm(wedge_ratio(omega) - ScalarField::constant(g, 1.0)) == 0.0);
  CHECK(check_j_invariance(omega).max_violation == 0.0);
  const ThreeForm d = exterior_d(omega);
  CHECK(sup_norm(d.c123) + sup_norm(d.c124) + sup_norm(d.c134) + sup_norm(d.c234) == 0.0);

  const TwoForm w0 = omega_theta(g, 0.0);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(sup_norm(w0.coefficient(i, j) - omega.coefficient(i, j)) < 1e-15);

  // θ = π/2 gives e14 + e23.
  const TwoForm w90 = omega_theta(g, pi / 2);
  CHECK(w90.c14[0] == doctest::Approx(1.0));
  CHECK(w90.c23[0] == doctest::Approx(1.0));
  CHECK(std::fabs(w90.c13[0]) < 1e-15);
  CHECK(std::fabs(w90.c24[0]) < 1e-15);

  for (double theta : {0.3, 1.1, 2.5}) {
    const TwoForm w = omega_theta(g, theta);
    CHECK(sup_norm(wedge_ratio(w) - ScalarField::constant(g, 1.0)) < 1e-15);
    const ThreeForm dw = exterior_d(w);
    CHECK(sup_norm(dw.c123) + sup_norm(dw.c124) + sup_norm(dw.c134) + sup_norm(dw.c234) == 0.0);
  }
}

TEST_CASE("J on two-forms is an involution and fixes dα") {
  const GridSpec g(8, 8, 8);
  TwoForm w(g);
  int seed = 1;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) w.coefficient(i, j) = random_band_limited(g, 2, 1.0, seed++);
  const TwoForm jj = apply_j(apply_j(w));
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(sup_norm(jj.coefficient(i, j) - w.coefficient(i, j)) == 0.0);
  CHECK(check_j_invariance(w).max_violation > 0.1);

  const ScalarField u = random_band_limited(GridSpec::cube(16), 3, 0.05, 11);
  const TwoForm da = exterior_d(alpha_from_u(u));
  CHECK(check_j_invariance(da).max_violation < 1e-12);
}

TEST_CASE("dα has the expected coefficients and is closed") {
  const ScalarField u = random_band_limited(GridSpec(16, 12, 8), 3, 0.1, 5);
  const Jet d = jet(u);
  const TwoForm da = exterior_d(alpha_from_u(u));
  CHECK(sup_norm(da.c13 - (d.uyy + d.utt + d.ut)) < 1e-11);
  CHECK(sup_norm(da.c24 + d.uxx) < 1e-11);
  CHECK(sup_norm(da.c23 - d.uxy) < 1e-11);
  CHECK(sup_norm(da.c14 + d.uxy) < 1e-11);
  CHECK(sup_norm(da.c12 - d.uxt) < 1e-11);
  CHECK(sup_norm(da.c34 + d.uxt) < 1e-11);

  const ThreeForm dd = exterior_d(da);
  CHECK(sup_norm(dd.c123) + sup_norm(dd.c124) + sup_norm(dd.c134) + sup_norm(dd.c234) < 1e-10);
}

TEST_CASE("wedge ratio of Ω + dα equals the reduced operator") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ScalarField u = random_band_limited(GridSpec::cube(16), 3, 0.05, seed);
    TwoForm w = reference_form(u.grid());
    w += exterior_d(alpha_from_u(u));
    CHECK(sup_norm(wedge_ratio(w) - pde::ma_lhs(u)) < 1e-12);
  }
}

TEST_CASE("metric from ω(J·, ·) matches metric_field and its closed-form spectrum") {
  const ScalarField u = random_band_limited(GridSpec::cube(8), 2, 0.04, 9);
  TwoForm w = reference_form(u.grid());
  w += exterior_d(alpha_from_u(u));
  const MetricField gm = metric_field(u);
  const ScalarField lmin = gm.min_eigenvalue();
  const ScalarField tr = gm.trace();
  const Jet d = jet(u);
  for (std::size_t n = 0; n < u.size(); n += 7) {
    const Mat4 W = two_form_matrix(w, n);
    Mat4 G{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) G[i][j] += kJ[k][i] * W[k][j];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(std::fabs(G[i][j] - G[j][i]) < 1e-12);
        CHECK(std::fabs(G[i][j] - gm(i + 1, j + 1)[n]) < 1e-12);
      }
    const auto eig = oracle::jacobi_eigenvalues<4>(G);
    CHECK(*std::min_element(eig.begin(), eig.end()) == doctest::Approx(lmin[n]).epsilon(1e-12));
    CHECK(tr[n] == doctest::Approx(2 * (d.uxx[n] + d.uyy[n] + d.utt[n] + d.ut[n] + 2)).epsilon(1e-13));
  }
}

TEST_CASE("two-form dump round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ktcy_test_geometry";
  std::filesystem::create_directories(dir);
  const ScalarField u = random_band_limited(GridSpec::cube(8), 2, 0.1, 4);
  const TwoForm da = exterior_d(alpha_from_u(u));
  write_two_form(dir.string(), "da", da);
  const TwoForm back = read_two_form(dir.string(), "da");
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(sup_norm(back.coefficient(i, j) - da.coefficient(i, j)) == 0.0);
  std::filesystem::remove_all(dir);
}
