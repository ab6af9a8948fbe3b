#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ktcy/errors.hpp"
#include "ktcy/krylov.hpp"
#include "ktcy/pde.hpp"
#include "ktcy/run.hpp"
#include "ktcy/solver.hpp"

using namespace ktcy;
using namespace ktcy::solver;
using std::numbers::pi;

namespace {

SolverConfig config(int n) {
  SolverConfig cfg;
  cfg.grid = GridSpec::cube(n);
  return cfg;
}

ScalarField manufactured_u(const GridSpec& g) {
  return sample([](double x, double y, double t) { return 0.01 * std::sin(2 * pi * x) + 0.005 * std::cos(2 * pi * y) * std::sin(2 * pi * t); }, g);
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.newton_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.tau_initial_step = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.damping.backtracking_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("preconditioner inverts the flat operator exactly") {
  const GridSpec g = GridSpec::cube(16);
  const pde::LinearizedCoeffs flat = pde::linearize(ScalarField(g));
  const FourierPreconditioner m(flat);
  CHECK(m.p_bar() == 1.0);
  CHECK(m.q_bar() == 1.0);
  const ScalarField w = random_band_limited(g, 4, 1.0, 3);
  const ScalarField lw = pde::apply_linearized(flat, w);
  CHECK(sup_norm(m.apply(lw) - w) < 1e-13);

  // GMRES with this preconditioner converges in one iteration on the flat operator.
  auto op = [&](std::span<const double> in, std::span<double> out) {
    const ScalarField r = pde::apply_linearized(flat, ScalarField(g, {in.begin(), in.end()}));
    std::copy(r.values().begin(), r.values().end(), out.begin());
  };
  auto pre = [&](std::span<const double> in, std::span<double> out) {
    const ScalarField r = m.apply(ScalarField(g, {in.begin(), in.end()}));
    std::copy(r.values().begin(), r.values().end(), out.begin());
  };
  const krylov::GmresResult res = krylov::gmres(op, pre, lw.values(), {1e-12, 10, 10});
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(sup_norm(ScalarField(g, res.x) - w) < 1e-12);
}

TEST_CASE("GMRES handles a non-symmetric system without preconditioning") {
  // Upper bidiagonal 50x50: 2 on the diagonal, 1 above.
  const int n = 50;
  auto op = [n](std::span<const double> in, std::span<double> out) {
    for (int i = 0; i < n; ++i) out[i] = 2 * in[i] + (i + 1 < n ? in[i + 1] : 0.0);
  };
  std::vector<double> x_true(n), b(n);
  for (int i = 0; i < n; ++i) x_true[i] = std::sin(i + 1.0);
  op(x_true, b);
  const krylov::GmresResult r = krylov::gmres(op, {}, b, {1e-12, 200, 20});
  CHECK(r.converged);
  for (int i = 0; i < n; ++i) CHECK(r.x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
}

TEST_CASE("Newton step") {
  const SolverConfig cfg = config(16);
  const GridSpec& g = cfg.grid;
  const NewtonStep zero = newton_step(ScalarField(g), ScalarField(g), cfg);
  CHECK(sup_norm(zero.u_next) == 0.0);
  CHECK(zero.step_norm == 0.0);

  const ScalarField F = run::manufacture(manufactured_u(g)).F;
  const ScalarField F_tau = pde::continuity_datum(F, 0.1);
  const double r0 = sup_norm(pde::residual(ScalarField(g), F_tau));
  const NewtonStep s = newton_step(ScalarField(g), F_tau, cfg);
  CHECK(s.residual_sup * 10 <= r0);
  CHECK(std::fabs(mean(s.u_next)) < 1e-16);

  const ScalarField bad = sample([](double x, double, double) { return 0.05 * std::sin(2 * pi * x); }, g);
  CHECK_THROWS_AS(newton_step(bad, ScalarField(g), cfg), EllipticityLost);
}

TEST_CASE("Newton residuals decrease strictly at fixed datum") {
  const SolverConfig cfg = config(16);
  const ScalarField F = run::manufacture(manufactured_u(cfg.grid)).F;
  ScalarField u(cfg.grid);
  double prev = sup_norm(pde::residual(u, F));
  for (int k = 0; k < 8 && prev > cfg.newton_tol; ++k) {
    const NewtonStep s = newton_step(u, F, cfg);
    CHECK(s.residual_sup < prev);
    CHECK(std::fabs(mean(s.u_next)) < 1e-16);
    prev = s.residual_sup;
    u = s.u_next;
  }
  CHECK(prev <= cfg.newton_tol);
}

TEST_CASE("solve with zero datum") {
  const SolveReport r = solve(ScalarField(GridSpec::cube(16)), config(16));
  CHECK(r.converged);
  CHECK(sup_norm(r.u) == 0.0);
  CHECK(r.newton_iters_total == 0);
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace.back().tau == 1.0);
  CHECK(r.estimates.all_pass());
}

TEST_CASE("solve recovers a manufactured solution") {
  const SolverConfig cfg = config(16);
  const run::Manufactured m = run::manufacture(manufactured_u(cfg.grid));
  const SolveReport r = solve(m.F, cfg);
  CHECK(r.converged);
  CHECK(sup_norm(r.u - m.u_star) <= 1e-8);
  CHECK(r.residual_sup <= cfg.newton_tol);
  CHECK(std::fabs(mean(r.u)) < 1e-16);
  CHECK(r.estimates.all_pass());
  CHECK(!r.estimates.informative);

  double last_tau = -1.0;
  for (const auto& rec : r.trace)
    if (rec.accepted) {
      CHECK(rec.tau > last_tau);
      last_tau = rec.tau;
    }
  CHECK(last_tau == 1.0);

  // Warm start at the answer converges immediately to the same field.
  const SolveReport again = solve_from(m.F, cfg, r.u);
  CHECK(sup_norm(again.u - r.u) < 1e-12);
}

TEST_CASE("solve rejects unnormalized data and wrong grids") {
  const SolverConfig cfg = config(8);
  CHECK_THROWS_AS(solve(ScalarField::constant(cfg.grid, std::log(2.0)), cfg), NormalizationError);
  CHECK_THROWS_AS(solve(ScalarField(GridSpec::cube(16)), cfg), GridMismatch);
}

TEST_CASE("continuation reports a stall when steps underflow") {
  SolverConfig cfg = config(16);
  cfg.newton_max_iters = 1;
  cfg.tau_min_step = 0.2;
  const ScalarField F = run::renormalize(
      sample([](double x, double y, double t) { return 0.8 * std::sin(2 * pi * x) * std::sin(2 * pi * y) * std::cos(2 * pi * t); }, cfg.grid));
  CHECK_THROWS_AS(solve(F, cfg), ContinuationStalled);
}
