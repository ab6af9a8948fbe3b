// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ktcy/errors.hpp"
#include "ktcy/estimates.hpp"
#include "ktcy/expression.hpp"
#include "ktcy/geometry.hpp"
#include "ktcy/kernels.hpp"
#include "ktcy/pde.hpp"
#include "ktcy/rotation.hpp"
#include "ktcy/run.hpp"
#include "ktcy/solver.hpp"

using namespace ktcy;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kTrivialSup = 1e-12;
constexpr double kTrivialSeconds = 1.0;
constexpr double kRecoverySup = 1e-8;
constexpr double kRecoverySeconds = 60.0;
constexpr double kIdentityTol = 1e-12;
constexpr double kMeanTol = 1e-12;
constexpr double kFdMinOrder = 1.5;  // observed order per decade of ε that counts as O(ε²)
constexpr double kAuditTol = 1e-8;
constexpr double kRefinementTol = 1e-6;
constexpr double kUniquenessTol = 1e-8;
constexpr double kRotationIdentityTol = 1e-10;
constexpr double kVpTol = 1e-8;
constexpr double kCellTol = 1e-10;
constexpr double kZeroTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kLambdaTol = 1e-14;

const char* kManufactured = "0.01*sin(2*pi*x) + 0.02*cos(2*pi*y)*sin(2*pi*t)";
const char* kManufacturedSmall = "0.01*sin(2*pi*x) + 0.005*cos(2*pi*y)*sin(2*pi*t)";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

solver::SolverConfig config(const GridSpec& g) {
  solver::SolverConfig cfg;
  cfg.grid = g;
  return cfg;
}

ScalarField field(const std::string& expr, const GridSpec& g) { return expression::Expression::parse(expr).sample(g); }

std::vector<ScalarField> random_corpus() {
  std::vector<ScalarField> c;
  for (unsigned seed = 1; seed <= 20; ++seed) c.push_back(random_band_limited(GridSpec::cube(16), 3, 0.05, seed));
  return c;
}

Outcome trivial_solve() {
  const GridSpec g = GridSpec::cube(16);
  const auto t0 = std::chrono::steady_clock::now();
  const solver::SolveReport r = solver::solve(ScalarField(g), config(g));
  const double secs = seconds_since(t0);
  const double sup = sup_norm(r.u);
  return {r.converged && sup <= kTrivialSup && secs <= kTrivialSeconds,
          "sup|u| = " + fmt(sup) + ", converged = " + (r.converged ? "true" : "false") + ", " + fmt(secs) + " s"};
}

Outcome recovery(const std::string& u_expr) {
  const GridSpec g = GridSpec::cube(32);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const run::Manufactured m = run::manufacture(field(u_expr, g));
    const solver::SolveReport r = solver::solve(m.F, config(g));
    const double secs = seconds_since(t0);
    const double err = sup_norm(r.u - m.u_star);
    const bool ok = r.converged && err <= kRecoverySup && r.estimates.all_pass() && secs <= kRecoverySeconds;
    return {ok, "sup|u - u*| = " + fmt(err) + ", estimates " + (r.estimates.all_pass() ? "pass" : "FAIL") + ", " +
                    fmt(secs) + " s"};
  } catch (const std::exception& e) {
    return {false, std::string("manufacture/solve raised: ") + e.what()};
  }
}

Outcome wedge_identity() {
  double worst = 0.0;
  for (const ScalarField& u : random_corpus()) {
    geometry::TwoForm w = geometry::reference_form(u.grid());
    w += geometry::exterior_d(geometry::alpha_from_u(u));
    worst = std::max(worst, sup_norm(geometry::wedge_ratio(w) - pde::ma_lhs(u)));
  }
  return {worst <= kIdentityTol, "max sup|wedge_ratio - ma_lhs| = " + fmt(worst) + " over 20 fields"};
}

Outcome mean_identity() {
  double worst = 0.0;
  for (const ScalarField& u : random_corpus()) worst = std::max(worst, std::fabs(mean(pde::ma_lhs(u)) - 1.0));
  return {worst <= kMeanTol, "max |mean(ma_lhs) - 1| = " + fmt(worst) + " over 20 fields"};
}

Outcome finite_differences() {
  const double eps[] = {1e-3, 1e-4, 1e-5};
  bool ok = true;
  std::string detail;
  for (unsigned seed = 1; seed <= 3; ++seed) {
    const ScalarField u = random_band_limited(GridSpec::cube(16), 3, 0.05, seed);
    const ScalarField w = random_band_limited(GridSpec::cube(16), 3, 0.05, 50 + seed);
    const ScalarField lw = pde::apply_linearized(pde::linearize(u), w);
    double err[3];
    for (int k = 0; k < 3; ++k) {
      const ScalarField fd = (1.0 / (2 * eps[k])) * (pde::ma_lhs(u + eps[k] * w) - pde::ma_lhs(u - eps[k] * w));
      err[k] = sup_norm(fd - lw) / sup_norm(lw);
    }
    detail += (seed > 1 ? "; " : "") + std::string("err = ") + fmt(err[0]) + ", " + fmt(err[1]) + ", " + fmt(err[2]);
    for (int k = 0; k + 1 < 3; ++k) {
      const double order = std::log10(err[k] / err[k + 1]) / std::log10(eps[k] / eps[k + 1]);
      ok = ok && std::isfinite(order) && order >= kFdMinOrder;
    }
  }
  return {ok, detail};
}

Outcome audit() {
  const GridSpec g = GridSpec::cube(16);
  const std::vector<std::string> data = {
      "0.3*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)",
      "0.5*sin(2*pi*x)",
      "0.5*cos(2*pi*y)",
      "0.5*sin(2*pi*t)",
      "0.4*cos(2*pi*(x + y))",
      "0.3*sin(2*pi*x)*cos(2*pi*t) + 0.2*cos(2*pi*y)",
      "0.6*sin(2*pi*(x - t))",
      "0.25*cos(4*pi*x) + 0.25*sin(2*pi*(y + t))",
      "0.8*sin(2*pi*x)*sin(2*pi*y)",
      "0.45*cos(2*pi*x)*cos(2*pi*y)*cos(2*pi*t) + 0.2*sin(4*pi*t)",
  };
  int passed = 0;
  double min_a = 1e300, min_d = 1e300, max_F = 0.0;
  std::string failures;
  for (const auto& expr : data) {
    const ScalarField F = run::renormalize(field(expr, g));
    max_F = std::max(max_F, sup_norm(F));
    if (sup_norm(F) > 1.0) {
      failures += " [|F| > 1: " + expr + "]";
      continue;
    }
    try {
      const solver::SolveReport r = solver::solve(F, config(g));
      const auto& a = r.estimates.check("a_sup_ux");
      const auto& d = r.estimates.check("d_trace");
      min_a = std::min(min_a, a.margin);
      min_d = std::min(min_d, d.margin);
      const bool ok = r.converged && r.estimates.all_pass() && !r.estimates.informative &&
                      a.lhs <= 1.0 + kAuditTol && d.lhs >= d.rhs - kAuditTol;
      if (ok)
        ++passed;
      else
        failures += " [" + expr + "]";
    } catch (const std::exception& e) {
      failures += " [" + expr + ": " + e.what() + "]";
    }
  }
  return {passed == static_cast<int>(data.size()),
          std::to_string(passed) + "/10 data pass (a)-(j), max|F| = " + fmt(max_F) + ", min margin a = " + fmt(min_a) +
              ", d = " + fmt(min_d) + failures};
}

Outcome refinement() {
  const std::string expr = "0.3*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)";
  const GridSpec coarse = GridSpec::cube(16), fine = GridSpec::cube(32);
  const solver::SolveReport a = solver::solve(run::renormalize(field(expr, coarse)), config(coarse));
  const solver::SolveReport b = solver::solve(run::renormalize(field(expr, fine)), config(fine));
  const double diff = sup_norm(resample(a.u, fine) - b.u);
  return {diff <= kRefinementTol, "sup|I(u16) - u32| = " + fmt(diff)};
}

Outcome uniqueness() {
  const GridSpec g = GridSpec::cube(32);
  const run::Manufactured m = run::manufacture(field(kManufacturedSmall, g));
  const estimates::UniquenessResult r = estimates::uniqueness_probe(m.F, config(g), 3);
  return {r.max_pairwise_sup_diff <= kUniquenessTol,
          "max pairwise sup diff = " + fmt(r.max_pairwise_sup_diff) + " (3 starts, datum from u* = " + kManufacturedSmall + ")"};
}

Outcome rotation_identity() {
  const GridSpec g = GridSpec::cube(16);
  const ScalarField F = run::renormalize(field("0.3*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)", g));
  const rotation::RotatedSolveReport r = rotation::solve_rotated(F, rotation::RationalAngle(1, 0), config(g));
  const solver::SolveReport b = solver::solve(F, config(g));
  const double diff = sup_norm(r.report.u - b.u);
  return {diff <= kRotationIdentityTol, "sup|v - u| = " + fmt(diff)};
}

Outcome rotation_bound() {
  const GridSpec g = GridSpec::cube(32);
  const run::Manufactured m = run::manufacture(field(kManufacturedSmall, g));
  const rotation::RotatedSolveReport r = rotation::solve_rotated(m.F, rotation::RationalAngle(1, 1), config(g));
  const double cell_err = std::fabs(r.cell_normalization - 2.0);
  const rotation::RotatedSolveReport z =
      rotation::solve_rotated(ScalarField(g), rotation::RationalAngle(0, 1), config(g));
  const double zero = sup_norm(z.report.u);
  const bool ok = r.report.converged && r.sup_vp <= std::sqrt(2.0) + kVpTol && cell_err <= kCellTol &&
                  z.report.converged && zero <= kZeroTol;
  return {ok, "(1,1): sup|v_p| = " + fmt(r.sup_vp) + ", |cell - 2| = " + fmt(cell_err) +
                  "; (0,1), F = 0: sup|v| = " + fmt(zero)};
}

Outcome trace_formula() {
  double worst = 0.0;
  for (const ScalarField& u : random_corpus()) {
    const Jet d = jet(u);
    ScalarField expect = d.uxx + d.uyy + d.utt + d.ut;
    expect += 2.0;
    worst = std::max(worst, sup_norm(geometry::metric_field(u).trace() - 2.0 * expect));
  }
  return {worst <= kTraceTol, "max sup|tr g - 2(lap u + u_t + 2)| = " + fmt(worst)};
}

Outcome lambda_closed_form() {
  const GridSpec g = GridSpec::cube(8);
  const pde::LambdaField l = pde::lambda_field(ScalarField(g), ScalarField::constant(g, std::log(0.25)));
  const double err = sup_norm(l.lambda - ScalarField::constant(g, (2.0 - std::sqrt(3.0)) / 2.0));
  return {err <= kLambdaTol && !l.clamped, "sup|Lambda - (2 - sqrt 3)/2| = " + fmt(err)};
}

}  // namespace

int main() {
  std::cout << "kernels: " << kernels::active().name << '\n';
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 trivial solve", trivial_solve},
      {"C2 manufactured recovery", [] { return recovery(kManufactured); }},
      {"C3 wedge identity", wedge_identity},
      {"C4 mean-residual identity", mean_identity},
      {"C5 linearization vs finite differences", finite_differences},
      {"C6 a-priori audit", audit},
      {"C7 grid convergence", refinement},
      {"C8 empirical uniqueness", uniqueness},
      {"C9 rotation identity", rotation_identity},
      {"C10 rotation bound", rotation_bound},
      {"C11 trace formula", trace_formula},
      {"C12 Lambda closed form", lambda_closed_form},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  const Outcome extra = recovery(kManufacturedSmall);
  std::cout << "INFO C2 with u* = " << kManufacturedSmall << ": " << (extra.pass ? "pass" : "fail") << ", "
            << extra.detail << std::endl;
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
