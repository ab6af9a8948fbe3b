#include "ktcy/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/pde.hpp"
#include "ktcy/solver.hpp"

namespace ktcy::estimates {

double check_tolerance(double rhs) { return 1e-8 * (1.0 + std::fabs(rhs)); }

bool EstimateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const EstimateCheck& c) { return c.pass; });
}

const EstimateCheck& EstimateReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no estimate check named " + name);
}

namespace {

double field_min(const ScalarField& u) { return *std::min_element(u.values().begin(), u.values().end()); }

// ∫ a b dV / volume
double normalized_inner(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s / static_cast<double>(a.size());
}

// lhs ≤ rhs
EstimateCheck upper(std::string name, std::string statement, double lhs, double rhs) {
  EstimateCheck c{std::move(name), std::move(statement), lhs, rhs, rhs - lhs, false, false};
  c.pass = c.margin >= -check_tolerance(rhs);
  return c;
}

// lhs > rhs, no tolerance
EstimateCheck strict_lower(std::string name, std::string statement, double lhs, double rhs) {
  EstimateCheck c{std::move(name), std::move(statement), lhs, rhs, lhs - rhs, true, false};
  c.pass = c.margin > 0.0;
  return c;
}

// lhs ≥ rhs
EstimateCheck lower(std::string name, std::string statement, double lhs, double rhs) {
  EstimateCheck c{std::move(name), std::move(statement), lhs, rhs, lhs - rhs, false, false};
  c.pass = c.margin >= -check_tolerance(rhs);
  return c;
}

// lhs = 0, margin -|lhs|
EstimateCheck vanishes(std::string name, std::string statement, double lhs) {
  EstimateCheck c{std::move(name), std::move(statement), lhs, 0.0, -std::fabs(lhs), false, false};
  c.pass = c.margin >= -check_tolerance(0.0);
  return c;
}

}  // namespace

EstimateReport verify(const ScalarField& u, const ScalarField& F) {
  require_same_grid(u.grid(), F.grid(), "verify");
  const GridSpec& g = u.grid();
  const Jet d = jet(u);
  const pde::EllipticityReport ell = pde::ellipticity_report(u, F);

  EstimateReport report;
  const ScalarField res = pde::residual(u, F);
  report.residual_sup = sup_norm(res);
  report.solution_threshold = pde::solution_threshold(F);
  report.informative = !(report.residual_sup <= report.solution_threshold);
  report.sup_u = sup_norm(u);
  report.sup_laplacian = sup_norm(d.uxx + d.uyy + d.utt);

  double sup_one_plus_ef = 0.0, min_ef_half = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < F.size(); ++n) {
    sup_one_plus_ef = std::max(sup_one_plus_ef, std::fabs(1.0 + std::exp(F[n])));
    min_ef_half = std::min(min_ef_half, std::exp(0.5 * F[n]));
  }
  const double u_l2 = std::sqrt(normalized_inner(u, u));
  const double grad_l2_sq = normalized_inner(d.ux, d.ux) + normalized_inner(d.uy, d.uy) + normalized_inner(d.ut, d.ut);
  const double l_max = std::max({g.lx(), g.ly(), g.lt()});
  const double poincare = std::pow(2.0 * std::numbers::pi / l_max, 2);

  ScalarField trace = d.uxx + d.uyy + d.utt + d.ut;
  trace += 2.0;

  auto& c = report.checks;
  c.push_back(upper("a_sup_ux", "sup|u_x| <= L_x", sup_norm(d.ux), g.lx()));
  c.push_back(strict_lower("b_min_uxx", "min u_xx > -1", field_min(d.uxx), -1.0));
  c.push_back(strict_lower("c_min_p", "min(u_yy+u_tt+u_t) > -1", field_min(d.uyy + d.utt + d.ut), -1.0));
  c.push_back(lower("d_trace", "min(lap u+u_t+2) >= 2 min e^(F/2)", field_min(trace), 2.0 * min_ef_half));
  c.push_back(upper("e_l2_u", "||u|| <= sup|1+e^F|", u_l2, sup_one_plus_ef));
  c.push_back(upper("f_energy", "||grad u||^2 <= ||u||^2/4 + (5/2) sup|1+e^F| ||u||", grad_l2_sq,
                    0.25 * u_l2 * u_l2 + 2.5 * sup_one_plus_ef * u_l2));
  c.push_back(upper("g_poincare", "(2pi/L_max)^2 ||u||^2 <= ||grad u||^2", poincare * u_l2 * u_l2, grad_l2_sq));
  c.push_back(vanishes("h_u_ut", "int u u_t dV = 0", normalized_inner(u, d.ut) * g.volume()));
  c.push_back(strict_lower("i_lambda", "inf Lambda(u) > 0", ell.min_lambda, 0.0));
  c.push_back(vanishes("j_mean_residual", "mean(ma_lhs(u) - e^F) = 0", mean(res)));
  return report;
}

UniquenessResult uniqueness_probe(const ScalarField& F, const solver::SolverConfig& cfg, int trials) {
  if (trials < 2) throw PreconditionError("uniqueness_probe needs at least 2 trials, got " + std::to_string(trials));
  UniquenessResult out;
  out.solutions.push_back(solver::solve(F, cfg).u);
  for (int k = 1; k < trials; ++k) {
    ScalarField start = out.solutions.front() + random_band_limited(F.grid(), 2, 1e-4, static_cast<unsigned>(k));
    out.solutions.push_back(solver::solve_from(F, cfg, start).u);
  }
  for (std::size_t a = 0; a < out.solutions.size(); ++a)
    for (std::size_t b = a + 1; b < out.solutions.size(); ++b)
      out.max_pairwise_sup_diff = std::max(out.max_pairwise_sup_diff, sup_norm(out.solutions[a] - out.solutions[b]));
  return out;
}

}  // namespace ktcy::estimates
