#include "ktcy/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/kernels.hpp"
#include "ktcy/krylov.hpp"
#include "ktcy/spectral.hpp"

namespace ktcy::solver {

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0) || !(krylov_tol > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
  if (newton_max_iters < 1 || krylov_max_iters < 1 || krylov_restart < 1)
    throw std::invalid_argument("solver iteration limits must be positive");
  if (!(tau_initial_step > 0.0 && tau_initial_step <= 1.0) || !(tau_min_step > 0.0 && tau_min_step <= 1.0))
    throw std::invalid_argument("continuation steps must lie in (0, 1]");
  if (damping.enabled && !(damping.backtracking_factor > 0.0 && damping.backtracking_factor < 1.0))
    throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  if (damping.max_backtracks < 0) throw std::invalid_argument("max_backtracks must be non-negative");
}

FourierPreconditioner::FourierPreconditioner(const pde::LinearizedCoeffs& c)
    : grid_(c.grid()), p_bar_(mean(c.p)), q_bar_(mean(c.q)) {
  const spectral::Wavenumbers& k = spectral::wavenumbers(grid_);
  const int hx = grid_.nx() / 2 + 1;
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  inverse_symbol_.resize(static_cast<std::size_t>(hx) * grid_.ny() * grid_.nt());
  std::size_t n = 0;
  for (int it = 0; it < grid_.nt(); ++it)
    for (int iy = 0; iy < grid_.ny(); ++iy)
      for (int ix = 0; ix < hx; ++ix, ++n) {
        if (ix == 0 && iy == 0 && it == 0) {
          inverse_symbol_[n] = 0.0;
          continue;
        }
        const std::complex<double> symbol(p_bar_ * k.x.second[ix] + q_bar_ * (k.y.second[iy] + k.t.second[it]),
                                          q_bar_ * k.t.first[it]);
        inverse_symbol_[n] = inv_n / symbol;
      }
}

ScalarField FourierPreconditioner::apply(const ScalarField& rhs) const {
  require_same_grid(grid_, rhs.grid(), "preconditioner");
  return spectral::synthesize(spectral::forward(rhs), inverse_symbol_);
}

namespace {

void remove_mean(std::span<double> v) {
  const auto& k = kernels::active();
  k.shift(-k.sum(v.data(), v.size()) / static_cast<double>(v.size()), v.data(), v.size());
}

bool admissible(const ScalarField& u, const ScalarField& F) {
  const pde::EllipticityReport e = pde::ellipticity_report(u, F);
  return e.u_xx_ok && e.p_ok;
}

}  // namespace

NewtonStep newton_step(const ScalarField& u, const ScalarField& F_target, const SolverConfig& cfg) {
  require_same_grid(u.grid(), F_target.grid(), "newton_step");
  const pde::EllipticityReport ell = pde::ellipticity_report(u, F_target);
  if (!ell.u_xx_ok || !ell.p_ok) {
    std::ostringstream msg;
    msg << "Newton iterate is not admissible: min(u_xx+1) = " << ell.min_q
        << ", min(u_yy+u_tt+u_t+1) = " << ell.min_p;
    throw EllipticityLost(msg.str());
  }

  const ScalarField r = pde::residual(u, F_target);
  const double r_sup = sup_norm(r);
  ScalarField rhs = -1.0 * r;
  remove_mean(rhs.values());
  if (r_sup == 0.0) return {u, 0, 0.0, 0.0, 0.0};

  const pde::LinearizedCoeffs coeffs = pde::linearize(u);
  const FourierPreconditioner precond(coeffs);
  const GridSpec grid = u.grid();
  auto op = [&](std::span<const double> in, std::span<double> out) {
    const ScalarField w(grid, std::vector<double>(in.begin(), in.end()));
    const ScalarField lw = pde::apply_linearized(coeffs, w);
    std::copy(lw.values().begin(), lw.values().end(), out.begin());
    remove_mean(out);
  };
  auto pre = [&](std::span<const double> in, std::span<double> out) {
    const ScalarField z = precond.apply(ScalarField(grid, std::vector<double>(in.begin(), in.end())));
    std::copy(z.values().begin(), z.values().end(), out.begin());
  };
  const krylov::GmresResult lin =
      krylov::gmres(op, pre, rhs.values(), {cfg.krylov_tol, cfg.krylov_max_iters, cfg.krylov_restart});
  if (!lin.converged) {
    std::ostringstream msg;
    msg << "GMRES reached relative residual " << lin.relative_residual << " after " << lin.iterations
        << " iterations (tolerance " << cfg.krylov_tol << ")";
    throw KrylovStalled(msg.str());
  }
  ScalarField w(grid, lin.x);
  const double w_sup = sup_norm(w);

  double s = 1.0;
  const int tries = cfg.damping.enabled ? cfg.damping.max_backtracks + 1 : 1;
  for (int attempt = 0; attempt < tries; ++attempt, s *= cfg.damping.backtracking_factor) {
    ScalarField trial = u;
    kernels::active().axpy(s, w.data(), trial.data(), trial.size());
    trial = project_mean_zero(trial);
    if (!admissible(trial, F_target)) continue;
    const double trial_sup = sup_norm(pde::residual(trial, F_target));
    if (!cfg.damping.enabled || trial_sup < r_sup) return {std::move(trial), lin.iterations, s * w_sup, s, trial_sup};
  }
  std::ostringstream msg;
  msg << "no step length in {1, " << cfg.damping.backtracking_factor << ", ...} reduced the residual below "
      << r_sup << " while staying admissible";
  throw LineSearchFailed(msg.str());
}

NewtonOutcome newton_solve(const ScalarField& u0, const ScalarField& F, const SolverConfig& cfg) {
  NewtonOutcome out{project_mean_zero(u0), 0, 0, 0.0, false};
  out.residual_sup = sup_norm(pde::residual(out.u, F));
  while (out.residual_sup > cfg.newton_tol) {
    if (out.iterations >= cfg.newton_max_iters) return out;
    try {
      NewtonStep step = newton_step(out.u, F, cfg);
      out.u = std::move(step.u_next);
      out.residual_sup = step.residual_sup;
      out.krylov_iters += step.krylov_iters;
      ++out.iterations;
    } catch (const EllipticityLost&) {
      return out;
    } catch (const KrylovStalled&) {
      return out;
    } catch (const LineSearchFailed&) {
      return out;
    }
  }
  out.converged = true;
  return out;
}

void require_normalized(const ScalarField& F) {
  const double integral = integrate(F.map([](double f) { return std::exp(f); }));
  const double volume = F.grid().volume();
  if (std::fabs(integral / volume - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "datum is not normalized: integral of e^F dV = " << integral << ", box volume = " << volume
        << " (use renormalize)";
    throw NormalizationError(msg.str());
  }
}

namespace {

double lambda_min(const ScalarField& u, const ScalarField& F) { return pde::ellipticity_report(u, F).min_lambda; }

SolveReport finish(ScalarField u, const ScalarField& F, ContinuationTrace trace, int newton_total, int krylov_total) {
  SolveReport report{std::move(u), std::move(trace), {}, {}, 0.0, newton_total, krylov_total, false};
  report.residual_sup = sup_norm(pde::residual(report.u, F));
  report.ellipticity = pde::ellipticity_report(report.u, F);
  report.estimates = estimates::verify(report.u, F);
  report.converged = true;
  return report;
}

}  // namespace

SolveReport solve(const ScalarField& F, const SolverConfig& cfg) {
  cfg.validate();
  require_same_grid(cfg.grid, F.grid(), "solve");
  require_normalized(F);

  ScalarField u(F.grid());
  ContinuationTrace trace;
  // u = 0 solves the τ = 0 problem.
  trace.push_back({0.0, 0, 0.0, 1.0, true});
  int newton_total = 0, krylov_total = 0;

  const double initial_residual = sup_norm(pde::residual(u, F));
  if (initial_residual <= cfg.newton_tol) {
    trace.push_back({1.0, 0, initial_residual, lambda_min(u, F), true});
    return finish(std::move(u), F, std::move(trace), 0, 0);
  }

  double tau = 0.0;
  double step = cfg.tau_initial_step;
  while (tau < 1.0) {
    const double tau_try = std::min(1.0, tau + step);
    const ScalarField F_tau = pde::continuity_datum(F, tau_try);
    NewtonOutcome n = newton_solve(u, F_tau, cfg);
    newton_total += n.iterations;
    krylov_total += n.krylov_iters;
    if (n.converged) {
      trace.push_back({tau_try, n.iterations, n.residual_sup, lambda_min(n.u, F_tau), true});
      u = std::move(n.u);
      tau = tau_try;
      if (n.iterations <= 3) step = std::min(1.0, 2.0 * step);
    } else {
      trace.push_back({tau_try, n.iterations, n.residual_sup, 0.0, false});
      step *= 0.5;
      if (step < cfg.tau_min_step) {
        std::ostringstream msg;
        msg << "continuation stalled at tau = " << tau << ": step " << step << " fell below " << cfg.tau_min_step;
        throw ContinuationStalled(msg.str());
      }
    }
  }
  return finish(std::move(u), F, std::move(trace), newton_total, krylov_total);
}

SolveReport solve_from(const ScalarField& F, const SolverConfig& cfg, const ScalarField& initial) {
  cfg.validate();
  require_same_grid(cfg.grid, F.grid(), "solve_from");
  require_same_grid(F.grid(), initial.grid(), "solve_from");
  require_normalized(F);
  NewtonOutcome n = newton_solve(initial, F, cfg);
  if (!n.converged) {
    std::ostringstream msg;
    msg << "Newton from the supplied start did not converge (residual " << n.residual_sup << " after "
        << n.iterations << " iterations)";
    throw ContinuationStalled(msg.str());
  }
  ContinuationTrace trace{{1.0, n.iterations, n.residual_sup, lambda_min(n.u, F), true}};
  return finish(std::move(n.u), F, std::move(trace), n.iterations, n.krylov_iters);
}

}  // namespace ktcy::solver
