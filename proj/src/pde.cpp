#include "ktcy/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/kernels.hpp"
#include "ktcy/spectral.hpp"

namespace ktcy::pde {
namespace {

// The six derivatives entering ma_lhs and L, from one forward transform.
struct SecondJet {
  ScalarField uxx, uyy, utt, ut, uxy, uxt;

  kernels::JetView view() const {
    return {uxx.data(), uyy.data(), utt.data(), ut.data(), uxy.data(), uxt.data()};
  }
};

SecondJet second_jet(const ScalarField& u) {
  using spectral::Multiplier;
  const spectral::Spectrum s = spectral::forward(u);
  auto d = [&](Multiplier m) { return spectral::synthesize(s, spectral::multiplier(u.grid(), m)); };
  return {d(Multiplier::dxx), d(Multiplier::dyy), d(Multiplier::dtt),
          d(Multiplier::dt),  d(Multiplier::dxy), d(Multiplier::dxt)};
}

double field_min(const ScalarField& f) { return *std::min_element(f.values().begin(), f.values().end()); }

}  // namespace

ScalarField ma_lhs(const ScalarField& u) {
  const SecondJet d = second_jet(u);
  ScalarField out(u.grid());
  kernels::active().ma_lhs(d.view(), out.data(), out.size());
  return out;
}

ScalarField residual(const ScalarField& u, const ScalarField& F) {
  require_same_grid(u.grid(), F.grid(), "residual");
  ScalarField r = ma_lhs(u);
  for (std::size_t n = 0; n < r.size(); ++n) r[n] -= std::exp(F[n]);
  return r;
}

ScalarField continuity_datum(const ScalarField& F, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("continuity parameter must lie in [0, 1]");
  if (tau == 1.0) return F;
  return F.map([tau](double f) { return std::log((1.0 - tau) + tau * std::exp(f)); });
}

LinearizedCoeffs linearize(const ScalarField& u) {
  const SecondJet d = second_jet(u);
  ScalarField p = d.uyy + d.utt;
  p += d.ut;
  p += 1.0;
  ScalarField q = d.uxx;
  q += 1.0;
  return {std::move(p), std::move(q), d.uxy, d.uxt};
}

ScalarField apply_linearized(const LinearizedCoeffs& c, const ScalarField& w) {
  require_same_grid(c.grid(), w.grid(), "apply_linearized");
  const SecondJet d = second_jet(w);
  ScalarField out(w.grid());
  kernels::active().linearized({c.p.data(), c.q.data(), c.r.data(), c.s.data()}, d.view(), out.data(), out.size());
  return out;
}

SymbolEigenvalues symbol_eigenvalues(const LinearizedCoeffs& c) {
  const GridSpec& g = c.grid();
  SymbolEigenvalues e{ScalarField(g), c.q, ScalarField(g)};
  for (std::size_t n = 0; n < c.p.size(); ++n) {
    const double half_sum = 0.5 * (c.p[n] + c.q[n]);
    const double half_gap = 0.5 * (c.p[n] - c.q[n]);
    // (P+Q)² - 4(PQ - R² - S²) = (P-Q)² + 4R² + 4S² ≥ 0, so the root is always real.
    const double root = std::sqrt(half_gap * half_gap + c.r[n] * c.r[n] + c.s[n] * c.s[n]);
    e.lower[n] = half_sum - root;
    e.upper[n] = half_sum + root;
  }
  return e;
}

double lambda_value(double trace, double exp_f, bool* clamped) {
  const double disc = trace * trace - 4.0 * exp_f;
  if (disc < 0.0) {
    if (clamped) *clamped = true;
    return 0.5 * trace;
  }
  const double root = std::sqrt(disc);
  // Λ·λ+ = e^F; dividing avoids cancellation when e^F is small.
  if (trace > 0.0) return 2.0 * exp_f / (trace + root);
  return 0.5 * (trace - root);
}

LambdaField lambda_field(const ScalarField& u, const ScalarField& F) {
  require_same_grid(u.grid(), F.grid(), "lambda_field");
  const LinearizedCoeffs c = linearize(u);
  LambdaField out{ScalarField(u.grid()), false};
  for (std::size_t n = 0; n < u.size(); ++n)
    out.lambda[n] = lambda_value(c.p[n] + c.q[n], std::exp(F[n]), &out.clamped);
  return out;
}

EllipticityReport ellipticity_report(const ScalarField& u, const ScalarField& F) {
  require_same_grid(u.grid(), F.grid(), "ellipticity_report");
  const LinearizedCoeffs c = linearize(u);
  const SymbolEigenvalues eig = symbol_eigenvalues(c);
  EllipticityReport r;
  r.min_q = field_min(c.q);
  r.min_p = field_min(c.p);
  r.min_symbol_eig = std::min(field_min(eig.lower), r.min_q);
  r.min_trace = std::numeric_limits<double>::infinity();
  r.min_lambda = std::numeric_limits<double>::infinity();
  r.min_trace_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < u.size(); ++n) {
    const double trace = c.p[n] + c.q[n];
    const double ef = std::exp(F[n]);
    r.min_trace = std::min(r.min_trace, trace);
    r.min_lambda = std::min(r.min_lambda, lambda_value(trace, ef, &r.sqrt_clamped));
    r.min_trace_gap = std::min(r.min_trace_gap, trace - 2.0 * std::exp(0.5 * F[n]));
  }
  r.u_xx_ok = r.min_q > 0.0;
  r.p_ok = r.min_p > 0.0;
  r.trace_ok = r.min_trace_gap >= -solution_threshold(F);
  return r;
}

double solution_threshold(const ScalarField& F) {
  const double sup_exp = std::exp(*std::max_element(F.values().begin(), F.values().end()));
  return 1e-10 * std::max(1.0, sup_exp);
}

}  // namespace ktcy::pde
