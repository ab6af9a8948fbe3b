#include "ktcy/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/spectral.hpp"

namespace ktcy::rotation {

RationalAngle::RationalAngle(int m, int n) : m_(m), n_(n) {
  if (m == 0 && n == 0) throw std::invalid_argument("rational angle needs m^2 + n^2 > 0");
  if (std::gcd(m, n) != 1) {
    std::ostringstream msg;
    msg << "rational angle (" << m << ", " << n << ") is not in lowest terms";
    throw std::invalid_argument(msg.str());
  }
}

double RationalAngle::period() const { return std::sqrt(static_cast<double>(m_) * m_ + static_cast<double>(n_) * n_); }
double RationalAngle::cos() const { return m_ / period(); }
double RationalAngle::sin() const { return n_ / period(); }
double RationalAngle::theta() const { return std::atan2(static_cast<double>(n_), static_cast<double>(m_)); }

std::string RationalAngle::describe() const {
  std::ostringstream s;
  s << m_ << "," << n_;
  return s.str();
}

namespace {

bool unit_box(const GridSpec& g) { return g.lx() == 1.0 && g.ly() == 1.0 && g.lt() == 1.0; }

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

// Storage index of signed mode k on an axis with n samples, or -1 if |k| > n/2.
int storage(int k, int n) {
  if (2 * std::abs(k) > n) return -1;
  return k >= 0 ? k : k + n;
}

}  // namespace

GridSpec rotated_grid(const GridSpec& base, const RationalAngle& angle) {
  if (!unit_box(base)) throw GridMismatch("rotation needs a base grid on the unit box, got " + base.describe());
  const int am = std::abs(angle.m()), an = std::abs(angle.n());
  const double L = angle.period();
  return GridSpec(am * base.nx() + an * base.ny(), an * base.nx() + am * base.ny(), base.nt(), L, L, 1.0);
}

ScalarField pullback_datum(const ScalarField& F, const RationalAngle& angle, const GridSpec& grid) {
  const GridSpec& src = F.grid();
  if (!unit_box(src)) throw GridMismatch("pullback_datum needs F on the unit box, got " + src.describe());
  const double L = angle.period();
  if (!close(grid.lx(), L) || !close(grid.ly(), L) || grid.lt() != 1.0) {
    std::ostringstream msg;
    msg << "cell grid " << grid.describe() << " does not have periods (" << L << ", " << L << ", 1) for angle ("
        << angle.describe() << ")";
    throw GridMismatch(msg.str());
  }

  const std::vector<spectral::Complex> in = spectral::full_forward(F);
  double peak = 0.0;
  for (const auto& c : in) peak = std::max(peak, std::abs(c));
  const double negligible = 1e-14 * std::max(peak, 1e-300);

  std::vector<spectral::Complex> out(grid.size());
  const double scale = static_cast<double>(grid.size()) / static_cast<double>(src.size());
  const int m = angle.m(), n = angle.n();

  // A Nyquist index stands for cos, i.e. half of the +n/2 mode plus half of the -n/2 mode.
  auto variants = [](int idx, int count, int (&k)[2], double (&w)[2]) {
    const int s = spectral::signed_mode(idx, count);
    if (2 * idx == count) {
      k[0] = s, k[1] = -s, w[0] = w[1] = 0.5;
      return 2;
    }
    k[0] = s, w[0] = 1.0;
    return 1;
  };

  for (int it = 0; it < src.nt(); ++it)
    for (int iy = 0; iy < src.ny(); ++iy)
      for (int ix = 0; ix < src.nx(); ++ix) {
        const spectral::Complex c = in[static_cast<std::size_t>(ix) + src.nx() * (iy + static_cast<std::size_t>(src.ny()) * it)];
        if (c == spectral::Complex(0.0)) continue;
        int kx[2], ky[2], kt[2];
        double wx[2], wy[2], wt[2];
        const int nx_v = variants(ix, src.nx(), kx, wx);
        const int ny_v = variants(iy, src.ny(), ky, wy);
        const int nt_v = variants(it, src.nt(), kt, wt);
        for (int a = 0; a < nx_v; ++a)
          for (int b = 0; b < ny_v; ++b)
            for (int d = 0; d < nt_v; ++d) {
              const int kp = m * kx[a] - n * ky[b];
              const int kq = n * kx[a] + m * ky[b];
              const int sp = storage(kp, grid.nx()), sq = storage(kq, grid.ny()), st = storage(kt[d], grid.nt());
              if (sp < 0 || sq < 0 || st < 0) {
                if (std::abs(c) <= negligible) continue;
                std::ostringstream msg;
                msg << "mode (" << kx[a] << ", " << ky[b] << ", " << kt[d] << ") maps to (" << kp << ", " << kq << ", "
                    << kt[d] << "), which grid " << grid.describe() << " does not resolve";
                throw PreconditionError(msg.str());
              }
              out[static_cast<std::size_t>(sp) + grid.nx() * (sq + static_cast<std::size_t>(grid.ny()) * st)] +=
                  c * (wx[a] * wy[b] * wt[d] * scale);
            }
      }
  return spectral::full_inverse_real(grid, std::move(out));
}

double evaluate_original(const ScalarField& v, const RationalAngle& angle, double x, double y, double t) {
  const double c = angle.cos(), s = angle.sin();
  return evaluate_at(v, c * x - s * y, s * x + c * y, t);
}

RotatedSolveReport solve_rotated(const ScalarField& F, const RationalAngle& angle, solver::SolverConfig cfg) {
  solver::require_normalized(F);
  const GridSpec grid = rotated_grid(F.grid(), angle);
  ScalarField G = pullback_datum(F, angle, grid);

  const double L = angle.period();
  const double cell_normalization = integrate(G.map([](double g) { return std::exp(g); }));
  const double ratio = cell_normalization / (L * L);
  if (std::fabs(ratio - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "rotated datum integrates to " << cell_normalization << " over the cell, expected " << L * L;
    throw NormalizationError(msg.str());
  }
  if (ratio != 1.0) G += -std::log(ratio);

  cfg.grid = grid;
  RotatedSolveReport out{solver::solve(G, cfg), angle.m(), angle.n(), L, cell_normalization, 0.0, false};
  out.sup_vp = sup_norm(derivative(out.report.u, Axis::x, 1));
  out.vp_bound_ok = out.sup_vp <= out.period + 1e-8;
  return out;
}

}  // namespace ktcy::rotation
