#include "ktcy/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "ktcy/kernels.hpp"

namespace ktcy::spectral {
namespace {

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_forward = nullptr;
  fftw_plan c2c_backward = nullptr;
};

using ShapeKey = std::array<int, 3>;

const Plans& plans_for(const GridSpec& grid) {
  static std::map<ShapeKey, Plans> cache;
  const ShapeKey key{grid.nx(), grid.ny(), grid.nt()};
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int n0 = grid.nt(), n1 = grid.ny(), n2 = grid.nx();
  const std::size_t n_real = grid.size();
  const std::size_t n_half = static_cast<std::size_t>(n0) * n1 * (n2 / 2 + 1);
  std::vector<double> real(n_real);
  std::vector<Complex> half(n_half);
  std::vector<Complex> full_a(n_real), full_b(n_real);
  auto* h = reinterpret_cast<fftw_complex*>(half.data());
  auto* fa = reinterpret_cast<fftw_complex*>(full_a.data());
  auto* fb = reinterpret_cast<fftw_complex*>(full_b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  Plans p;
  p.r2c = fftw_plan_dft_r2c_3d(n0, n1, n2, real.data(), h, flags);
  p.c2r = fftw_plan_dft_c2r_3d(n0, n1, n2, h, real.data(), flags);
  p.c2c_forward = fftw_plan_dft_3d(n0, n1, n2, fa, fb, FFTW_FORWARD, flags);
  p.c2c_backward = fftw_plan_dft_3d(n0, n1, n2, fa, fb, FFTW_BACKWARD, flags);
  return cache.emplace(key, p).first->second;
}

std::vector<double> axis_first(int n, double period, int stored) {
  std::vector<double> k(static_cast<std::size_t>(stored));
  for (int m = 0; m < stored; ++m)
    k[m] = (m == n / 2) ? 0.0 : 2.0 * std::numbers::pi * signed_mode(m, n) / period;
  return k;
}

std::vector<double> axis_second(int n, double period, int stored) {
  std::vector<double> k(static_cast<std::size_t>(stored));
  for (int m = 0; m < stored; ++m) {
    const double w = 2.0 * std::numbers::pi * signed_mode(m, n) / period;
    k[m] = -w * w;
  }
  return k;
}

using GridKey = std::tuple<int, int, int, double, double, double>;

GridKey key_of(const GridSpec& g) { return {g.nx(), g.ny(), g.nt(), g.lx(), g.ly(), g.lt()}; }

struct GridData {
  Wavenumbers k;
  std::map<Multiplier, std::vector<Complex>> multipliers;
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

GridData& grid_data(const GridSpec& grid) {
  static std::map<GridKey, std::unique_ptr<GridData>> cache;
  auto& slot = cache[key_of(grid)];
  if (!slot) {
    slot = std::make_unique<GridData>();
    const int hx = grid.nx() / 2 + 1;
    slot->k.x = {axis_first(grid.nx(), grid.lx(), hx), axis_second(grid.nx(), grid.lx(), hx)};
    slot->k.y = {axis_first(grid.ny(), grid.ly(), grid.ny()), axis_second(grid.ny(), grid.ly(), grid.ny())};
    slot->k.t = {axis_first(grid.nt(), grid.lt(), grid.nt()), axis_second(grid.nt(), grid.lt(), grid.nt())};
  }
  return *slot;
}

std::vector<Complex> build_multiplier(const GridSpec& grid, const Wavenumbers& k, Multiplier which) {
  const int hx = grid.nx() / 2 + 1;
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  std::vector<Complex> out(static_cast<std::size_t>(hx) * grid.ny() * grid.nt());
  const Complex i_unit(0.0, 1.0);
  std::size_t n = 0;
  for (int it = 0; it < grid.nt(); ++it)
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < hx; ++ix, ++n) {
        Complex f;
        switch (which) {
          case Multiplier::identity: f = 1.0; break;
          case Multiplier::dx: f = i_unit * k.x.first[ix]; break;
          case Multiplier::dy: f = i_unit * k.y.first[iy]; break;
          case Multiplier::dt: f = i_unit * k.t.first[it]; break;
          case Multiplier::dxx: f = k.x.second[ix]; break;
          case Multiplier::dyy: f = k.y.second[iy]; break;
          case Multiplier::dtt: f = k.t.second[it]; break;
          case Multiplier::dxy: f = -k.x.first[ix] * k.y.first[iy]; break;
          case Multiplier::dxt: f = -k.x.first[ix] * k.t.first[it]; break;
        }
        out[n] = f * inv_n;
      }
  return out;
}

}  // namespace

Spectrum::Spectrum(GridSpec grid)
    : grid_(grid), data_(static_cast<std::size_t>(grid.nx() / 2 + 1) * grid.ny() * grid.nt()) {}

Spectrum forward(const ScalarField& u) {
  const Plans& p = plans_for(u.grid());
  Spectrum s(u.grid());
  // r2c does not modify its input, but the API takes a non-const pointer.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(u.data()),
                       reinterpret_cast<fftw_complex*>(s.coefficients().data()));
  return s;
}

ScalarField synthesize(const Spectrum& s, std::span<const Complex> multiplier) {
  const Plans& p = plans_for(s.grid());
  std::vector<Complex> work(s.size());
  kernels::active().complex_mul(reinterpret_cast<const double*>(s.coefficients().data()),
                                reinterpret_cast<const double*>(multiplier.data()),
                                reinterpret_cast<double*>(work.data()), s.size());
  ScalarField out(s.grid());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(work.data()), out.data());
  return out;
}

const std::vector<Complex>& multiplier(const GridSpec& grid, Multiplier which) {
  std::lock_guard lock(cache_mutex());
  GridData& d = grid_data(grid);
  auto it = d.multipliers.find(which);
  if (it == d.multipliers.end()) it = d.multipliers.emplace(which, build_multiplier(grid, d.k, which)).first;
  return it->second;
}

const Wavenumbers& wavenumbers(const GridSpec& grid) {
  std::lock_guard lock(cache_mutex());
  return grid_data(grid).k;
}

std::vector<Complex> full_forward(const ScalarField& u) {
  const Plans& p = plans_for(u.grid());
  std::vector<Complex> in(u.size()), out(u.size());
  std::transform(u.values().begin(), u.values().end(), in.begin(), [](double v) { return Complex(v, 0.0); });
  fftw_execute_dft(p.c2c_forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

ScalarField full_inverse_real(const GridSpec& grid, std::vector<Complex> spectrum) {
  const Plans& p = plans_for(grid);
  std::vector<Complex> out(grid.size());
  fftw_execute_dft(p.c2c_backward, reinterpret_cast<fftw_complex*>(spectrum.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  ScalarField u(grid);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t n = 0; n < out.size(); ++n) u[n] = out[n].real() * inv_n;
  return u;
}

}  // namespace ktcy::spectral
