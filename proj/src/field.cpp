#include "ktcy/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/kernels.hpp"
#include "ktcy/spectral.hpp"

namespace ktcy {

GridSpec::GridSpec(int nx, int ny, int nt, double lx, double ly, double lt) : n_{nx, ny, nt}, l_{lx, ly, lt} {
  for (int n : n_)
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("grid sample counts must be even and >= 4, got " + describe());
  for (double l : l_)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("grid periods must be positive, got " + describe());
}

std::string GridSpec::describe() const {
  std::ostringstream s;
  s << n_[0] << "x" << n_[1] << "x" << n_[2] << " on [" << l_[0] << ", " << l_[1] << ", " << l_[2] << "]";
  return s.str();
}

ScalarField::ScalarField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field has " + std::to_string(values_.size()) + " values, grid " +
                                grid_.describe() + " needs " + std::to_string(grid_.size()));
  for (std::size_t n = 0; n < values_.size(); ++n)
    if (!std::isfinite(values_[n])) throw NonFiniteValue("non-finite field value at flat index " + std::to_string(n));
}

ScalarField ScalarField::constant(GridSpec grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grid " + a.describe() + " vs " + b.describe());
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field +");
  kernels::active().axpy(1.0, other.data(), data(), size());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field -");
  for (std::size_t n = 0; n < size(); ++n) values_[n] -= other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field *");
  for (std::size_t n = 0; n < size(); ++n) values_[n] *= other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  kernels::active().scale(a, data(), size());
  return *this;
}

ScalarField& ScalarField::operator+=(double c) {
  kernels::active().shift(c, data(), size());
  return *this;
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out(grid_);
  std::transform(values_.begin(), values_.end(), out.values_.begin(), f);
  return out;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField sample(const PointFunction& f, const GridSpec& grid) {
  ScalarField u(grid);
  const double hx = grid.spacing(Axis::x), hy = grid.spacing(Axis::y), ht = grid.spacing(Axis::t);
  for (int k = 0; k < grid.nt(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const double v = f(i * hx, j * hy, k * ht);
        if (!std::isfinite(v))
          throw NonFiniteValue("non-finite sample at grid index (" + std::to_string(i) + ", " + std::to_string(j) +
                               ", " + std::to_string(k) + ")");
        u(i, j, k) = v;
      }
  return u;
}

ScalarField derivative(const ScalarField& u, Axis axis, int order) {
  using spectral::Multiplier;
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  static constexpr Multiplier first[] = {Multiplier::dx, Multiplier::dy, Multiplier::dt};
  static constexpr Multiplier second[] = {Multiplier::dxx, Multiplier::dyy, Multiplier::dtt};
  const Multiplier m = (order == 1 ? first : second)[static_cast<int>(axis)];
  return spectral::synthesize(spectral::forward(u), spectral::multiplier(u.grid(), m));
}

Jet jet(const ScalarField& u) {
  using spectral::Multiplier;
  const spectral::Spectrum s = spectral::forward(u);
  auto d = [&](Multiplier m) { return spectral::synthesize(s, spectral::multiplier(u.grid(), m)); };
  return Jet{d(Multiplier::dx),  d(Multiplier::dy),  d(Multiplier::dt),  d(Multiplier::dxx),
             d(Multiplier::dyy), d(Multiplier::dtt), d(Multiplier::dxy), d(Multiplier::dxt)};
}

double integrate(const ScalarField& u) {
  return kernels::active().sum(u.data(), u.size()) * u.grid().volume() / static_cast<double>(u.size());
}

double mean(const ScalarField& u) { return integrate(u) / u.grid().volume(); }

ScalarField project_mean_zero(const ScalarField& u) {
  ScalarField out = u;
  out += -mean(u);
  return out;
}

double sup_norm(const ScalarField& u) { return kernels::active().max_abs(u.data(), u.size()); }

double l2_norm(const ScalarField& u) {
  const double sq = kernels::active().dot(u.data(), u.data(), u.size());
  return std::sqrt(sq * u.grid().volume() / static_cast<double>(u.size()));
}

double l2_norm_spectral(const ScalarField& u) {
  const spectral::Spectrum s = spectral::forward(u);
  const int nx = u.grid().nx();
  const int hx = nx / 2 + 1;
  double acc = 0.0;
  for (int it = 0; it < u.grid().nt(); ++it)
    for (int iy = 0; iy < u.grid().ny(); ++iy)
      for (int ix = 0; ix < hx; ++ix) {
        // Interior x modes stand for themselves and their conjugate partner.
        const double weight = (ix == 0 || ix == nx / 2) ? 1.0 : 2.0;
        acc += weight * std::norm(s.coefficients()[s.index(ix, iy, it)]);
      }
  const double n = static_cast<double>(u.size());
  return std::sqrt(acc / (n * n) * u.grid().volume());
}

FieldNorms norms(const ScalarField& u) {
  const Jet d = jet(u);
  FieldNorms out;
  out.sup = sup_norm(u);
  out.l2 = l2_norm(u);
  double grad_sup2 = 0.0, grad_sum = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    const double g2 = d.ux[n] * d.ux[n] + d.uy[n] * d.uy[n] + d.ut[n] * d.ut[n];
    grad_sup2 = std::max(grad_sup2, g2);
    grad_sum += g2;
  }
  out.grad_sup = std::sqrt(grad_sup2);
  out.grad_l2 = std::sqrt(grad_sum * u.grid().volume() / static_cast<double>(u.size()));
  return out;
}

namespace {

// Per-axis interpolation basis at coordinate c: entry m is the basis function of
// storage index m; the Nyquist index uses cos so the interpolant is real.
std::vector<std::complex<double>> axis_basis(int n, double period, double c) {
  std::vector<std::complex<double>> b(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double phase = 2.0 * std::numbers::pi * spectral::signed_mode(m, n) * c / period;
    b[m] = (m == n / 2) ? std::complex<double>(std::cos(phase), 0.0) : std::polar(1.0, phase);
  }
  return b;
}

}  // namespace

double evaluate_at(const ScalarField& u, double x, double y, double t) {
  const GridSpec& g = u.grid();
  const std::vector<spectral::Complex> c = spectral::full_forward(u);
  const auto bx = axis_basis(g.nx(), g.lx(), x);
  const auto by = axis_basis(g.ny(), g.ly(), y);
  const auto bt = axis_basis(g.nt(), g.lt(), t);
  std::complex<double> acc = 0.0;
  std::size_t n = 0;
  for (int it = 0; it < g.nt(); ++it)
    for (int iy = 0; iy < g.ny(); ++iy) {
      std::complex<double> line = 0.0;
      for (int ix = 0; ix < g.nx(); ++ix, ++n) line += c[n] * bx[ix];
      acc += line * by[iy] * bt[it];
    }
  return acc.real() / static_cast<double>(g.size());
}

namespace {

// Where source storage index m lands on a target axis of nt samples, with weights.
// The interpolant's mode k evaluated on the target grid only depends on k mod nt;
// a source Nyquist mode is the cosine pair ±n/2 with half weight each.
struct Landing {
  int index[2];
  double weight[2];
  int count;
};

Landing land(int m, int ns, int nt) {
  auto wrap = [nt](int k) { return ((k % nt) + nt) % nt; };
  if (ns == nt) return {{m, 0}, {1.0, 0.0}, 1};
  if (m == ns / 2) return {{wrap(ns / 2), wrap(-ns / 2)}, {0.5, 0.5}, 2};
  return {{wrap(spectral::signed_mode(m, ns)), 0}, {1.0, 0.0}, 1};
}

}  // namespace

ScalarField resample(const ScalarField& u, const GridSpec& target) {
  const GridSpec& g = u.grid();
  if (g.lx() != target.lx() || g.ly() != target.ly() || g.lt() != target.lt())
    throw GridMismatch("resample needs equal periods: " + g.describe() + " vs " + target.describe());
  if (g == target) return u;
  const std::vector<spectral::Complex> src = spectral::full_forward(u);
  std::vector<spectral::Complex> dst(target.size(), 0.0);
  const double scale = static_cast<double>(target.size()) / static_cast<double>(g.size());
  std::size_t n = 0;
  for (int it = 0; it < g.nt(); ++it) {
    const Landing lt = land(it, g.nt(), target.nt());
    for (int iy = 0; iy < g.ny(); ++iy) {
      const Landing ly = land(iy, g.ny(), target.ny());
      for (int ix = 0; ix < g.nx(); ++ix, ++n) {
        const Landing lx = land(ix, g.nx(), target.nx());
        for (int a = 0; a < lt.count; ++a)
          for (int b = 0; b < ly.count; ++b)
            for (int c = 0; c < lx.count; ++c)
              dst[target.index(lx.index[c], ly.index[b], lt.index[a])] +=
                  src[n] * (scale * lt.weight[a] * ly.weight[b] * lx.weight[c]);
      }
    }
  }
  return spectral::full_inverse_real(target, std::move(dst));
}

ScalarField random_band_limited(const GridSpec& grid, int max_mode, double amplitude, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  struct Mode {
    int kx, ky, kt;
    double a, b;
  };
  std::vector<Mode> modes;
  // Half of the integer lattice: each ±k pair once.
  for (int kt = -max_mode; kt <= max_mode; ++kt)
    for (int ky = -max_mode; ky <= max_mode; ++ky)
      for (int kx = 0; kx <= max_mode; ++kx) {
        if (kx == 0 && (ky < 0 || (ky == 0 && kt <= 0))) continue;
        const double a = coef(rng), b = coef(rng);
        modes.push_back({kx, ky, kt, a, b});
      }
  const double two_pi = 2.0 * std::numbers::pi;
  ScalarField u = sample(
      [&](double x, double y, double t) {
        double v = 0.0;
        for (const Mode& m : modes) {
          const double ph = two_pi * (m.kx * x / grid.lx() + m.ky * y / grid.ly() + m.kt * t / grid.lt());
          v += m.a * std::cos(ph) + m.b * std::sin(ph);
        }
        return v;
      },
      grid);
  const double s = sup_norm(u);
  if (s > 0.0) u *= amplitude / s;
  return project_mean_zero(u);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_field(std::ostream& out, const ScalarField& u) {
  const GridSpec& g = u.grid();
  out << g.nx() << ' ' << g.ny() << ' ' << g.nt() << ' ' << format_double(g.lx()) << ' ' << format_double(g.ly())
      << ' ' << format_double(g.lt()) << '\n';
  for (double v : u.values()) out << format_double(v) << '\n';
}

namespace {

double parse_double(const std::string& token, const char* what) {
  double v = 0.0;
  const auto r = std::from_chars(token.data(), token.data() + token.size(), v);
  if (r.ec != std::errc() || r.ptr != token.data() + token.size())
    throw ParseError(std::string("bad ") + what + " '" + token + "' in field dump");
  return v;
}

}  // namespace

ScalarField read_field(std::istream& in) {
  int nx = 0, ny = 0, nt = 0;
  std::string lx, ly, lt;
  if (!(in >> nx >> ny >> nt >> lx >> ly >> lt)) throw ParseError("field dump header must be 'nx ny nt Lx Ly Lt'");
  GridSpec grid(nx, ny, nt, parse_double(lx, "period"), parse_double(ly, "period"), parse_double(lt, "period"));
  std::vector<double> values;
  values.reserve(grid.size());
  std::string token;
  while (values.size() < grid.size() && in >> token) values.push_back(parse_double(token, "value"));
  if (values.size() != grid.size())
    throw ParseError("field dump has " + std::to_string(values.size()) + " values, expected " +
                     std::to_string(grid.size()));
  return ScalarField(grid, std::move(values));
}

void write_field_file(const std::string& path, const ScalarField& u) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_field(out, u);
  if (!out) throw IoError("write failed for '" + path + "'");
}

ScalarField read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return read_field(in);
  } catch (const ParseError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

}  // namespace ktcy
