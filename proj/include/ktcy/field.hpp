#pragma once

// Periodic scalar fields on a box torus [0,Lx) x [0,Ly) x [0,Lt).
//
// Values are stored with x fastest, then y, then t:
//   index(i, j, k) = i + nx * (j + ny * k),  sample point (i Lx/nx, j Ly/ny, k Lt/nt).
// The coframe of the Kodaira-Thurston manifold uses e1 = dy, e2 = dx, e3 = dt;
// this library always names axes x, y, t.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ktcy {

enum class Axis { x = 0, y = 1, t = 2 };

class GridSpec {
 public:
  /// Throws std::invalid_argument unless every count is even and ≥ 4 and every period is > 0.
  GridSpec(int nx, int ny, int nt, double lx = 1.0, double ly = 1.0, double lt = 1.0);

  static GridSpec cube(int n) { return GridSpec(n, n, n); }

  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nt() const { return n_[2]; }
  int count(Axis a) const { return n_[static_cast<int>(a)]; }
  double lx() const { return l_[0]; }
  double ly() const { return l_[1]; }
  double lt() const { return l_[2]; }
  double period(Axis a) const { return l_[static_cast<int>(a)]; }

  std::size_t size() const {
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]) *
           static_cast<std::size_t>(n_[2]);
  }
  double volume() const { return l_[0] * l_[1] * l_[2]; }
  double spacing(Axis a) const { return period(a) / count(a); }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(k));
  }

  std::string describe() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::array<int, 3> n_;
  std::array<double, 3> l_;
};

class ScalarField {
 public:
  explicit ScalarField(GridSpec grid);
  /// Throws NonFiniteValue naming the first non-finite index.
  ScalarField(GridSpec grid, std::vector<double> values);

  static ScalarField constant(GridSpec grid, double value);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }

  double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double operator[](std::size_t n) const { return values_[n]; }
  double& operator[](std::size_t n) { return values_[n]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(const ScalarField& other);
  ScalarField& operator*=(double a);
  ScalarField& operator+=(double c);

  /// Applies f to every value.
  ScalarField map(const std::function<double(double)>& f) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Throws GridMismatch unless a and b live on identical grids.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

using PointFunction = std::function<double(double x, double y, double t)>;

ScalarField sample(const PointFunction& f, const GridSpec& grid);

/// Fourier-spectral derivative of order 1 or 2 along one axis. Odd orders
/// drop the Nyquist mode; order 2 keeps it.
ScalarField derivative(const ScalarField& u, Axis axis, int order);

/// All first and second derivatives the Monge-Ampère operator needs, from one forward transform.
struct Jet {
  ScalarField ux, uy, ut;
  ScalarField uxx, uyy, utt;
  ScalarField uxy, uxt;
};
Jet jet(const ScalarField& u);

double integrate(const ScalarField& u);
double mean(const ScalarField& u);
ScalarField project_mean_zero(const ScalarField& u);

struct FieldNorms {
  double sup = 0.0;
  double l2 = 0.0;
  double grad_sup = 0.0;
  double grad_l2 = 0.0;
};
FieldNorms norms(const ScalarField& u);

double sup_norm(const ScalarField& u);
/// sqrt(∫u² dV)
double l2_norm(const ScalarField& u);
/// sqrt(∫u² dV) computed from Fourier coefficients (discrete Parseval).
double l2_norm_spectral(const ScalarField& u);

/// Evaluates the trigonometric interpolant of u at an arbitrary point.
/// Nyquist modes use the symmetric cosine basis.
double evaluate_at(const ScalarField& u, double x, double y, double t);

/// Samples the trigonometric interpolant of u on another grid with the same periods.
ScalarField resample(const ScalarField& u, const GridSpec& target);

/// Band-limited field Σ a cos(2π k·x/L) + b sin(...) over 0 < |k_axis| ≤ max_mode with
/// coefficients drawn uniformly from [-1, 1], then scaled so sup|u| = amplitude. Mean zero.
ScalarField random_band_limited(const GridSpec& grid, int max_mode, double amplitude, unsigned seed);

// Field dump: "nx ny nt Lx Ly Lt" then one value per line, 17 significant digits.
void write_field(std::ostream& out, const ScalarField& u);
ScalarField read_field(std::istream& in);
void write_field_file(const std::string& path, const ScalarField& u);
ScalarField read_field_file(const std::string& path);

/// Shortest decimal text with 17 significant digits; round-trips bitwise.
std::string format_double(double v);

}  // namespace ktcy
