#include "ktcy/geometry.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ktcy/errors.hpp"

namespace ktcy::geometry {
namespace {

// e_k applied to an S¹-invariant coefficient; k is the 1-based frame index.
ScalarField frame_derivative(const ScalarField& a, int k) {
  switch (k) {
    case 1: return derivative(a, Axis::y, 1);
    case 2: return derivative(a, Axis::x, 1);
    case 3: return derivative(a, Axis::t, 1);
    default: return ScalarField(a.grid());
  }
}

// Adds s·f·e^i∧e^j to ω for any i ≠ j.
void accumulate(TwoForm& omega, int i, int j, double s, const ScalarField& f) {
  if (i == j) return;
  if (i > j) {
    std::swap(i, j);
    s = -s;
  }
  ScalarField& c = omega.coefficient(i, j);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] += s * f[n];
}

ScalarField& three_coefficient(ThreeForm& w, int i, int j, int k) {
  if (i == 1 && j == 2 && k == 3) return w.c123;
  if (i == 1 && j == 2 && k == 4) return w.c124;
  if (i == 1 && j == 3 && k == 4) return w.c134;
  if (i == 2 && j == 3 && k == 4) return w.c234;
  throw std::logic_error("three-form index out of order");
}

// Adds s·f·e^i∧e^j∧e^k, sorting the indices with the permutation sign.
void accumulate(ThreeForm& w, int i, int j, int k, double s, const ScalarField& f) {
  if (i == j || j == k || i == k) return;
  int idx[3] = {i, j, k};
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < 2; ++a)
      if (idx[a] > idx[a + 1]) {
        std::swap(idx[a], idx[a + 1]);
        s = -s;
      }
  ScalarField& c = three_coefficient(w, idx[0], idx[1], idx[2]);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] += s * f[n];
}

struct JImage {
  int index;
  double sign;
};
// Je1 = e3, Je2 = -e4, Je3 = -e1, Je4 = e2
constexpr JImage j_table[5] = {{0, 0.0}, {3, 1.0}, {4, -1.0}, {1, -1.0}, {2, 1.0}};

}  // namespace

OneForm::OneForm(ScalarField c1, ScalarField c2, ScalarField c3, ScalarField c4)
    : a1(std::move(c1)), a2(std::move(c2)), a3(std::move(c3)), a4(std::move(c4)) {
  require_same_grid(a1.grid(), a2.grid(), "OneForm");
  require_same_grid(a1.grid(), a3.grid(), "OneForm");
  require_same_grid(a1.grid(), a4.grid(), "OneForm");
}

const ScalarField& TwoForm::coefficient(int i, int j) const {
  return const_cast<TwoForm*>(this)->coefficient(i, j);
}

ScalarField& TwoForm::coefficient(int i, int j) {
  switch (10 * i + j) {
    case 12: return c12;
    case 13: return c13;
    case 14: return c14;
    case 23: return c23;
    case 24: return c24;
    case 34: return c34;
    default: throw std::invalid_argument("two-form basis index must satisfy 1 <= i < j <= 4");
  }
}

TwoForm& TwoForm::operator+=(const TwoForm& other) {
  c12 += other.c12;
  c13 += other.c13;
  c14 += other.c14;
  c23 += other.c23;
  c24 += other.c24;
  c34 += other.c34;
  return *this;
}

TwoForm reference_form(const GridSpec& grid) {
  TwoForm omega(grid);
  omega.c13 = ScalarField::constant(grid, 1.0);
  omega.c24 = ScalarField::constant(grid, -1.0);
  return omega;
}

OneForm alpha_from_u(const ScalarField& u) {
  const Jet d = jet(u);
  OneForm alpha(u.grid());
  alpha.a1 = -1.0 * (d.ut + u);
  alpha.a3 = d.uy;
  alpha.a4 = -1.0 * d.ux;
  return alpha;
}

TwoForm exterior_d(const OneForm& alpha) {
  TwoForm out(alpha.grid());
  const ScalarField* a[5] = {nullptr, &alpha.a1, &alpha.a2, &alpha.a3, &alpha.a4};
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 3; ++j) accumulate(out, j, i, 1.0, frame_derivative(*a[i], j));
  // a4 de4 = a4 e12
  accumulate(out, 1, 2, 1.0, alpha.a4);
  return out;
}

ThreeForm exterior_d(const TwoForm& omega) {
  ThreeForm out(omega.grid());
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const ScalarField& c = omega.coefficient(i, j);
      for (int k = 1; k <= 3; ++k) accumulate(out, k, i, j, 1.0, frame_derivative(c, k));
    }
  // d(e34) = de3∧e4 - e3∧de4 = -e3∧e12
  accumulate(out, 3, 1, 2, -1.0, omega.c34);
  return out;
}

TwoForm apply_j(const TwoForm& omega) {
  TwoForm out(omega.grid());
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const JImage a = j_table[i], b = j_table[j];
      accumulate(out, a.index, b.index, a.sign * b.sign, omega.coefficient(i, j));
    }
  return out;
}

JInvariance check_j_invariance(const TwoForm& omega) {
  const TwoForm image = apply_j(omega);
  double worst = 0.0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j)
      worst = std::max(worst, sup_norm(image.coefficient(i, j) - omega.coefficient(i, j)));
  return {worst};
}

ScalarField wedge_ratio(const TwoForm& w) {
  ScalarField out(w.grid());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = w.c12[n] * w.c34[n] - w.c13[n] * w.c24[n] + w.c14[n] * w.c23[n];
  return out;
}

TwoForm omega_theta(const GridSpec& grid, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  TwoForm w(grid);
  w.c13 = ScalarField::constant(grid, c);
  w.c23 = ScalarField::constant(grid, s);
  w.c14 = ScalarField::constant(grid, s);
  w.c24 = ScalarField::constant(grid, -c);
  return w;
}

MetricField::MetricField(const GridSpec& grid)
    : entries_{ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid),
               ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

int MetricField::slot(int row, int col) {
  if (row < 1 || row > 4 || col < 1 || col > 4) throw std::out_of_range("metric index must be in 1..4");
  if (row > col) std::swap(row, col);
  // Upper triangle, row-major: (1,1)..(1,4) -> 0..3, (2,2)..(2,4) -> 4..6, (3,3),(3,4) -> 7,8, (4,4) -> 9.
  static constexpr int row_start[5] = {0, 0, 4, 7, 9};
  return row_start[row] + (col - row);
}

ScalarField MetricField::trace() const {
  ScalarField t = (*this)(1, 1);
  t += (*this)(2, 2);
  t += (*this)(3, 3);
  t += (*this)(4, 4);
  return t;
}

ScalarField MetricField::min_eigenvalue() const {
  const auto& g = *this;
  ScalarField out(grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double a = g(1, 1)[n], b = g(2, 2)[n];
    const double off2 = g(1, 2)[n] * g(1, 2)[n] + g(1, 4)[n] * g(1, 4)[n];
    const double half_gap = 0.5 * (a - b);
    out[n] = 0.5 * (a + b) - std::sqrt(half_gap * half_gap + off2);
  }
  return out;
}

MetricField metric_field(const ScalarField& u) {
  const Jet d = jet(u);
  MetricField g(u.grid());
  ScalarField p = d.uyy + d.utt;
  p += d.ut;
  p += 1.0;
  ScalarField q = d.uxx;
  q += 1.0;
  g(1, 1) = p;
  g(1, 2) = d.uxy;
  g(1, 4) = d.uxt;
  g(2, 2) = q;
  g(2, 3) = d.uxt;
  g(3, 3) = p;
  g(3, 4) = -1.0 * d.uxy;
  g(4, 4) = q;
  return g;
}

void write_two_form(const std::string& directory, const std::string& prefix, const TwoForm& omega) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  std::ofstream manifest(dir / (prefix + "_manifest.txt"));
  if (!manifest) throw IoError("cannot write two-form manifest in '" + directory + "'");
  int n = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const std::string label = TwoForm::labels[n++];
      const std::string file = prefix + "_" + label + ".dump";
      write_field_file((dir / file).string(), omega.coefficient(i, j));
      manifest << label << ' ' << file << '\n';
    }
}

TwoForm read_two_form(const std::string& directory, const std::string& prefix) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  std::ifstream manifest(dir / (prefix + "_manifest.txt"));
  if (!manifest) throw IoError("cannot read two-form manifest in '" + directory + "'");
  std::map<std::string, std::string> files;
  std::string label, file;
  while (manifest >> label >> file) files[label] = file;
  std::optional<TwoForm> omega;
  int n = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const auto it = files.find(TwoForm::labels[n++]);
      if (it == files.end()) throw ParseError(std::string("two-form manifest lacks ") + TwoForm::labels[n - 1]);
      ScalarField c = read_field_file((dir / it->second).string());
      if (!omega) omega.emplace(c.grid());
      require_same_grid(omega->grid(), c.grid(), "two-form dump");
      omega->coefficient(i, j) = std::move(c);
    }
  return *omega;
}

}  // namespace ktcy::geometry
