#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "ktcy/kernels.hpp"

using namespace ktcy::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 1000, 4099};

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto tables = available();
  REQUIRE(!tables.empty());
  CHECK(tables.front()->name == scalar_table().name);
  bool found = false;
  for (const auto* t : tables) found = found || t->name == active().name;
  CHECK(found);
}

TEST_CASE("elementwise kernels match the scalar reference bitwise") {
  const KernelTable& ref = scalar_table();
  for (const KernelTable* t : available()) {
    CAPTURE(t->name);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vector(2 * n, 1), b = random_vector(2 * n, 2);
      std::vector<double> r1(2 * n), r2(2 * n);
      ref.complex_mul(a.data(), b.data(), r1.data(), n);
      t->complex_mul(a.data(), b.data(), r2.data(), n);
      CHECK(bitwise_equal(r1, r2));

      std::vector<std::vector<double>> j;
      for (unsigned s = 0; s < 6; ++s) j.push_back(random_vector(n, 10 + s, -0.5, 0.5));
      const JetView jv{j[0].data(), j[1].data(), j[2].data(), j[3].data(), j[4].data(), j[5].data()};
      std::vector<double> m1(n), m2(n);
      ref.ma_lhs(jv, m1.data(), n);
      t->ma_lhs(jv, m2.data(), n);
      CHECK(bitwise_equal(m1, m2));

      std::vector<std::vector<double>> c;
      for (unsigned s = 0; s < 4; ++s) c.push_back(random_vector(n, 20 + s));
      const CoeffView cv{c[0].data(), c[1].data(), c[2].data(), c[3].data()};
      ref.linearized(cv, jv, m1.data(), n);
      t->linearized(cv, jv, m2.data(), n);
      CHECK(bitwise_equal(m1, m2));

      auto y1 = random_vector(n, 30), y2 = y1;
      const auto x = random_vector(n, 31);
      ref.axpy(0.37, x.data(), y1.data(), n);
      t->axpy(0.37, x.data(), y2.data(), n);
      CHECK(bitwise_equal(y1, y2));
      ref.scale(-1.25, y1.data(), n);
      t->scale(-1.25, y2.data(), n);
      CHECK(bitwise_equal(y1, y2));
      ref.shift(0.1, y1.data(), n);
      t->shift(0.1, y2.data(), n);
      CHECK(bitwise_equal(y1, y2));
    }
  }
}

TEST_CASE("reductions agree with the scalar reference to rounding") {
  const KernelTable& ref = scalar_table();
  for (const KernelTable* t : available()) {
    CAPTURE(t->name);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto x = random_vector(n, 40), y = random_vector(n, 41);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::fabs(x[i] * y[i]) + std::fabs(x[i]);
      CHECK(std::fabs(t->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= 1e-14 * (1.0 + abs_sum));
      CHECK(std::fabs(t->sum(x.data(), n) - ref.sum(x.data(), n)) <= 1e-14 * (1.0 + abs_sum));
      CHECK(t->max_abs(x.data(), n) == ref.max_abs(x.data(), n));
    }
  }
}

TEST_CASE("scalar reference kernels compute the documented formulas") {
  const KernelTable& k = scalar_table();
  const double a[] = {1.0, 2.0, -3.0, 0.5};
  const double b[] = {0.5, -1.0, 2.0, 4.0};
  double out[4];
  k.complex_mul(a, b, out, 2);
  CHECK(out[0] == doctest::Approx(2.5));   // (1+2i)(0.5-i) = 0.5 - i + i + 2 = 2.5 + 0i
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(-8.0));  // (-3+0.5i)(2+4i) = -6 -12i + i - 2 = -8 - 11i
  CHECK(out[3] == doctest::Approx(-11.0));

  const double uxx = 0.2, uyy = -0.1, utt = 0.3, ut = 0.05, uxy = 0.4, uxt = -0.2;
  const JetView j{&uxx, &uyy, &utt, &ut, &uxy, &uxt};
  double m = 0.0;
  k.ma_lhs(j, &m, 1);
  CHECK(m == doctest::Approx(1.2 * 1.25 - 0.16 - 0.04));

  const double p = 1.5, q = 0.7, r = 0.1, s = -0.3;
  const CoeffView c{&p, &q, &r, &s};
  k.linearized(c, j, &m, 1);
  CHECK(m == doctest::Approx(p * uxx + q * (uyy + utt) - 2 * r * uxy - 2 * s * uxt + q * ut));

  const double v[] = {1.0, -7.5, 3.0};
  CHECK(k.max_abs(v, 3) == 7.5);
  CHECK(k.max_abs(v, 0) == 0.0);
  CHECK(k.sum(v, 3) == -3.5);
}
