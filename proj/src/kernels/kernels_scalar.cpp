#include "ktcy/kernels.hpp"

#include <cmath>

namespace ktcy::kernels {
namespace {

void complex_mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ai * br + ar * bi;
  }
}

void ma_lhs(const JetView& u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double q = u.uxx[i] + 1.0;
    const double p = ((u.uyy[i] + u.utt[i]) + u.ut[i]) + 1.0;
    out[i] = (q * p - u.uxy[i] * u.uxy[i]) - u.uxt[i] * u.uxt[i];
  }
}

void linearized(const CoeffView& c, const JetView& w, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = c.p[i] * w.uxx[i] + c.q[i] * (w.uyy[i] + w.utt[i]);
    acc = acc - 2.0 * (c.r[i] * w.uxy[i]);
    acc = acc - 2.0 * (c.s[i] * w.uxt[i]);
    out[i] = acc + c.q[i] * w.ut[i];
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void shift(double c, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] + c;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", complex_mul, ma_lhs, linearized, axpy,
                                 scale,    shift,       dot,    sum,        max_abs};
  return table;
}

}  // namespace ktcy::kernels
