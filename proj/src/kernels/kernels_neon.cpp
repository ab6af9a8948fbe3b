#include "ktcy/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

// Two doubles per register. Elementwise kernels mirror the scalar expression
// order; vmulq/vaddq/vsubq are used instead of vfmaq to keep them bitwise equal.

namespace ktcy::kernels {
namespace {

void complex_mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const float64x2_t va = vld1q_f64(a + 2 * k);                // ar ai
    const float64x2_t b_re = vdupq_n_f64(b[2 * k]);             // br br
    const float64x2_t b_im = vdupq_n_f64(b[2 * k + 1]);         // bi bi
    const float64x2_t a_swap = vextq_f64(va, va, 1);            // ai ar
    const float64x2_t t1 = vmulq_f64(va, b_re);                 // ar*br ai*br
    const float64x2_t t2 = vmulq_f64(a_swap, b_im);             // ai*bi ar*bi
    const float64x2_t sign = {-1.0, 1.0};
    vst1q_f64(out + 2 * k, vaddq_f64(t1, vmulq_f64(t2, sign)));
  }
}

void ma_lhs(const JetView& u, double* out, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t uxy = vld1q_f64(u.uxy + i);
    const float64x2_t uxt = vld1q_f64(u.uxt + i);
    const float64x2_t q = vaddq_f64(vld1q_f64(u.uxx + i), one);
    float64x2_t p = vaddq_f64(vld1q_f64(u.uyy + i), vld1q_f64(u.utt + i));
    p = vaddq_f64(vaddq_f64(p, vld1q_f64(u.ut + i)), one);
    float64x2_t r = vsubq_f64(vmulq_f64(q, p), vmulq_f64(uxy, uxy));
    vst1q_f64(out + i, vsubq_f64(r, vmulq_f64(uxt, uxt)));
  }
  for (; i < n; ++i) {
    const double q = u.uxx[i] + 1.0;
    const double p = ((u.uyy[i] + u.utt[i]) + u.ut[i]) + 1.0;
    out[i] = (q * p - u.uxy[i] * u.uxy[i]) - u.uxt[i] * u.uxt[i];
  }
}

void linearized(const CoeffView& c, const JetView& w, double* out, std::size_t n) {
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t q = vld1q_f64(c.q + i);
    float64x2_t acc = vmulq_f64(vld1q_f64(c.p + i), vld1q_f64(w.uxx + i));
    acc = vaddq_f64(acc, vmulq_f64(q, vaddq_f64(vld1q_f64(w.uyy + i), vld1q_f64(w.utt + i))));
    acc = vsubq_f64(acc, vmulq_f64(two, vmulq_f64(vld1q_f64(c.r + i), vld1q_f64(w.uxy + i))));
    acc = vsubq_f64(acc, vmulq_f64(two, vmulq_f64(vld1q_f64(c.s + i), vld1q_f64(w.uxt + i))));
    vst1q_f64(out + i, vaddq_f64(acc, vmulq_f64(q, vld1q_f64(w.ut + i))));
  }
  for (; i < n; ++i) {
    double acc = c.p[i] * w.uxx[i] + c.q[i] * (w.uyy[i] + w.utt[i]);
    acc = acc - 2.0 * (c.r[i] * w.uxy[i]);
    acc = acc - 2.0 * (c.s[i] * w.uxt[i]);
    out[i] = acc + c.q[i] * w.ut[i];
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] = a * x[i];
}

void shift(double c, double* x, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vaddq_f64(vld1q_f64(x + i), vc));
  for (; i < n; ++i) x[i] = x[i] + c;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double max_abs(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{"neon", complex_mul, ma_lhs, linearized, axpy,
                                 scale,  shift,       dot,    sum,        max_abs};
  return table;
}

}  // namespace ktcy::kernels
