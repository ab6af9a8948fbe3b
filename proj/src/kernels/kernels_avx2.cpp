#include "ktcy/kernels.hpp"

#include <immintrin.h>

#include <cmath>

// Compiled with -mavx2 only; callers must check the CPU before use.

namespace ktcy::kernels {
namespace {

void complex_mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * k);
    const __m256d vb = _mm256_loadu_pd(b + 2 * k);
    const __m256d b_re = _mm256_movedup_pd(vb);         // br br
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);    // bi bi
    const __m256d a_swap = _mm256_permute_pd(va, 0x5);  // ai ar
    const __m256d t1 = _mm256_mul_pd(va, b_re);         // ar*br, ai*br
    const __m256d t2 = _mm256_mul_pd(a_swap, b_im);     // ai*bi, ar*bi
    _mm256_storeu_pd(out + 2 * k, _mm256_addsub_pd(t1, t2));
  }
  for (; k < n; ++k) {
    const double ar = a[2 * k], ai = a[2 * k + 1];
    const double br = b[2 * k], bi = b[2 * k + 1];
    out[2 * k] = ar * br - ai * bi;
    out[2 * k + 1] = ai * br + ar * bi;
  }
}

void ma_lhs(const JetView& u, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d uxy = _mm256_loadu_pd(u.uxy + i);
    const __m256d uxt = _mm256_loadu_pd(u.uxt + i);
    const __m256d q = _mm256_add_pd(_mm256_loadu_pd(u.uxx + i), one);
    __m256d p = _mm256_add_pd(_mm256_loadu_pd(u.uyy + i), _mm256_loadu_pd(u.utt + i));
    p = _mm256_add_pd(_mm256_add_pd(p, _mm256_loadu_pd(u.ut + i)), one);
    __m256d r = _mm256_sub_pd(_mm256_mul_pd(q, p), _mm256_mul_pd(uxy, uxy));
    r = _mm256_sub_pd(r, _mm256_mul_pd(uxt, uxt));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    const double q = u.uxx[i] + 1.0;
    const double p = ((u.uyy[i] + u.utt[i]) + u.ut[i]) + 1.0;
    out[i] = (q * p - u.uxy[i] * u.uxy[i]) - u.uxt[i] * u.uxt[i];
  }
}

void linearized(const CoeffView& c, const JetView& w, double* out, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_loadu_pd(c.q + i);
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(c.p + i), _mm256_loadu_pd(w.uxx + i));
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(q, _mm256_add_pd(_mm256_loadu_pd(w.uyy + i), _mm256_loadu_pd(w.utt + i))));
    acc = _mm256_sub_pd(
        acc, _mm256_mul_pd(two, _mm256_mul_pd(_mm256_loadu_pd(c.r + i), _mm256_loadu_pd(w.uxy + i))));
    acc = _mm256_sub_pd(
        acc, _mm256_mul_pd(two, _mm256_mul_pd(_mm256_loadu_pd(c.s + i), _mm256_loadu_pd(w.uxt + i))));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(q, _mm256_loadu_pd(w.ut + i)));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = c.p[i] * w.uxx[i] + c.q[i] * (w.uyy[i] + w.utt[i]);
    acc = acc - 2.0 * (c.r[i] * w.uxy[i]);
    acc = acc - 2.0 * (c.s[i] * w.uxt[i]);
    out[i] = acc + c.q[i] * w.ut[i];
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] = a * x[i];
}

void shift(double c, double* x, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
  for (; i < n; ++i) x[i] = x[i] + c;
}

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", complex_mul, ma_lhs, linearized, axpy,
                                 scale,  shift,       dot,    sum,        max_abs};
  return table;
}

}  // namespace ktcy::kernels
