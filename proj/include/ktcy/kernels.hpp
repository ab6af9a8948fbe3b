#pragma once

// Data-parallel inner loops used by the field, pde and krylov layers.
//
// Every kernel has a scalar reference implementation; SIMD variants are
// selected at runtime through KernelTable. Elementwise kernels evaluate the
// same expression tree in the same order as the scalar reference (no FMA
// contraction), so they are bitwise equal to it. Reductions (dot, sum)
// reassociate and agree only to rounding.

#include <cstddef>
#include <string_view>
#include <vector>

namespace ktcy::kernels {

/// Second-order jet of a field, one pointer per derivative, all length n.
struct JetView {
  const double* uxx;
  const double* uyy;
  const double* utt;
  const double* ut;
  const double* uxy;
  const double* uxt;
};

/// Coefficients of the linearized operator P w_xx + Q(w_yy+w_tt) - 2R w_xy - 2S w_xt + Q w_t.
struct CoeffView {
  const double* p;
  const double* q;
  const double* r;
  const double* s;
};

struct KernelTable {
  std::string_view name;

  // out[k] = a[k] * b[k] on interleaved (re, im) pairs; n counts complex values.
  void (*complex_mul)(const double* a, const double* b, double* out, std::size_t n);

  // out = (uxx+1)(uyy+utt+ut+1) - uxy^2 - uxt^2
  void (*ma_lhs)(const JetView& u, double* out, std::size_t n);

  void (*linearized)(const CoeffView& c, const JetView& w, double* out, std::size_t n);

  // y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
  // x += c
  void (*shift)(double c, double* x, std::size_t n);

  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

/// Tables usable on this CPU, scalar first.
std::vector<const KernelTable*> available();

/// The table used by the library. Chosen once: the widest supported variant,
/// unless KTCY_SIMD=scalar|avx2|neon forces one.
const KernelTable& active();

}  // namespace ktcy::kernels
