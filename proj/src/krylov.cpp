#include "ktcy/krylov.hpp"

#include <cmath>
#include <stdexcept>

#include "ktcy/kernels.hpp"

namespace ktcy::krylov {
namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(kernels::active().dot(v.data(), v.data(), v.size()));
}

}  // namespace

GmresResult gmres(const LinearOperator& a, const LinearOperator& preconditioner, std::span<const double> b,
                  const GmresOptions& options) {
  if (options.restart < 1 || options.max_iterations < 1 || !(options.relative_tolerance > 0.0))
    throw std::invalid_argument("gmres options must be positive");
  const auto& k = kernels::active();
  const std::size_t n = b.size();
  const int m = options.restart;

  GmresResult result;
  result.x.assign(n, 0.0);
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    result.converged = true;
    return result;
  }
  const double target = options.relative_tolerance * b_norm;

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (preconditioner)
      preconditioner(in, out);
    else
      std::copy(in.begin(), in.end(), out.begin());
  };

  std::vector<double> r(b.begin(), b.end());
  double beta = b_norm;
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(m) + 1, std::vector<double>(n));
  std::vector<double> h(static_cast<std::size_t>(m + 1) * m);  // column-major Hessenberg
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> z(n), w(n);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };

  while (result.iterations < options.max_iterations) {
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int cols = 0;
    for (int j = 0; j < m && result.iterations < options.max_iterations; ++j) {
      precondition(basis[j], z);
      a(z, w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = k.dot(w.data(), basis[i].data(), n);
        k.axpy(-H(i, j), basis[i].data(), w.data(), n);
      }
      H(j + 1, j) = norm2(w);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = denom == 0.0 ? 1.0 : H(j, j) / denom;
      sn[j] = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
      const double sub = H(j + 1, j);
      H(j, j) = cs[j] * H(j, j) + sn[j] * sub;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++result.iterations;
      cols = j + 1;
      if (sub == 0.0 || std::fabs(g[j + 1]) <= target) break;
      for (std::size_t i = 0; i < n; ++i) basis[j + 1][i] = w[i] / sub;
    }

    for (int i = cols - 1; i >= 0; --i) {
      double acc = g[i];
      for (int l = i + 1; l < cols; ++l) acc -= H(i, l) * y[l];
      y[i] = H(i, i) == 0.0 ? 0.0 : acc / H(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < cols; ++i) k.axpy(y[i], basis[i].data(), w.data(), n);
    precondition(w, z);
    k.axpy(1.0, z.data(), result.x.data(), n);

    // Restart from the true residual.
    a(result.x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    beta = norm2(r);
    result.relative_residual = beta / b_norm;
    if (beta <= target) {
      result.converged = true;
      break;
    }
    if (cols == 0) break;
  }
  return result;
}

}  // namespace ktcy::krylov
