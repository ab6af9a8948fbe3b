#pragma once

// Restarted GMRES with right preconditioning. Minimizes the true residual
// ‖b - A x‖₂ over the Krylov space, so it handles the non-symmetric
// operators produced by the first-order w_t term.

#include <functional>
#include <span>
#include <vector>

namespace ktcy::krylov {

using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

struct GmresOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 400;
  int restart = 60;
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Solves A x = b from x₀ = 0. `preconditioner` applies M⁻¹; pass nullptr-equivalent
/// (an empty std::function) for none.
GmresResult gmres(const LinearOperator& a, const LinearOperator& preconditioner, std::span<const double> b,
                  const GmresOptions& options);

}  // namespace ktcy::krylov
