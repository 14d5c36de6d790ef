#pragma once

#include <vector>

#include "bsreg/model.hpp"

namespace bsreg {

// Which coordinates of theta are held fixed during a fit. Column indices are
// zero-based.
struct Restriction {
  enum class Kind { none, fix_beta_subset, fix_alpha };

  Kind kind = Kind::none;
  std::vector<int> fixed_indices;
  std::vector<double> fixed_values;
  double alpha0 = 1.0;

  static Restriction unrestricted() { return {}; }
  static Restriction fix_beta(std::vector<int> indices, std::vector<double> values) {
    return {Kind::fix_beta_subset, std::move(indices), std::move(values), 1.0};
  }
  static Restriction fix_alpha(double alpha0) { return {Kind::fix_alpha, {}, {}, alpha0}; }

  // Throws ContractViolation / DomainError if inconsistent with a p-column design.
  void validate(int p) const;
};

struct FitOptions {
  int max_iterations = 500;
  // Convergence when the sup-norm of the score over free coordinates drops
  // below gradient_tolerance * max(1, |loglik|).
  double gradient_tolerance = 1e-8;
  // Fits that push alpha below this are reported as a boundary failure.
  double alpha_floor = 1e-8;
};

struct FitResult {
  Theta theta_hat;
  double loglik_value = 0.0;
  Vector std_errors;  // beta entries then alpha, from the inverse expected information
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

// Ordinary least squares via column-pivoted QR.
Vector init_beta(const Dataset& data);

// sqrt((4/n) sum sinh^2((y - X beta)/2)); DataError when every residual is 0.
double init_alpha(const Dataset& data, const Vector& beta_init);

// Maximum likelihood by BFGS with analytic gradients; alpha is optimised on the
// log scale. The inverse-Hessian approximation starts from the inverse
// expected information. Non-convergence is reported through
// FitResult::converged; a fit that drives alpha under the floor throws
// NumericalError.
FitResult fit(const Dataset& data, const Restriction& restriction = {}, const FitOptions& options = {});

// Square roots of the diagonal of the inverse expected information at the fit.
// ContractViolation for a non-converged fit.
Vector std_errors(const FitResult& fit, const Dataset& data);

}  // namespace bsreg
