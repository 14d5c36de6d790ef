#pragma once

// Scalar special functions and the (non)central chi-square family.

namespace bsreg::specfun {

// Degrees of freedom and noncentrality of a chi-square law. A zero
// noncentrality reduces every evaluation to the central distribution exactly.
struct ChiSqSpec {
  int df = 1;
  double noncentrality = 0.0;
};

double erf(double x);

// Scaled complementary error function exp(x^2) * erfc(x). Finite for all
// x >= 0 where the unscaled product would overflow times underflow.
double erfcx(double x);

// psi(alpha) = 2 + 4/alpha^2 - (sqrt(2 pi)/alpha) erfc(sqrt(2)/alpha) exp(2/alpha^2),
// the factor relating the beta block of the Fisher information to X'X/4.
// Throws DomainError for alpha <= 0.
double psi(double alpha);

// Central chi-square distribution.
double chi2_cdf(double x, int df);
double chi2_pdf(double x, int df);

// Inverse of chi2_cdf; prob in [0, 1).
double chi2_quantile(double prob, int df);

// Noncentral chi-square G_{m,lambda}(x) and g_{m,lambda}(x), computed as
// Poisson(lambda/2) mixtures of central laws with m + 2j degrees of freedom.
double nc_chi2_cdf(double x, const ChiSqSpec& spec);
double nc_chi2_pdf(double x, const ChiSqSpec& spec);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

namespace detail {
// The two evaluation routes behind psi(); exposed so they can be checked
// against each other.
double psi_direct(double alpha);
double psi_scaled(double alpha);
}  // namespace detail

}  // namespace bsreg::specfun
