#include "bsreg/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bsreg/error.hpp"

namespace bsreg::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
// Poisson mass that may be dropped from either tail of a mixture.
constexpr double kTailMass = 1e-15;
constexpr double kScaledSwitch = 0.5;  // psi() uses erfcx below this alpha

void check_spec(const ChiSqSpec& spec) {
  if (spec.df < 1) throw DomainError("chi-square df must be >= 1, got " + std::to_string(spec.df));
  if (!(spec.noncentrality >= 0.0) || !std::isfinite(spec.noncentrality))
    throw DomainError("chi-square noncentrality must be finite and >= 0");
}

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_cont_frac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double log_poisson_weight(double mean, long j) {
  return -mean + static_cast<double>(j) * std::log(mean) - std::lgamma(static_cast<double>(j) + 1.0);
}

// Sums w_j * term(j) over the Poisson(mean) weights, starting from the mode and
// walking outwards until the geometric tail bound on the remaining mass drops
// below kTailMass. term(j) must be bounded by 1 for the bound to be meaningful
// (true for CDFs; for densities it bounds the relative error).
template <class Term>
double poisson_mixture(double mean, Term&& term) {
  const long mode = static_cast<long>(std::floor(mean));
  const double w_mode = std::exp(log_poisson_weight(mean, mode));

  double total = 0.0;
  double w = w_mode;
  for (long j = mode;; ++j) {
    total += w * term(j);
    const double ratio = mean / static_cast<double>(j + 2);
    w *= mean / static_cast<double>(j + 1);
    if (ratio < 1.0 && w / (1.0 - ratio) < kTailMass) break;
    if (w == 0.0) break;
  }
  w = w_mode;
  for (long j = mode - 1; j >= 0; --j) {
    w *= static_cast<double>(j + 1) / mean;
    total += w * term(j);
    const double ratio = static_cast<double>(j) / mean;
    if (ratio < 1.0 && w * ratio / (1.0 - ratio) < kTailMass) break;
    if (w == 0.0) break;
  }
  return total;
}

}  // namespace

double erf(double x) { return std::erf(x); }

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  // Laplace continued fraction: sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
  double c = x;
  double d = 0.0;
  double h = x;
  for (int k = 1; k < 1000; ++k) {
    const double ak = 0.5 * k;
    d = x + ak * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = x + ak / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * h);
}

namespace detail {

double psi_direct(double alpha) {
  const double z = std::numbers::sqrt2 / alpha;
  return 2.0 + 4.0 / (alpha * alpha) -
         (std::sqrt(2.0 * std::numbers::pi) / alpha) * std::erfc(z) * std::exp(z * z);
}

double psi_scaled(double alpha) {
  const double z = std::numbers::sqrt2 / alpha;
  return 2.0 + 4.0 / (alpha * alpha) - (std::sqrt(2.0 * std::numbers::pi) / alpha) * erfcx(z);
}

}  // namespace detail

double psi(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("psi: alpha must be positive and finite");
  return alpha < kScaledSwitch ? detail::psi_scaled(alpha) : detail::psi_direct(alpha);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_p: a must be positive");
  if (x < 0.0 || std::isnan(x)) throw DomainError("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cont_frac(a, x);
}

double chi2_cdf(double x, int df) {
  return nc_chi2_cdf(x, ChiSqSpec{df, 0.0});
}

double chi2_pdf(double x, int df) {
  return nc_chi2_pdf(x, ChiSqSpec{df, 0.0});
}

namespace {

double central_cdf(double x, double df) { return gamma_p(0.5 * df, 0.5 * x); }

double central_pdf(double x, double df) {
  const double k = 0.5 * df;
  return 0.5 * std::exp((k - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(k));
}

}  // namespace

double nc_chi2_cdf(double x, const ChiSqSpec& spec) {
  check_spec(spec);
  if (!(x >= 0.0)) throw DomainError("nc_chi2_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double m = spec.df;
  if (spec.noncentrality == 0.0) return central_cdf(x, m);
  const double mean = 0.5 * spec.noncentrality;
  const double g = poisson_mixture(mean, [&](long j) { return central_cdf(x, m + 2.0 * static_cast<double>(j)); });
  return g > 1.0 ? 1.0 : g;
}

double nc_chi2_pdf(double x, const ChiSqSpec& spec) {
  check_spec(spec);
  if (!(x > 0.0) || std::isinf(x)) throw DomainError("nc_chi2_pdf: x must be positive and finite");
  const double m = spec.df;
  if (spec.noncentrality == 0.0) return central_pdf(x, m);
  const double mean = 0.5 * spec.noncentrality;
  return poisson_mixture(mean, [&](long j) { return central_pdf(x, m + 2.0 * static_cast<double>(j)); });
}

double chi2_quantile(double prob, int df) {
  if (df < 1) throw DomainError("chi2_quantile: df must be >= 1");
  if (!(prob >= 0.0 && prob < 1.0)) throw DomainError("chi2_quantile: prob must lie in [0, 1)");
  if (prob == 0.0) return 0.0;

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (chi2_cdf(hi, df) < prob) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (chi2_cdf(mid, df) < prob ? lo : hi) = mid;
  }
  // Newton on the CDF, kept inside the bracket.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double f = chi2_cdf(x, df) - prob;
    if (std::fabs(f) < 1e-15) break;
    (f < 0.0 ? lo : hi) = x;
    double next = x - f / chi2_pdf(x, df);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * kEps * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace bsreg::specfun
