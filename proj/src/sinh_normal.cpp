#include "bsreg/sinh_normal.hpp"

#include <cmath>
#include <numbers>

#include "bsreg/error.hpp"

namespace bsreg {
namespace {

void check(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("shape alpha must be positive and finite");
}

}  // namespace

double bs_log_density(double t, const BSParams& p) {
  check(p.alpha);
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw DomainError("scale eta must be positive and finite");
  if (!(t > 0.0)) throw DomainError("bs_log_density: t must be positive");
  // exp(1/alpha^2) exp(-tau(t/eta)/(2 alpha^2)) folded into one square to avoid
  // cancellation for small alpha.
  const double r = std::sqrt(t / p.eta) - std::sqrt(p.eta / t);
  return -std::log(2.0 * p.alpha * std::sqrt(2.0 * std::numbers::pi * p.eta)) - 1.5 * std::log(t) +
         std::log(t + p.eta) - r * r / (2.0 * p.alpha * p.alpha);
}

double sinh_normal_from_normal(double z, const SinhNormalParams& p) {
  check(p.alpha);
  return p.mu + 2.0 * std::asinh(0.5 * p.alpha * z);
}

double sinh_normal_pivot(double y, const SinhNormalParams& p) {
  check(p.alpha);
  return (2.0 / p.alpha) * std::sinh(0.5 * (y - p.mu));
}

double sample_sinh_normal(const SinhNormalParams& p, rng::Stream& source) {
  return sinh_normal_from_normal(rng::normal_from_uniforms(source), p);
}

}  // namespace bsreg
