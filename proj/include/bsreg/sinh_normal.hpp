#pragma once

#include "bsreg/random.hpp"

namespace bsreg {

// Birnbaum-Saunders law BS(alpha, eta).
struct BSParams {
  double alpha = 1.0;  // shape
  double eta = 1.0;    // scale
};

// Sinh-normal SN(alpha, mu, 2): the law of log T when T ~ BS(alpha, exp(mu)).
// The scale is fixed at 2 throughout the library.
struct SinhNormalParams {
  static constexpr double sigma = 2.0;
  double alpha = 1.0;
  double mu = 0.0;
};

double bs_log_density(double t, const BSParams& p);

// Y = mu + 2 asinh(alpha z / 2) for a standard normal z.
double sinh_normal_from_normal(double z, const SinhNormalParams& p);

// Inverse of sinh_normal_from_normal: (2/alpha) sinh((y - mu)/2) is N(0, 1).
double sinh_normal_pivot(double y, const SinhNormalParams& p);

double sample_sinh_normal(const SinhNormalParams& p, rng::Stream& source);

}  // namespace bsreg
