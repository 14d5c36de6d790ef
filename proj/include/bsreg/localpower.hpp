#pragma once

#include <array>
#include <utility>
#include <vector>

#include "bsreg/hypothesis.hpp"
#include "bsreg/model.hpp"

namespace bsreg {

// ---------------------------------------------------------------------------
// Tests on a subset of regression coefficients.
//
// Under H1n: beta2 = beta2_0 + epsilon every third-order cumulant entering the
// n^{-1/2} term vanishes for this model, so all four statistics share the
// noncentral chi-square limit G_{q, lambda}, so no coefficient table here.
// ---------------------------------------------------------------------------
struct BetaPitmanSpec {
  Matrix design;            // n x p
  std::vector<int> tested;  // zero-based columns forming beta2
  Vector epsilon;           // local departure, one entry per tested column
  double alpha = 1.0;
  double level = 0.05;
};

// lambda = eps*' K_theta eps* with eps* = (K11^{-1} K12 eps, -eps, 0).
double beta_noncentrality(const BetaPitmanSpec& spec);

// 1 - G_{df, lambda}(chi2_{df, 1 - level}).
double beta_local_power(double lambda, int df, double level);

// ---------------------------------------------------------------------------
// Tests on the shape parameter, H1n: alpha = alpha0 + epsilon.
// ---------------------------------------------------------------------------
struct AlphaPitmanSpec {
  double alpha0 = 1.0;
  double epsilon = 0.0;
  int n = 1;
  int p = 1;
  double level = 0.05;

  void validate() const;
};

// Expansion coefficients b_ik; row i is the statistic, column k multiplies
// G_{1+2k, lambda}. Row sums vanish.
struct CoeffTable {
  std::array<std::array<double, 4>, 4> b{};

  double operator()(Statistic s, int k) const { return b[static_cast<int>(s)][k]; }
};

// Cumulants of log-likelihood derivatives entering the shape-test expansion.
struct AlphaCumulants {
  double k_aaa = 0.0;    // E d3l/da3 = 10n/a^3
  double k_a_aa = 0.0;   // E (dl/da)(d2l/da2) = -6n/a^3
  double k_a_a_a = 0.0;  // E (dl/da)^3 = 8n/a^3
  double k_inv_aa = 0.0; // inverse information for alpha, a^2/(2n)
  Matrix k_rsa;          // E d3l/(dbeta_r dbeta_s da) = ((2 + a^2)/a^3) X'X
  Matrix k_r_sa;         // E (dl/dbeta_r)(d2l/dbeta_s da) = -k_rsa
  Matrix k_inv_beta;     // inverse of the beta information block
};

AlphaCumulants alpha_cumulants(double alpha, const Matrix& design);

// Closed forms depending on the design only through n and p.
CoeffTable alpha_coeffs_reduced(const AlphaPitmanSpec& spec);

// Generic cumulant sums evaluated for a concrete design.
CoeffTable alpha_coeffs_general(const AlphaPitmanSpec& spec, const Matrix& design);

// lambda = 2 n epsilon^2 / alpha0^2.
double alpha_noncentrality(const AlphaPitmanSpec& spec);

// Pr(S_i <= x) to order n^{-1/2}. Not clamped to [0, 1].
double alpha_nonnull_cdf(Statistic s, double x, const AlphaPitmanSpec& spec);

// Pairwise local-power differences Pi_i - Pi_j from the g_{5,lambda},
// g_{7,lambda} closed forms, for (i, j) in kPowerPairs order.
inline constexpr std::array<std::pair<Statistic, Statistic>, 6> kPowerPairs = {{
    {Statistic::likelihood_ratio, Statistic::wald},
    {Statistic::likelihood_ratio, Statistic::score},
    {Statistic::likelihood_ratio, Statistic::gradient},
    {Statistic::wald, Statistic::score},
    {Statistic::wald, Statistic::gradient},
    {Statistic::score, Statistic::gradient},
}};

std::array<double, 6> alpha_power_differences(const AlphaPitmanSpec& spec, double x);

struct AlphaPowerTable {
  CoeffTable coeffs;
  double lambda = 0.0;
  double critical_value = 0.0;          // chi2_{1, 1 - level}
  std::array<double, 4> power{};        // Pi_i at the critical value
  std::array<double, 4> correction{};   // sum_k b_ik G_{1+2k, lambda}
  // some |correction| > kLocalRegimeLimit, a power outside [0, 1], or
  // |epsilon| / alpha0 > kLocalShiftLimit
  bool outside_local_regime = false;
};

inline constexpr double kLocalRegimeLimit = 0.1;
inline constexpr double kLocalShiftLimit = 0.25;

AlphaPowerTable alpha_local_power(const AlphaPitmanSpec& spec);

}  // namespace bsreg
