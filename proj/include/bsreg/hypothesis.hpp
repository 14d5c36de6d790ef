#pragma once

#include <array>
#include <span>
#include <string_view>

#include "bsreg/estimate.hpp"

namespace bsreg {

// The four asymptotically equivalent statistics, in report order.
enum class Statistic { likelihood_ratio = 0, wald = 1, score = 2, gradient = 3 };

inline constexpr std::array<Statistic, 4> kAllStatistics = {Statistic::likelihood_ratio, Statistic::wald,
                                                            Statistic::score, Statistic::gradient};

std::string_view statistic_name(Statistic s);   // "likelihood_ratio", ...
std::string_view statistic_symbol(Statistic s); // "S1" .. "S4"

struct TestReport {
  std::array<double, 4> statistics{};
  int df = 0;
  std::array<double, 4> p_values{};
  FitResult unrestricted;
  FitResult restricted;

  double statistic(Statistic s) const { return statistics[static_cast<int>(s)]; }
  double p_value(Statistic s) const { return p_values[static_cast<int>(s)]; }
  bool converged() const { return unrestricted.converged && restricted.converged; }
};

// Upper-tail chi-square p-value; negative statistics map to 1.
double asymptotic_p_value(double statistic, int df);

// H0: beta[subset] = beta2_0 against the two-sided alternative. The subset is
// any proper, nonempty set of zero-based column indices; the remaining columns
// act as nuisance regressors. Throws UnsupportedError when the subset covers
// every column.
TestReport test_beta_subset(const Dataset& data, std::span<const int> subset, std::span<const double> beta2_0,
                            const FitOptions& options = {});

// H0: alpha = alpha0 with beta as nuisance; df = 1.
TestReport test_alpha(const Dataset& data, double alpha0, const FitOptions& options = {});

// Residual-maker matrix R = X2 - X1 (X1'X1)^{-1} X1'X2, formed by least-squares
// projection. Exposed for the local-power module.
Matrix partial_out(const Matrix& X1, const Matrix& X2);

}  // namespace bsreg
