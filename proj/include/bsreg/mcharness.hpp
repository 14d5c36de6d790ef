#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bsreg/estimate.hpp"
#include "bsreg/hypothesis.hpp"

namespace bsreg {

// One simulation design. Covariates are U(0,1) draws (plus a leading column of
// ones) frozen per (n, covariate_seed); replication r always consumes the
// random stream (master_seed, r), so results do not depend on `threads`.
struct SimConfig {
  int n = 25;
  int p = 3;
  double alpha_true = 0.5;
  // Data-generating coefficients. Empty means ones on untested coordinates and
  // the null values on tested ones.
  std::vector<double> beta_true;
  Restriction hypothesis;
  std::vector<double> levels{0.10, 0.05, 0.01};
  long replications = 15000;
  std::uint64_t master_seed = 20100101;
  std::uint64_t covariate_seed = 1;
  unsigned threads = 1;

  void validate() const;
  // beta_true with defaults filled in.
  Vector true_beta() const;
};

// Rejection percentages against asymptotic chi-square quantiles.
struct SizeTable {
  SimConfig config;
  std::vector<double> levels;
  std::array<std::vector<double>, 4> rates;        // percent, indexed [statistic][level]
  std::array<std::vector<double>, 4> mc_std_err;   // percent
  long attempted = 0;
  long excluded = 0;
};

struct CriticalValues {
  std::array<double, 4> values{};
  double level = 0.05;
  long replications = 0;
  long excluded = 0;
};

struct PowerCurve {
  SimConfig config;
  double level = 0.05;
  std::vector<double> delta_grid;
  std::array<std::vector<double>, 4> powers;  // fractions, indexed [statistic][delta]
  std::array<double, 4> critical_values{};
  std::vector<long> excluded;                 // per delta
};

// Maximum fraction of non-converged replications tolerated before a study aborts.
inline constexpr double kMaxExclusionFraction = 0.01;

// n x p design: column 0 is ones, column j >= 1 is its own U(0,1) stream, so
// designs with fewer columns are nested in larger ones.
Matrix simulation_design(int n, int p, std::uint64_t covariate_seed);

SizeTable run_size_study(const SimConfig& config);
// As run_size_study; requires a fix-alpha hypothesis.
SizeTable run_alpha_size_study(const SimConfig& config);

// Empirical (1 - level) quantile of each null statistic over `replications`
// samples.
CriticalValues estimate_critical_values(const SimConfig& config, long replications = 500000, double level = 0.05);

// Rejection rates against the supplied critical values when the tested
// coordinates move to null + delta (or alpha to alpha0 + delta for shape
// tests). The same error draws are reused across the grid.
PowerCurve run_power_study(const SimConfig& config, std::span<const double> delta_grid,
                           const std::array<double, 4>& critical_values, double level = 0.05);

}  // namespace bsreg
