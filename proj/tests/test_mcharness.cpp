#include <cmath>

#include "bsreg/error.hpp"
#include "bsreg/mcharness.hpp"
#include "bsreg/specfun.hpp"
#include "doctest.h"

using namespace bsreg;

namespace {

SimConfig beta_config(int n, int p, long reps) {
  SimConfig c;
  c.n = n;
  c.p = p;
  c.replications = reps;
  c.hypothesis = Restriction::fix_beta({p - 2, p - 1}, {0.0, 0.0});
  return c;
}

}  // namespace

TEST_CASE("simulation design") {
  const Matrix a = simulation_design(25, 3, 1);
  const Matrix b = simulation_design(25, 7, 1);
  CHECK(a.col(0).isOnes());
  CHECK(b.leftCols(3) == a);
  CHECK(a.minCoeff() > 0.0);
  CHECK(a.maxCoeff() <= 1.0);
  CHECK(simulation_design(25, 3, 2) != a);
  CHECK(simulation_design(26, 3, 1).topRows(25) != a);
}

TEST_CASE("config validation") {
  SimConfig c = beta_config(25, 3, 10);
  c.replications = 0;
  CHECK_THROWS_AS(run_size_study(c), DomainError);
  c = beta_config(3, 3, 10);
  CHECK_THROWS_AS(run_size_study(c), DomainError);
  c = beta_config(25, 3, 10);
  c.levels = {0.05, 1.0};
  CHECK_THROWS_AS(run_size_study(c), DomainError);
  c = beta_config(25, 3, 10);
  c.hypothesis = Restriction::unrestricted();
  CHECK_THROWS_AS(run_size_study(c), ContractViolation);
  c.hypothesis = Restriction::fix_beta({0, 1, 2}, {0, 0, 0});
  CHECK_THROWS_AS(run_size_study(c), UnsupportedError);
  CHECK_THROWS_AS(run_alpha_size_study(beta_config(25, 3, 10)), ContractViolation);
}

TEST_CASE("a single replication gives degenerate rates") {
  const SizeTable t = run_size_study(beta_config(25, 3, 1));
  for (const auto& row : t.rates)
    for (double r : row) CHECK((r == 0.0 || r == 100.0));
  SimConfig a = beta_config(25, 3, 1);
  a.hypothesis = Restriction::fix_alpha(0.5);
  const SizeTable ta = run_alpha_size_study(a);
  for (const auto& row : ta.rates)
    for (double r : row) CHECK((r == 0.0 || r == 100.0));
}

TEST_CASE("results do not depend on the worker count") {
  SimConfig c = beta_config(25, 4, 600);
  c.threads = 1;
  const SizeTable t1 = run_size_study(c);
  for (unsigned w : {4u, 16u}) {
    c.threads = w;
    const SizeTable tw = run_size_study(c);
    CHECK(tw.rates == t1.rates);
    CHECK(tw.mc_std_err == t1.mc_std_err);
    CHECK(tw.excluded == t1.excluded);
  }
  c.threads = 1;
  const CriticalValues v1 = estimate_critical_values(c, 400);
  c.threads = 4;
  const CriticalValues v4 = estimate_critical_values(c, 400);
  CHECK(v1.values == v4.values);
}

TEST_CASE("size table bookkeeping") {
  const SizeTable t = run_size_study(beta_config(25, 3, 2000));
  CHECK(t.attempted == 2000);
  CHECK(t.levels.size() == 3);
  const double used = static_cast<double>(t.attempted - t.excluded);
  for (int s = 0; s < 4; ++s) {
    for (std::size_t l = 0; l < 3; ++l) {
      const double r = t.rates[s][l] / 100.0;
      CHECK(t.rates[s][l] >= 0.0);
      CHECK(t.rates[s][l] <= 100.0);
      CHECK(std::abs(t.mc_std_err[s][l] - 100.0 * std::sqrt(r * (1.0 - r) / used)) < 1e-12);
    }
    CHECK(t.rates[s][0] >= t.rates[s][1]);
    CHECK(t.rates[s][1] >= t.rates[s][2]);
  }
}

TEST_CASE("small-sample liberality ordering") {
  const SizeTable t = run_size_study(beta_config(25, 3, 15000));
  const auto at5 = [&](int s) { return t.rates[s][1]; };
  CHECK(at5(1) + 0.3 >= at5(0));
  CHECK(at5(0) + 0.3 >= at5(3));
  CHECK(at5(3) + 0.3 >= at5(2));
}

TEST_CASE("rates approach nominal as n grows") {
  double prev_dev[4] = {1e9, 1e9, 1e9, 1e9};
  double prev_se[4] = {0, 0, 0, 0};
  for (int n : {20, 50, 100, 200}) {
    SimConfig c = beta_config(n, 5, 6000);
    c.hypothesis = Restriction::fix_beta({2, 3, 4}, {0.0, 0.0, 0.0});
    c.levels = {0.05};
    const SizeTable t = run_size_study(c);
    for (int s = 0; s < 4; ++s) {
      const double dev = std::abs(t.rates[s][0] - 5.0);
      const double se = t.mc_std_err[s][0];
      CHECK(dev <= prev_dev[s] + 2.0 * std::hypot(se, prev_se[s]));
      prev_dev[s] = dev;
      prev_se[s] = se;
    }
  }
}

TEST_CASE("shape-test size at large n") {
  SimConfig c;
  c.n = 500;
  c.p = 3;
  c.alpha_true = 0.5;
  c.hypothesis = Restriction::fix_alpha(0.5);
  c.levels = {0.05};
  c.replications = 10000;
  const SizeTable t = run_alpha_size_study(c);
  for (int s = 0; s < 4; ++s) CHECK(std::abs(t.rates[s][0] - 5.0) < 0.8);
}

TEST_CASE("critical values") {
  SimConfig small = beta_config(25, 3, 1);
  const CriticalValues a = estimate_critical_values(small, 20000, 0.05);
  const CriticalValues b = estimate_critical_values(small, 20000, 0.05);
  CHECK(a.values == b.values);
  CHECK(a.replications == 20000);
  const double chi = specfun::chi2_quantile(0.95, 2);
  CHECK(a.values[1] > chi);

  SimConfig large = beta_config(200, 3, 1);
  const CriticalValues l = estimate_critical_values(large, 20000, 0.05);
  // Quantile standard error: sqrt(g(1-g)/N) / f(q); generous factor for four statistics.
  const double f = specfun::chi2_pdf(chi, 2);
  const double se = std::sqrt(0.05 * 0.95 / 20000.0) / f;
  for (double v : l.values) CHECK(std::abs(v - chi) < 4.0 * se + 0.15);
}

TEST_CASE("size-corrected power") {
  SimConfig c = beta_config(25, 4, 3000);
  const CriticalValues cv = estimate_critical_values(c, 20000, 0.05);
  const std::vector<double> grid{-2.0, 0.0, 2.0};
  const PowerCurve pc = run_power_study(c, grid, cv.values, 0.05);
  CHECK(pc.delta_grid == grid);
  const double se = std::sqrt(0.05 * 0.95 / 3000.0);
  for (int s = 0; s < 4; ++s) {
    CHECK(std::abs(pc.powers[s][1] - 0.05) < 3.0 * se + 0.01);
    CHECK(pc.powers[s][0] > 0.99);
    CHECK(pc.powers[s][2] > 0.99);
  }
  CHECK_THROWS_AS(run_power_study(c, grid, cv.values, 0.0), DomainError);

  SimConfig a = c;
  a.hypothesis = Restriction::fix_alpha(0.5);
  const std::vector<double> bad{-0.6};
  CHECK_THROWS_AS(run_power_study(a, bad, cv.values, 0.05), DomainError);
}
