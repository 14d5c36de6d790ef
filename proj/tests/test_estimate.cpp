#include <cmath>

#include "bsreg/error.hpp"
#include "bsreg/estimate.hpp"
#include "bsreg/random.hpp"
#include "bsreg/sinh_normal.hpp"
#include "bsreg/specfun.hpp"
#include "doctest.h"

using namespace bsreg;

namespace {

Dataset simulate(std::uint64_t seed, int n, const Vector& beta, double alpha) {
  rng::Stream s(seed, 0);
  const int p = static_cast<int>(beta.size());
  Matrix X(n, p);
  X.col(0).setOnes();
  for (int j = 1; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = s.next_uniform();
  Vector y = X * beta;
  for (int i = 0; i < n; ++i) y(i) += sample_sinh_normal({alpha, 0.0}, s);
  return Dataset(y, X);
}

}  // namespace

TEST_CASE("least-squares start") {
  Matrix X(5, 2);
  X << 1, 0.1, 1, 0.4, 1, 0.35, 1, 0.8, 1, 1.2;
  Vector b(2);
  b << 2.0, -0.5;
  Dataset exact(X * b, X);
  CHECK((init_beta(exact) - b).norm() < 1e-13);

  Vector y(4);
  y << 1.0, 2.0, 4.0, 7.0;
  Dataset mean_only(y, Matrix::Ones(4, 1));
  CHECK(std::abs(init_beta(mean_only)(0) - 3.5) < 1e-14);

  Dataset r = simulate(4, 30, Vector::Ones(3), 0.5);
  const Vector bh = init_beta(r);
  CHECK((r.X().transpose() * (r.y() - r.X() * bh)).norm() < 1e-10);
}

TEST_CASE("moment start for alpha") {
  Vector y(2);
  y << 2.0, -2.0;
  Dataset d(y, Matrix::Ones(2, 1));
  CHECK(std::abs(init_alpha(d, Vector::Zero(1)) - 2.0 * std::sinh(1.0)) < 1e-14);

  Dataset flat(Vector::Constant(3, 1.5), Matrix::Ones(3, 1));
  CHECK_THROWS_AS(init_alpha(flat, init_beta(flat)), DataError);

  Dataset big = simulate(1, 10000, Vector::Ones(3), 0.5);
  CHECK(std::abs(init_alpha(big, init_beta(big)) - 0.5) < 0.02);
}

TEST_CASE("fit recovers parameters on a large sample") {
  Vector beta(3);
  beta << 1.0, 1.0, 1.0;
  Dataset d = simulate(2, 10000, beta, 0.5);
  const FitResult f = fit(d);
  REQUIRE(f.converged);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(f.theta_hat.beta(j) - beta(j)) < 3.0 * f.std_errors(j));
  CHECK(std::abs(f.theta_hat.alpha - 0.5) < 3.0 * f.std_errors(3));
  CHECK(f.gradient_norm < 1e-8 * std::max(1.0, std::abs(f.loglik_value)));
  CHECK(f.iterations > 0);
}

TEST_CASE("restricted fits") {
  Dataset d = simulate(3, 40, Vector::Ones(4), 0.7);
  const FitResult full = fit(d);
  REQUIRE(full.converged);

  SUBCASE("fixing coefficients at their estimates reproduces the optimum") {
    const auto r = Restriction::fix_beta({1, 3}, {full.theta_hat.beta(1), full.theta_hat.beta(3)});
    const FitResult g = fit(d, r);
    REQUIRE(g.converged);
    CHECK(g.theta_hat.beta(1) == full.theta_hat.beta(1));
    CHECK(g.theta_hat.beta(3) == full.theta_hat.beta(3));
    CHECK(std::abs(g.theta_hat.beta(0) - full.theta_hat.beta(0)) < 1e-6);
    CHECK(std::abs(g.theta_hat.beta(2) - full.theta_hat.beta(2)) < 1e-6);
    CHECK(std::abs(g.theta_hat.alpha - full.theta_hat.alpha) < 1e-6);
  }

  SUBCASE("fixing alpha at its estimate reproduces beta") {
    const FitResult g = fit(d, Restriction::fix_alpha(full.theta_hat.alpha));
    REQUIRE(g.converged);
    CHECK(g.theta_hat.alpha == full.theta_hat.alpha);
    CHECK((g.theta_hat.beta - full.theta_hat.beta).lpNorm<Eigen::Infinity>() < 1e-7);
  }

  SUBCASE("restricted optimum never exceeds the unrestricted one") {
    const FitResult g = fit(d, Restriction::fix_beta({2}, {0.0}));
    const FitResult h = fit(d, Restriction::fix_alpha(0.3));
    CHECK(g.loglik_value <= full.loglik_value + 1e-10);
    CHECK(h.loglik_value <= full.loglik_value + 1e-10);
    CHECK(g.theta_hat.beta(2) == 0.0);
    CHECK(h.theta_hat.alpha == 0.3);
  }
}

TEST_CASE("column rescaling transforms the estimates") {
  Dataset d = simulate(5, 60, Vector::Ones(3), 0.4);
  Vector D(3);
  D << 1.0, 4.0, 0.25;
  Dataset scaled(d.y(), d.X() * D.asDiagonal());
  const FitResult a = fit(d), b = fit(scaled);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(b.theta_hat.beta(j) - a.theta_hat.beta(j) / D(j)) < 1e-8);
  CHECK(std::abs(b.theta_hat.alpha - a.theta_hat.alpha) < 1e-8);
}

TEST_CASE("standard errors") {
  Dataset d = simulate(6, 25, Vector::Ones(3), 0.5);
  const FitResult f = fit(d);
  REQUIRE(f.converged);
  const Vector se = std_errors(f, d);
  CHECK(se.size() == 4);
  CHECK(se.minCoeff() > 0.0);
  CHECK(std::abs(se(3) - f.theta_hat.alpha / std::sqrt(2.0 * 25)) < 1e-15);
  const Matrix inv = fisher_info(f.theta_hat, d).dense().inverse();
  for (int j = 0; j < 4; ++j) CHECK(std::abs(se(j) * se(j) - inv(j, j)) < 1e-10 * inv(j, j));
  CHECK((se - f.std_errors).norm() == 0.0);

  Vector y(6);
  y << 0.3, -0.2, 0.5, 0.1, 0.9, -0.4;
  Dataset mean_only(y, Matrix::Ones(6, 1));
  const FitResult m = fit(mean_only);
  REQUIRE(m.converged);
  CHECK(std::abs(m.std_errors(0) - 2.0 / std::sqrt(6.0 * specfun::psi(m.theta_hat.alpha))) < 1e-14);

  FitResult bad = f;
  bad.converged = false;
  CHECK_THROWS_AS(std_errors(bad, d), ContractViolation);
}

TEST_CASE("restriction validation") {
  Dataset d = simulate(7, 20, Vector::Ones(3), 0.5);
  CHECK_THROWS_AS(fit(d, Restriction::fix_beta({3}, {0.0})), ContractViolation);
  CHECK_THROWS_AS(fit(d, Restriction::fix_beta({1}, {0.0, 1.0})), ContractViolation);
  CHECK_THROWS_AS(fit(d, Restriction::fix_beta({1, 1}, {0.0, 0.0})), ContractViolation);
  CHECK_THROWS_AS(fit(d, Restriction::fix_alpha(-1.0)), DomainError);
  CHECK_THROWS_AS(fit(d, Restriction::fix_beta({1}, {std::nan("")})), ContractViolation);
}

TEST_CASE("iteration cap reports non-convergence") {
  Dataset d = simulate(8, 30, Vector::Ones(3), 0.5);
  FitOptions opts;
  opts.max_iterations = 1;
  const FitResult f = fit(d, {}, opts);
  CHECK_FALSE(f.converged);
  CHECK(f.iterations <= 1);
}
