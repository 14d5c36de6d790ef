#include <cmath>
#include <limits>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bsreg/error.hpp"
#include "bsreg/specfun.hpp"
#include "doctest.h"

using namespace bsreg::specfun;

// Reference values from tests/oracles/specfun_oracles.py (mpmath, 50 digits).
TEST_CASE("erf reference values and symmetry") {
  CHECK(bsreg::specfun::erf(0.0) == 0.0);
  CHECK(std::abs(bsreg::specfun::erf(1.0) - 0.84270079294971486934) < 1e-14);
  CHECK(std::abs(bsreg::specfun::erf(0.5) - 0.52049987781304653768) < 1e-14);

  double prev = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = -6.0 + 12.0 * i / 999.0;
    const double v = bsreg::specfun::erf(x);
    CHECK(v == -bsreg::specfun::erf(-x));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("erfcx matches extended precision across the branch point") {
  CHECK(std::abs(erfcx(0.7) - 0.52593033734944098652) < 1e-14);
  CHECK(std::abs(erfcx(3.0) / 0.17900115118138995042 - 1.0) < 1e-13);
  CHECK(std::abs(erfcx(30.0) / 0.018795888861416751497 - 1.0) < 1e-13);
  // continuity where the evaluation route changes
  const double below = erfcx(std::nextafter(5.0, 0.0));
  const double above = erfcx(5.0);
  CHECK(std::abs(below / above - 1.0) < 1e-13);
  CHECK(std::isfinite(erfcx(1e6)));
}

TEST_CASE("psi reference values") {
  CHECK(std::abs(psi(std::sqrt(2.0)) - 3.242127843858687894) < 1e-13);
  CHECK(std::abs(psi(2.0) - 2.3443204575812015285) < 1e-13);
  CHECK(std::abs(psi(0.5) / 17.053390468345757318 - 1.0) < 1e-13);
  CHECK(std::abs(psi(0.1) / 401.00248148036321992 - 1.0) < 1e-13);
  CHECK(std::abs(psi(0.01) / 40001.000024998123569 - 1.0) < 1e-13);
  CHECK_THROWS_AS(psi(0.0), bsreg::DomainError);
  CHECK_THROWS_AS(psi(-1.0), bsreg::DomainError);
}

TEST_CASE("psi evaluation routes agree and stay positive") {
  CHECK(std::abs(detail::psi_direct(2.0) - detail::psi_scaled(2.0)) < 1e-12);
  for (int k = 0; k <= 60; ++k) {
    const double a = std::pow(10.0, -3.0 + 6.0 * k / 60.0);
    const double v = psi(a);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    const double direct = detail::psi_direct(a);
    if (std::isfinite(direct) && direct > 0.0) {
      CHECK(std::abs(direct - detail::psi_scaled(a)) <= 1e-12 * std::max(1.0, v));
    }
  }
}

TEST_CASE("chi-square quantile") {
  CHECK(chi2_quantile(0.0, 3) == 0.0);
  CHECK(std::abs(chi2_quantile(0.5, 2) - 2.0 * std::log(2.0)) < 1e-9);
  CHECK(std::abs(chi2_quantile(0.95, 1) - 3.8414588206941259584) < 1e-9);
  CHECK(std::abs(chi2_quantile(0.95, 2) - 5.9914645471079819869) < 1e-9);
  for (int df : {1, 2, 3, 5, 10}) {
    for (double p : {0.01, 0.05, 0.5, 0.9, 0.95, 0.99}) {
      CHECK(std::abs(chi2_cdf(chi2_quantile(p, df), df) - p) < 1e-10);
    }
  }
  CHECK_THROWS_AS(chi2_quantile(1.0, 1), bsreg::DomainError);
  CHECK_THROWS_AS(chi2_quantile(-0.1, 1), bsreg::DomainError);
}

TEST_CASE("noncentral chi-square against extended precision") {
  CHECK(std::abs(nc_chi2_cdf(3.0, {5, 4.0}) - 0.083268562139406210731) < 1e-13);
  CHECK(std::abs(nc_chi2_cdf(3.0, {7, 4.0}) - 0.02814946269068695003) < 1e-13);
  CHECK(std::abs(nc_chi2_pdf(3.0, {7, 4.0}) - 0.027559549724359630351) < 1e-13);
  CHECK(std::abs(nc_chi2_cdf(10.0, {3, 10.0}) - 0.373843374032038755) < 1e-13);
  CHECK(std::abs(nc_chi2_pdf(5.0, {7, 2.0}) - 0.087362167962445855303) < 1e-13);
  CHECK(std::abs(nc_chi2_cdf(3.84145882, {1, 0.0}) - 0.95) < 1e-8);
}

TEST_CASE("noncentral chi-square against Boost") {
  for (int m : {1, 3, 5, 7}) {
    for (double lam : {0.5, 1.0, 4.0, 10.0, 40.0}) {
      boost::math::non_central_chi_squared ref(m, lam);
      for (double x : {0.1, 1.0, 3.0, 8.0, 20.0, 60.0}) {
        CHECK(std::abs(nc_chi2_cdf(x, {m, lam}) - boost::math::cdf(ref, x)) < 1e-12);
        CHECK(std::abs(nc_chi2_pdf(x, {m, lam}) - boost::math::pdf(ref, x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("noncentral chi-square grid properties") {
  for (int m : {1, 3, 5, 7}) {
    for (double lam : {0.0, 1.0, 4.0, 10.0}) {
      double prev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double x = 0.15 * i;
        const double G = nc_chi2_cdf(x, {m, lam});
        CHECK(G >= 0.0);
        CHECK(G <= 1.0);
        CHECK(G >= prev);
        prev = G;
        if (x > 0.0) {
          const double lhs = G - nc_chi2_cdf(x, {m + 2, lam});
          CHECK(std::abs(lhs - 2.0 * nc_chi2_pdf(x, {m + 2, lam})) < 1e-10);
        }
        if (lam > 0.0) CHECK(G <= nc_chi2_cdf(x, {m, 0.0}) + 1e-15);
      }
    }
  }
}

TEST_CASE("zero noncentrality is the central law") {
  for (int m : {1, 2, 5}) {
    for (double x : {0.2, 1.0, 4.0, 9.0}) {
      CHECK(nc_chi2_cdf(x, {m, 0.0}) == chi2_cdf(x, m));
      CHECK(nc_chi2_pdf(x, {m, 0.0}) == chi2_pdf(x, m));
    }
  }
  CHECK(std::abs(nc_chi2_pdf(1e-4, {2, 0.0}) - 0.5) < 1e-4);
}

TEST_CASE("noncentral density integrates to one and differentiates the cdf") {
  for (auto spec : {ChiSqSpec{1, 0.0}, ChiSqSpec{3, 2.0}, ChiSqSpec{7, 2.0}, ChiSqSpec{2, 15.0}}) {
    auto f = [&](double x) { return x > 0.0 ? nc_chi2_pdf(x, spec) : 0.0; };
    boost::math::quadrature::exp_sinh<double> integrator;
    const double total = integrator.integrate(f);
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
  const double h = 1e-5;
  const ChiSqSpec spec{7, 2.0};
  const double fd = (nc_chi2_cdf(5.0 + h, spec) - nc_chi2_cdf(5.0 - h, spec)) / (2.0 * h);
  CHECK(std::abs(fd / nc_chi2_pdf(5.0, spec) - 1.0) < 1e-5);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(nc_chi2_cdf(-1.0, {1, 0.0}), bsreg::DomainError);
  CHECK_THROWS_AS(nc_chi2_pdf(0.0, {1, 0.0}), bsreg::DomainError);
  CHECK_THROWS_AS(nc_chi2_cdf(1.0, {0, 0.0}), bsreg::DomainError);
  CHECK_THROWS_AS(nc_chi2_cdf(1.0, {1, -1.0}), bsreg::DomainError);
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(std::abs(gamma_p(1.0, 2.0) - (1.0 - std::exp(-2.0))) < 1e-15);
  CHECK(std::abs(gamma_p(0.5, 0.5) - std::erf(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(gamma_p(3.0, 0.0) == 0.0);
}
