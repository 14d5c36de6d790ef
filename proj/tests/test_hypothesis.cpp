#include <cmath>
#include <vector>

#include "bsreg/error.hpp"
#include "bsreg/hypothesis.hpp"
#include "bsreg/random.hpp"
#include "bsreg/sinh_normal.hpp"
#include "bsreg/specfun.hpp"
#include "doctest.h"

using namespace bsreg;

namespace {

Dataset simulate(rng::Stream& s, int n, const Vector& beta, double alpha) {
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

TEST_CASE("statistic names") {
  CHECK(statistic_symbol(Statistic::likelihood_ratio) == "S1");
  CHECK(statistic_symbol(Statistic::gradient) == "S4");
  CHECK(statistic_name(Statistic::wald) == "wald");
  CHECK(statistic_name(Statistic::score) == "score");
}

TEST_CASE("p-values") {
  CHECK(asymptotic_p_value(0.0, 1) == 1.0);
  CHECK(asymptotic_p_value(-0.3, 2) == 1.0);
  CHECK(std::abs(asymptotic_p_value(3.8414588206941259584, 1) - 0.05) < 1e-12);
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    const double p = asymptotic_p_value(0.2 * i, 3);
    CHECK(p <= prev);
    CHECK(p >= 0.0);
    prev = p;
  }
}

TEST_CASE("statistics vanish at the unrestricted estimate") {
  rng::Stream s(21, 0);
  for (int k = 0; k < 5; ++k) {
    Dataset d = simulate(s, 30, Vector::Ones(4), 0.5);
    const FitResult f = fit(d);
    REQUIRE(f.converged);
    const std::vector<int> subset{2, 3};
    const std::vector<double> at{f.theta_hat.beta(2), f.theta_hat.beta(3)};
    const TestReport rb = test_beta_subset(d, subset, at);
    for (double v : rb.statistics) CHECK(std::abs(v) < 1e-6);

    const TestReport ra = test_alpha(d, f.theta_hat.alpha);
    for (double v : ra.statistics) CHECK(std::abs(v) < 1e-5);
  }
}

TEST_CASE("beta statistics against the generic partitioned forms") {
  rng::Stream s(22, 0);
  Dataset d = simulate(s, 12, Vector::Ones(3), 0.5);
  const std::vector<int> subset{1, 2};
  const std::vector<double> null{0.3, 1.4};
  const TestReport r = test_beta_subset(d, subset, null);
  REQUIRE(r.converged());
  CHECK(r.df == 2);

  // score: U2' K^{22} U2 with K^{22} the tested block of the inverse information at the restricted fit
  const Theta& tilde = r.restricted.theta_hat;
  const Score u = score(tilde, d);
  const Matrix Kinv = fisher_info(tilde, d).dense().inverse();
  Vector u2(2);
  u2 << u.beta(1), u.beta(2);
  const Matrix K22 = Kinv.block(1, 1, 2, 2);
  CHECK(std::abs(r.statistic(Statistic::score) - u2.dot(K22 * u2)) < 1e-8);

  // Wald: d' (K^{22}(theta_hat))^{-1} d
  const Theta& hat = r.unrestricted.theta_hat;
  const Matrix Kinv_hat = fisher_info(hat, d).dense().inverse();
  Vector diff(2);
  diff << hat.beta(1) - null[0], hat.beta(2) - null[1];
  const double wald = diff.dot(Kinv_hat.block(1, 1, 2, 2).inverse() * diff);
  CHECK(std::abs(r.statistic(Statistic::wald) - wald) < 1e-8 * std::max(1.0, wald));

  // gradient: U2(theta_tilde)' d, may take either sign
  CHECK(std::abs(r.statistic(Statistic::gradient) - u2.dot(diff)) < 1e-8 * std::max(1.0, std::abs(u2.dot(diff))));

  CHECK(r.statistic(Statistic::likelihood_ratio) >= -1e-8);
  CHECK(r.statistic(Statistic::wald) >= 0.0);
  CHECK(r.statistic(Statistic::score) >= 0.0);
  for (Statistic st : kAllStatistics) {
    CHECK(r.p_value(st) == asymptotic_p_value(r.statistic(st), 2));
  }
}

TEST_CASE("tested columns need not trail") {
  rng::Stream s(23, 0);
  Dataset d = simulate(s, 40, Vector::Ones(4), 0.6);
  Matrix Xp(d.n(), 4);
  Xp.col(0) = d.X().col(0);
  Xp.col(1) = d.X().col(3);
  Xp.col(2) = d.X().col(2);
  Xp.col(3) = d.X().col(1);
  Dataset permuted(d.y(), Xp);
  const std::vector<int> a{1, 3}, b{3, 1};
  const std::vector<double> va{0.5, 0.2}, vb{0.5, 0.2};
  const TestReport ra = test_beta_subset(d, a, va);
  const TestReport rb = test_beta_subset(permuted, b, vb);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(ra.statistics[k] - rb.statistics[k]) < 1e-7);
}

TEST_CASE("shape statistics") {
  rng::Stream s(24, 0);
  Dataset d = simulate(s, 40, Vector::Ones(3), 0.5);
  const double a0 = 0.6;
  const TestReport r = test_alpha(d, a0);
  REQUIRE(r.converged());
  const double n = d.n();
  const double ah = r.unrestricted.theta_hat.alpha;
  const double K = 2.0 * n / (ah * ah);
  CHECK(std::abs(r.statistic(Statistic::wald) - (ah - a0) * (ah - a0) * K) < 1e-12 * r.statistic(Statistic::wald));

  // score from the generic form U_alpha^2 / K_alpha at the restricted fit
  const Score u = score(r.restricted.theta_hat, d);
  const double score_generic = u.alpha * u.alpha / (2.0 * n / (a0 * a0));
  CHECK(std::abs(r.statistic(Statistic::score) - score_generic) < 1e-10 * std::max(1.0, score_generic));
  CHECK(std::abs(r.statistic(Statistic::gradient) - u.alpha * (ah - a0)) < 1e-10);
  CHECK(r.df == 1);
  CHECK_THROWS_AS(test_alpha(d, 0.0), DomainError);
}

TEST_CASE("unsupported and malformed hypotheses") {
  rng::Stream s(25, 0);
  Dataset d = simulate(s, 20, Vector::Ones(3), 0.5);
  const std::vector<int> all{0, 1, 2};
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(test_beta_subset(d, all, zeros), UnsupportedError);
  const std::vector<int> none;
  const std::vector<double> empty;
  CHECK_THROWS_AS(test_beta_subset(d, none, empty), ContractViolation);
  const std::vector<int> one{1};
  CHECK_THROWS_AS(test_beta_subset(d, one, zeros), ContractViolation);
  const std::vector<int> out{5};
  const std::vector<double> z1{0.0};
  CHECK_THROWS_AS(test_beta_subset(d, out, z1), ContractViolation);
}

TEST_CASE("residual maker") {
  rng::Stream s(26, 0);
  Matrix X1(15, 2), X2(15, 2);
  for (int i = 0; i < 15; ++i) {
    X1(i, 0) = 1.0;
    X1(i, 1) = s.next_uniform();
    X2(i, 0) = s.next_uniform();
    X2(i, 1) = s.next_uniform();
  }
  const Matrix R = partial_out(X1, X2);
  CHECK((X1.transpose() * R).norm() < 1e-12);
  const Matrix explicit_R = X2 - X1 * (X1.transpose() * X1).inverse() * X1.transpose() * X2;
  CHECK((R - explicit_R).norm() < 1e-12);
}

TEST_CASE("score and gradient size under the null at n = 200") {
  rng::Stream design(27, 0);
  Matrix X(200, 5);
  X.col(0).setOnes();
  for (int j = 1; j < 5; ++j)
    for (int i = 0; i < 200; ++i) X(i, j) = design.next_uniform();
  const Vector beta = (Vector(5) << 1.0, 1.0, 0.0, 0.0, 0.0).finished();
  const std::vector<int> subset{2, 3, 4};
  const std::vector<double> null{0.0, 0.0, 0.0};
  const double crit = specfun::chi2_quantile(0.95, 3);
  int used = 0, rej_score = 0, rej_grad = 0;
  for (int r = 0; r < 5000; ++r) {
    rng::Stream s(28, static_cast<std::uint64_t>(r));
    Vector y = X * beta;
    for (int i = 0; i < 200; ++i) y(i) += sample_sinh_normal({0.5, 0.0}, s);
    const TestReport t = test_beta_subset(Dataset(y, X), subset, null);
    if (!t.converged()) continue;
    ++used;
    rej_score += t.statistic(Statistic::score) > crit;
    rej_grad += t.statistic(Statistic::gradient) > crit;
  }
  CHECK(used >= 4950);
  const double rs = 100.0 * rej_score / used, rg = 100.0 * rej_grad / used;
  CHECK(rs >= 4.3);
  CHECK(rs <= 5.9);
  CHECK(rg >= 4.3);
  CHECK(rg <= 5.9);
}
