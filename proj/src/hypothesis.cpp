#include "bsreg/hypothesis.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "bsreg/error.hpp"
#include "bsreg/specfun.hpp"

namespace bsreg {

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::likelihood_ratio: return "likelihood_ratio";
    case Statistic::wald: return "wald";
    case Statistic::score: return "score";
    case Statistic::gradient: return "gradient";
  }
  return "?";
}

std::string_view statistic_symbol(Statistic s) {
  switch (s) {
    case Statistic::likelihood_ratio: return "S1";
    case Statistic::wald: return "S2";
    case Statistic::score: return "S3";
    case Statistic::gradient: return "S4";
  }
  return "?";
}

double asymptotic_p_value(double statistic, int df) {
  if (!(statistic > 0.0)) return 1.0;
  return 1.0 - specfun::chi2_cdf(statistic, df);
}

Matrix partial_out(const Matrix& X1, const Matrix& X2) {
  if (X1.cols() == 0) return X2;
  const Matrix coef = X1.colPivHouseholderQr().solve(X2);
  return X2 - X1 * coef;
}

namespace {

void fill_p_values(TestReport& rep) {
  for (int i = 0; i < 4; ++i) rep.p_values[i] = asymptotic_p_value(rep.statistics[i], rep.df);
}

}  // namespace

TestReport test_beta_subset(const Dataset& data, std::span<const int> subset, std::span<const double> beta2_0,
                            const FitOptions& options) {
  const int p = data.p();
  if (subset.empty()) throw ContractViolation("tested coefficient set is empty");
  if (subset.size() != beta2_0.size()) throw ContractViolation("tested coefficients and null values differ in length");
  std::set<int> tested;
  for (int j : subset) {
    if (j < 0 || j >= p) throw ContractViolation("tested column index " + std::to_string(j) + " out of range");
    if (!tested.insert(j).second) throw ContractViolation("tested column index " + std::to_string(j) + " repeated");
  }
  if (static_cast<int>(tested.size()) == p)
    throw UnsupportedError("testing every regression coefficient at once is not supported; at least one nuisance "
                           "coefficient must remain free");

  const auto q = static_cast<int>(subset.size());
  Matrix X1(data.n(), p - q);
  Matrix X2(data.n(), q);
  for (int j = 0, k = 0; j < p; ++j) {
    if (!tested.contains(j)) X1.col(k++) = data.X().col(j);
  }
  for (int k = 0; k < q; ++k) X2.col(k) = data.X().col(subset[k]);

  TestReport rep;
  rep.df = q;
  rep.unrestricted = fit(data, Restriction::unrestricted(), options);
  rep.restricted = fit(data, Restriction::fix_beta({subset.begin(), subset.end()}, {beta2_0.begin(), beta2_0.end()}),
                       options);

  const Theta& hat = rep.unrestricted.theta_hat;
  const Theta& tilde = rep.restricted.theta_hat;
  Vector diff(q);
  for (int k = 0; k < q; ++k) diff(k) = hat.beta(subset[k]) - beta2_0[k];

  const Matrix R = partial_out(X1, X2);
  const Matrix rtr = R.transpose() * R;
  const Vector s_tilde = xi(tilde, data).s;
  const Vector v = X2.transpose() * s_tilde;

  rep.statistics[0] = 2.0 * (rep.unrestricted.loglik_value - rep.restricted.loglik_value);
  rep.statistics[1] = specfun::psi(hat.alpha) / 4.0 * diff.dot(rtr * diff);
  rep.statistics[2] = v.dot(rtr.llt().solve(v)) / specfun::psi(tilde.alpha);
  rep.statistics[3] = 0.5 * v.dot(diff);
  fill_p_values(rep);
  return rep;
}

TestReport test_alpha(const Dataset& data, double alpha0, const FitOptions& options) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw DomainError("alpha0 must be positive and finite");
  TestReport rep;
  rep.df = 1;
  rep.unrestricted = fit(data, Restriction::unrestricted(), options);
  rep.restricted = fit(data, Restriction::fix_alpha(alpha0), options);

  const double n = data.n();
  const double a_hat = rep.unrestricted.theta_hat.alpha;
  const double xi2_bar = xi(rep.restricted.theta_hat, data).xi2.squaredNorm() / n;
  const double rel = (a_hat - alpha0) / a_hat;

  rep.statistics[0] = 2.0 * (rep.unrestricted.loglik_value - rep.restricted.loglik_value);
  rep.statistics[1] = 2.0 * n * rel * rel;
  rep.statistics[2] = n * (xi2_bar - 1.0) * (xi2_bar - 1.0) / 2.0;
  rep.statistics[3] = n * (xi2_bar - 1.0) * (a_hat - alpha0) / alpha0;
  fill_p_values(rep);
  return rep;
}

}  // namespace bsreg
