#include "bsreg/localpower.hpp"

#include <cmath>
#include <set>
#include <string>

#include "bsreg/error.hpp"
#include "bsreg/specfun.hpp"

namespace bsreg {
namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
}

void fill_intercepts(CoeffTable& t) {
  for (auto& row : t.b) row[0] = -(row[1] + row[2] + row[3]);
}

}  // namespace

double beta_noncentrality(const BetaPitmanSpec& spec) {
  const auto p = static_cast<int>(spec.design.cols());
  const auto q = static_cast<int>(spec.tested.size());
  if (q == 0 || q >= p) throw ContractViolation("tested set must be a nonempty proper subset of the columns");
  if (spec.epsilon.size() != q) throw ContractViolation("epsilon length must match the tested set");
  if (!(spec.alpha > 0.0)) throw DomainError("alpha must be positive");
  std::set<int> tested;
  for (int j : spec.tested) {
    if (j < 0 || j >= p || !tested.insert(j).second) throw ContractViolation("invalid tested column index");
  }

  // Order theta as (beta1, beta2, alpha).
  std::vector<int> order;
  for (int j = 0; j < p; ++j) {
    if (!tested.contains(j)) order.push_back(j);
  }
  order.insert(order.end(), spec.tested.begin(), spec.tested.end());
  Matrix X(spec.design.rows(), p);
  for (int k = 0; k < p; ++k) X.col(k) = spec.design.col(order[k]);

  const int q1 = p - q;
  const double psi = specfun::psi(spec.alpha);
  Matrix k_theta = Matrix::Zero(p + 1, p + 1);
  k_theta.topLeftCorner(p, p) = (psi / 4.0) * (X.transpose() * X);
  k_theta(p, p) = 2.0 * static_cast<double>(X.rows()) / (spec.alpha * spec.alpha);

  const Matrix k11 = k_theta.topLeftCorner(q1, q1);
  const Matrix k12 = k_theta.block(0, q1, q1, q);
  Eigen::LDLT<Matrix> k11_ldlt(k11);
  if (k11_ldlt.info() != Eigen::Success || !k11_ldlt.isPositive())
    throw ContractViolation("nuisance block of the design is rank deficient");

  Vector eps_star = Vector::Zero(p + 1);
  eps_star.head(q1) = k11_ldlt.solve(k12 * spec.epsilon);
  eps_star.segment(q1, q) = -spec.epsilon;
  return std::max(0.0, eps_star.dot(k_theta * eps_star));
}

double beta_local_power(double lambda, int df, double level) {
  check_level(level);
  if (!(lambda >= 0.0)) throw DomainError("noncentrality must be >= 0");
  const double x = specfun::chi2_quantile(1.0 - level, df);
  return 1.0 - specfun::nc_chi2_cdf(x, {df, lambda});
}

void AlphaPitmanSpec::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw DomainError("alpha0 must be positive and finite");
  if (!std::isfinite(epsilon) || !(alpha0 + epsilon > 0.0)) throw DomainError("alpha0 + epsilon must be positive");
  if (n < 1 || p < 1) throw DomainError("n and p must be positive");
  check_level(level);
}

AlphaCumulants alpha_cumulants(double alpha, const Matrix& design) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  const double n = static_cast<double>(design.rows());
  const double a3 = alpha * alpha * alpha;
  AlphaCumulants c;
  c.k_aaa = 10.0 * n / a3;
  c.k_a_aa = -6.0 * n / a3;
  c.k_a_a_a = 8.0 * n / a3;
  c.k_inv_aa = alpha * alpha / (2.0 * n);
  const Matrix xtx = design.transpose() * design;
  c.k_rsa = ((2.0 + alpha * alpha) / a3) * xtx;
  c.k_r_sa = -c.k_rsa;
  const Matrix k_beta = (specfun::psi(alpha) / 4.0) * xtx;
  c.k_inv_beta = k_beta.llt().solve(Matrix::Identity(design.cols(), design.cols()));
  return c;
}

CoeffTable alpha_coeffs_reduced(const AlphaPitmanSpec& spec) {
  spec.validate();
  const double a = spec.alpha0;
  const double e = spec.epsilon;
  const double n = spec.n;
  const double cube = n * e * e * e / (a * a * a);
  const double trace = 2.0 * spec.p * (2.0 + a * a) * e / (a * a * a * specfun::psi(a));

  CoeffTable t;
  t.b[0] = {0.0, -3.0 * cube - trace, 4.0 * cube / 3.0, 0.0};
  t.b[1] = {0.0, -3.0 * cube + 5.0 * e / (2.0 * a) - trace, 3.0 * cube - 5.0 * e / (2.0 * a), -5.0 * cube / 3.0};
  t.b[2] = {0.0, -3.0 * cube - 2.0 * e / a - trace, 2.0 * e / a, 4.0 * cube / 3.0};
  t.b[3] = {0.0, -3.0 * cube - 5.0 * e / (4.0 * a) - trace, 5.0 * e / (4.0 * a) + cube / 2.0, 5.0 * cube / 6.0};
  fill_intercepts(t);
  return t;
}

CoeffTable alpha_coeffs_general(const AlphaPitmanSpec& spec, const Matrix& design) {
  spec.validate();
  if (design.rows() != spec.n || design.cols() != spec.p)
    throw ContractViolation("design dimensions do not match the spec's n and p");
  const AlphaCumulants c = alpha_cumulants(spec.alpha0, design);
  const double e = spec.epsilon;
  const double e3 = e * e * e;

  // sum_{r,s} kappa_{rs alpha} kappa^{r,s} and its kappa_{r,s alpha} analogue.
  const double t_rsa = c.k_rsa.cwiseProduct(c.k_inv_beta).sum();
  const double t_r_sa = c.k_r_sa.cwiseProduct(c.k_inv_beta).sum();
  const double mixed = (t_rsa + 2.0 * t_r_sa) * e / 2.0;

  CoeffTable t;
  t.b[0][1] = (c.k_aaa - 2.0 * c.k_a_a_a) * e3 / 6.0 + mixed - (c.k_aaa + c.k_a_aa) * e3 / 2.0;
  t.b[0][2] = c.k_a_a_a * e3 / 6.0;
  t.b[0][3] = 0.0;

  t.b[1][1] = (c.k_aaa + 2.0 * c.k_a_aa) * e3 / 2.0 - c.k_a_aa * c.k_inv_aa * e + mixed +
              (c.k_aaa + 2.0 * c.k_a_aa) * c.k_inv_aa * e / 2.0 - (c.k_aaa + c.k_a_aa) * e3 / 2.0;
  t.b[1][2] = -(c.k_a_aa * e3 + c.k_aaa * c.k_inv_aa * e) / 2.0;
  t.b[1][3] = -c.k_aaa * e3 / 6.0;

  t.b[2][1] = (c.k_aaa - 2.0 * c.k_a_a_a) * e3 / 6.0 - c.k_a_a_a * c.k_inv_aa * e / 2.0 + mixed -
              (c.k_aaa + c.k_a_aa) * e3 / 2.0;
  t.b[2][2] = c.k_a_a_a * c.k_inv_aa * e / 2.0;
  t.b[2][3] = c.k_a_a_a * e3 / 6.0;

  t.b[3][1] = -t_rsa * e / 4.0 - c.k_aaa * c.k_inv_aa * e / 4.0 + c.k_a_aa * e3 / 2.0 +
              (4.0 * t_r_sa + 3.0 * t_rsa) * e / 4.0;
  t.b[3][2] = c.k_aaa * c.k_inv_aa * e / 4.0 - (c.k_aaa + 2.0 * c.k_a_aa) * e3 / 4.0;
  t.b[3][3] = c.k_aaa * e3 / 12.0;
  fill_intercepts(t);
  return t;
}

double alpha_noncentrality(const AlphaPitmanSpec& spec) {
  spec.validate();
  return 2.0 * spec.n * spec.epsilon * spec.epsilon / (spec.alpha0 * spec.alpha0);
}

namespace {

std::array<double, 4> expansion_cdfs(double x, double lambda) {
  std::array<double, 4> g{};
  for (int k = 0; k < 4; ++k) g[k] = specfun::nc_chi2_cdf(x, {1 + 2 * k, lambda});
  return g;
}

double correction(const CoeffTable& t, Statistic s, const std::array<double, 4>& g) {
  double c = 0.0;
  for (int k = 0; k < 4; ++k) c += t(s, k) * g[k];
  return c;
}

}  // namespace

double alpha_nonnull_cdf(Statistic s, double x, const AlphaPitmanSpec& spec) {
  const double lambda = alpha_noncentrality(spec);
  const auto g = expansion_cdfs(x, lambda);
  return g[0] + correction(alpha_coeffs_reduced(spec), s, g);
}

std::array<double, 6> alpha_power_differences(const AlphaPitmanSpec& spec, double x) {
  const double lambda = alpha_noncentrality(spec);
  if (!(x > 0.0)) throw DomainError("power differences need x > 0");
  const double g5 = specfun::nc_chi2_pdf(x, {5, lambda});
  const double g7 = specfun::nc_chi2_pdf(x, {7, lambda});
  const double a = spec.alpha0;
  const double e = spec.epsilon;
  const double lin = e / a;
  const double cube = spec.n * e * e * e / (a * a * a);
  // Pi_i - Pi_1 = u_i (eps/alpha) g5 + v_i (n eps^3/alpha^3) g7.
  constexpr std::array<double, 4> u = {0.0, -5.0, 4.0, 5.0 / 2.0};
  constexpr std::array<double, 4> v = {0.0, -10.0 / 3.0, 8.0 / 3.0, 5.0 / 3.0};
  std::array<double, 6> out{};
  for (std::size_t k = 0; k < kPowerPairs.size(); ++k) {
    const int i = static_cast<int>(kPowerPairs[k].first);
    const int j = static_cast<int>(kPowerPairs[k].second);
    out[k] = (u[i] - u[j]) * lin * g5 + (v[i] - v[j]) * cube * g7;
  }
  return out;
}

AlphaPowerTable alpha_local_power(const AlphaPitmanSpec& spec) {
  AlphaPowerTable out;
  out.coeffs = alpha_coeffs_reduced(spec);
  out.lambda = alpha_noncentrality(spec);
  out.critical_value = specfun::chi2_quantile(1.0 - spec.level, 1);
  const auto g = expansion_cdfs(out.critical_value, out.lambda);
  for (Statistic s : kAllStatistics) {
    const int i = static_cast<int>(s);
    out.correction[i] = correction(out.coeffs, s, g);
    out.power[i] = 1.0 - (g[0] + out.correction[i]);
    if (std::fabs(out.correction[i]) > kLocalRegimeLimit) out.outside_local_regime = true;
    if (out.power[i] < 0.0 || out.power[i] > 1.0) out.outside_local_regime = true;
  }
  if (std::fabs(spec.epsilon) > kLocalShiftLimit * spec.alpha0) out.outside_local_regime = true;
  return out;
}

}  // namespace bsreg
