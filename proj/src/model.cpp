#include "bsreg/model.hpp"

#include <cmath>
#include <numbers>

#include "bsreg/error.hpp"
#include "bsreg/specfun.hpp"

namespace bsreg {
namespace {

// log cosh(x) without overflow.
double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace

Dataset::Dataset(Vector y, Matrix X, std::vector<std::string> column_names)
    : y_(std::move(y)), X_(std::move(X)), names_(std::move(column_names)) {
  if (X_.rows() != y_.size())
    throw DataError("design has " + std::to_string(X_.rows()) + " rows but response has " +
                            std::to_string(y_.size()));
  if (X_.cols() < 1) throw DataError("design matrix has no columns");
  if (names_.empty()) {
    for (int j = 0; j < X_.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<int>(names_.size()) != X_.cols()) throw ContractViolation("column name count does not match design");
  if (y_.size() <= X_.cols())
    throw DataError("need more observations than columns (n=" + std::to_string(y_.size()) +
                    ", p=" + std::to_string(X_.cols()) + ")");
  if (!y_.allFinite()) throw DataError("response contains non-finite values");
  for (int j = 0; j < X_.cols(); ++j) {
    if (!X_.col(j).allFinite()) throw DataError("column '" + names_[j] + "' contains non-finite values");
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(X_);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < X_.cols()) {
    // columns that carry weight in some null-space direction
    Eigen::JacobiSVD<Matrix> svd(X_, Eigen::ComputeFullV);
    const Matrix null = svd.matrixV().rightCols(X_.cols() - qr.rank());
    std::string offending;
    for (int j = 0; j < X_.cols(); ++j) {
      if (null.row(j).cwiseAbs().maxCoeff() < 1e-8) continue;
      if (!offending.empty()) offending += ", ";
      offending += "'" + names_[j] + "'";
    }
    throw DataError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(X_.cols()) + "); linearly dependent column(s): " + offending);
  }
}

int Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<int>(j);
  }
  return -1;
}

Matrix FisherInfo::dense() const {
  const auto p = beta_block.rows();
  Matrix k = Matrix::Zero(p + 1, p + 1);
  k.topLeftCorner(p, p) = beta_block;
  k(p, p) = alpha_block;
  return k;
}

namespace detail {

void check_theta(const Theta& theta, const Dataset& data) {
  if (theta.beta.size() != data.p())
    throw ContractViolation("beta has length " + std::to_string(theta.beta.size()) + ", design has " +
                            std::to_string(data.p()) + " columns");
  if (!(theta.alpha > 0.0) || !std::isfinite(theta.alpha)) throw DomainError("alpha must be positive and finite");
}

double loglik_and_score(const Vector& residuals, double alpha, const Matrix& X, Vector* score_beta,
                        double* score_alpha) {
  const auto n = residuals.size();
  const double inv_a2 = 1.0 / (alpha * alpha);
  double sum_log_cosh = 0.0;
  double sum_sinh2 = 0.0;
  Vector s;
  if (score_beta != nullptr) s.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = 0.5 * residuals(i);
    const double sh = std::sinh(h);
    sum_log_cosh += log_cosh(h);
    sum_sinh2 += sh * sh;
    if (score_beta != nullptr) s(i) = 2.0 * inv_a2 * std::sinh(residuals(i)) - std::tanh(h);
  }
  const double nd = static_cast<double>(n);
  const double sum_xi2_sq = 4.0 * inv_a2 * sum_sinh2;
  if (score_beta != nullptr) *score_beta = 0.5 * (X.transpose() * s);
  if (score_alpha != nullptr) *score_alpha = (-nd + sum_xi2_sq) / alpha;
  return nd * std::log(2.0 / alpha) + sum_log_cosh - 0.5 * sum_xi2_sq;
}

}  // namespace detail

XiVectors xi(const Theta& theta, const Dataset& data) {
  detail::check_theta(theta, data);
  const Vector half = 0.5 * (data.y() - data.X() * theta.beta);
  const double k = 2.0 / theta.alpha;
  XiVectors out;
  out.xi1 = k * half.array().cosh();
  out.xi2 = k * half.array().sinh();
  out.s = out.xi1.cwiseProduct(out.xi2) - out.xi2.cwiseQuotient(out.xi1);
  return out;
}

double loglik(const Theta& theta, const Dataset& data) {
  detail::check_theta(theta, data);
  const Vector r = data.y() - data.X() * theta.beta;
  return detail::loglik_and_score(r, theta.alpha, data.X(), nullptr, nullptr);
}

Score score(const Theta& theta, const Dataset& data) {
  detail::check_theta(theta, data);
  const Vector r = data.y() - data.X() * theta.beta;
  Score u;
  detail::loglik_and_score(r, theta.alpha, data.X(), &u.beta, &u.alpha);
  return u;
}

FisherInfo fisher_info(const Theta& theta, const Dataset& data) {
  detail::check_theta(theta, data);
  FisherInfo k;
  k.beta_block = (specfun::psi(theta.alpha) / 4.0) * (data.X().transpose() * data.X());
  k.alpha_block = 2.0 * data.n() / (theta.alpha * theta.alpha);
  return k;
}

}  // namespace bsreg
