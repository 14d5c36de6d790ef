#include "bsreg/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "bsreg/error.hpp"
#include "bsreg/specfun.hpp"

namespace bsreg {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;

Vector information_std_errors(const Theta& theta, const Dataset& data) {
  const FisherInfo k = fisher_info(theta, data);
  const Matrix inv = k.beta_block.llt().solve(Matrix::Identity(data.p(), data.p()));
  Vector se(data.p() + 1);
  se.head(data.p()) = inv.diagonal().cwiseSqrt();
  se(data.p()) = theta.alpha / std::sqrt(2.0 * data.n());
  return se;
}

// Negative log-likelihood over the free coordinates z = (beta_free, log alpha?).
class Objective {
 public:
  Objective(const Dataset& data, const Restriction& r) : data_(data) {
    const int p = data.p();
    std::vector<bool> fixed(p, false);
    beta_fixed_ = Vector::Zero(p);
    if (r.kind == Restriction::Kind::fix_beta_subset) {
      for (std::size_t k = 0; k < r.fixed_indices.size(); ++k) {
        fixed[r.fixed_indices[k]] = true;
        beta_fixed_(r.fixed_indices[k]) = r.fixed_values[k];
      }
    }
    for (int j = 0; j < p; ++j) {
      if (!fixed[j]) free_.push_back(j);
    }
    alpha_free_ = r.kind != Restriction::Kind::fix_alpha;
    alpha_fixed_ = r.alpha0;

    X_free_.resize(data.n(), static_cast<Eigen::Index>(free_.size()));
    for (std::size_t k = 0; k < free_.size(); ++k) X_free_.col(k) = data.X().col(free_[k]);
    offset_ = data.y() - data.X() * beta_fixed_;
  }

  int dim() const { return static_cast<int>(free_.size()) + (alpha_free_ ? 1 : 0); }
  int beta_dim() const { return static_cast<int>(free_.size()); }
  bool alpha_free() const { return alpha_free_; }
  const Matrix& X_free() const { return X_free_; }
  const Vector& offset() const { return offset_; }

  double alpha_of(const Vector& z) const { return alpha_free_ ? std::exp(z(beta_dim())) : alpha_fixed_; }

  Vector pack(const Vector& beta_free, double alpha) const {
    Vector z(dim());
    z.head(beta_dim()) = beta_free;
    if (alpha_free_) z(beta_dim()) = std::log(alpha);
    return z;
  }

  Theta unpack(const Vector& z) const {
    Theta t{beta_fixed_, alpha_of(z)};
    for (int k = 0; k < beta_dim(); ++k) t.beta(free_[k]) = z(k);
    return t;
  }

  // Returns -loglik; fills the gradient in z coordinates and the score (in the
  // natural parameterisation) over free coordinates.
  double eval(const Vector& z, Vector* grad_z, Vector* score_free) const {
    const double alpha = alpha_of(z);
    const Vector r = offset_ - X_free_ * z.head(beta_dim());
    Vector u_beta;
    double u_alpha = 0.0;
    const double ll = detail::loglik_and_score(r, alpha, X_free_, &u_beta, &u_alpha);
    if (score_free != nullptr) {
      score_free->resize(dim());
      score_free->head(beta_dim()) = u_beta;
      if (alpha_free_) (*score_free)(beta_dim()) = u_alpha;
    }
    if (grad_z != nullptr) {
      grad_z->resize(dim());
      grad_z->head(beta_dim()) = -u_beta;
      if (alpha_free_) (*grad_z)(beta_dim()) = -alpha * u_alpha;
    }
    return -ll;
  }

  // Inverse expected information in z coordinates; the initial BFGS metric.
  Matrix inverse_information(const Vector& z) const {
    Matrix h = Matrix::Zero(dim(), dim());
    if (beta_dim() > 0) {
      const double psi = specfun::psi(alpha_of(z));
      const Matrix kb = (psi / 4.0) * (X_free_.transpose() * X_free_);
      h.topLeftCorner(beta_dim(), beta_dim()) = kb.llt().solve(Matrix::Identity(beta_dim(), beta_dim()));
    }
    if (alpha_free_) h(beta_dim(), beta_dim()) = 1.0 / (2.0 * data_.n());
    return h;
  }

 private:
  const Dataset& data_;
  std::vector<int> free_;
  Vector beta_fixed_;
  bool alpha_free_ = true;
  double alpha_fixed_ = 1.0;
  Matrix X_free_;
  Vector offset_;
};

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

void Restriction::validate(int p) const {
  switch (kind) {
    case Kind::none:
      return;
    case Kind::fix_alpha:
      if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw DomainError("restricted alpha0 must be positive and finite");
      return;
    case Kind::fix_beta_subset: {
      if (fixed_indices.size() != fixed_values.size())
        throw ContractViolation("fixed index and value lists differ in length");
      std::set<int> seen;
      for (int j : fixed_indices) {
        if (j < 0 || j >= p) throw ContractViolation("fixed coefficient index " + std::to_string(j) + " out of range");
        if (!seen.insert(j).second) throw ContractViolation("fixed coefficient index " + std::to_string(j) + " repeated");
      }
      for (double v : fixed_values) {
        if (!std::isfinite(v)) throw ContractViolation("fixed coefficient values must be finite");
      }
      return;
    }
  }
}

Vector init_beta(const Dataset& data) { return data.X().colPivHouseholderQr().solve(data.y()); }

double init_alpha(const Dataset& data, const Vector& beta_init) {
  if (beta_init.size() != data.p()) throw ContractViolation("initial beta has the wrong length");
  const Vector r = data.y() - data.X() * beta_init;
  // residuals at rounding level count as zero
  const double scale = std::max(1.0, data.y().cwiseAbs().maxCoeff());
  if (!(r.cwiseAbs().maxCoeff() > 64.0 * std::numeric_limits<double>::epsilon() * scale))
    throw DataError("all residuals are zero; alpha estimate would be 0");
  const double sum = (0.5 * r).array().sinh().square().sum();
  return std::sqrt(4.0 * sum / data.n());
}

FitResult fit(const Dataset& data, const Restriction& restriction, const FitOptions& options) {
  restriction.validate(data.p());
  const Objective obj(data, restriction);

  Vector beta0(obj.beta_dim());
  if (obj.beta_dim() > 0) beta0 = obj.X_free().colPivHouseholderQr().solve(obj.offset());
  double alpha_start = restriction.alpha0;
  if (obj.alpha_free()) {
    const Vector r = obj.offset() - obj.X_free() * beta0;
    const double sum = (0.5 * r).array().sinh().square().sum();
    if (!(sum > 0.0)) throw DataError("all residuals are zero; alpha estimate would be 0");
    alpha_start = std::sqrt(4.0 * sum / data.n());
  }

  FitResult result;
  Vector z = obj.pack(beta0, alpha_start);
  Vector g;
  Vector u;
  double f = obj.eval(z, &g, &u);
  if (!std::isfinite(f)) throw NumericalError("log-likelihood is not finite at the starting values");

  const Matrix h0 = obj.inverse_information(z);
  Matrix h = h0;
  int iter = 0;
  bool converged = false;
  bool reset_once = false;

  for (; iter <= options.max_iterations; ++iter) {
    if (sup_norm(u) < options.gradient_tolerance * std::max(1.0, std::fabs(f))) {
      converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    Vector d = -(h * g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      h = obj.inverse_information(z);
      d = -(h * g);
      slope = g.dot(d);
    }

    double step = 1.0;
    Vector z_new;
    Vector g_new;
    Vector u_new;
    double f_new = 0.0;
    bool accepted = false;
    while (step > kMinStep) {
      z_new = z + step * d;
      f_new = obj.eval(z_new, &g_new, &u_new);
      if (std::isfinite(f_new)) {
        if (f_new <= f + kArmijo * step * slope) {
          accepted = true;
          break;
        }
        // At the optimum rounding swamps the decrease test; accept a step that
        // leaves f flat but shrinks the gradient.
        if (std::fabs(f_new - f) <= 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(f) &&
            sup_norm(u_new) < sup_norm(u)) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (reset_once) break;
      reset_once = true;
      h = obj.inverse_information(z);
      continue;
    }
    reset_once = false;

    const Vector s = z_new - z;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Vector hy = h * y;
      // H+ = (I - rho s y') H (I - rho y s') + rho s s'
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
    }
    z = std::move(z_new);
    g = std::move(g_new);
    u = std::move(u_new);
    f = f_new;

    if (obj.alpha_of(z) < options.alpha_floor)
      throw NumericalError("alpha driven below " + std::to_string(options.alpha_floor) + " (boundary of parameter space)");
  }

  result.theta_hat = obj.unpack(z);
  result.loglik_value = -f;
  result.iterations = iter;
  result.converged = converged;
  result.gradient_norm = sup_norm(u);
  result.std_errors = information_std_errors(result.theta_hat, data);
  return result;
}

Vector std_errors(const FitResult& fit, const Dataset& data) {
  if (!fit.converged) throw ContractViolation("standard errors requested for a non-converged fit");
  detail::check_theta(fit.theta_hat, data);
  return information_std_errors(fit.theta_hat, data);
}

}  // namespace bsreg
