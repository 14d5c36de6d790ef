#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace bsreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Log-lifetimes y and a full-column-rank design X. Immutable once built; the
// constructor rejects shapes with n <= p, non-finite entries and rank
// deficiency (column-pivoted QR, relative threshold kRankTolerance).
class Dataset {
 public:
  static constexpr double kRankTolerance = 1e-10;

  Dataset(Vector y, Matrix X, std::vector<std::string> column_names = {});

  const Vector& y() const { return y_; }
  const Matrix& X() const { return X_; }
  int n() const { return static_cast<int>(y_.size()); }
  int p() const { return static_cast<int>(X_.cols()); }
  const std::vector<std::string>& column_names() const { return names_; }

  // Index of a named column, or -1.
  int column_index(const std::string& name) const;

 private:
  Vector y_;
  Matrix X_;
  std::vector<std::string> names_;
};

// Parameter point (beta, alpha).
struct Theta {
  Vector beta;
  double alpha = 1.0;
};

// xi1 = (2/alpha) cosh((y - mu)/2), xi2 = (2/alpha) sinh((y - mu)/2) and
// s = xi1 xi2 - xi2 / xi1, evaluated per observation.
struct XiVectors {
  Vector xi1;
  Vector xi2;
  Vector s;
};

struct Score {
  Vector beta;
  double alpha = 0.0;
};

// The expected information is block diagonal: psi(alpha) X'X / 4 for beta and
// 2n / alpha^2 for alpha, with an exactly zero cross block.
struct FisherInfo {
  Matrix beta_block;
  double alpha_block = 0.0;

  Matrix dense() const;
};

XiVectors xi(const Theta& theta, const Dataset& data);

// Log-likelihood up to an additive constant: sum log xi1 - sum xi2^2 / 2.
double loglik(const Theta& theta, const Dataset& data);

Score score(const Theta& theta, const Dataset& data);

FisherInfo fisher_info(const Theta& theta, const Dataset& data);

namespace detail {
// Shared kernel: log-likelihood and score from residuals r = y - X beta.
double loglik_and_score(const Vector& residuals, double alpha, const Matrix& X, Vector* score_beta,
                        double* score_alpha);
void check_theta(const Theta& theta, const Dataset& data);
}  // namespace detail

}  // namespace bsreg
