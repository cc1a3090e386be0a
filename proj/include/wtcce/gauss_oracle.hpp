#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wtcce/gauss_rates.hpp"

namespace wtcce {

using IndexSet = std::vector<std::size_t>;

// Second-moment matrix of a zero-mean jointly Gaussian vector, with one
// label per coordinate. Immutable once built.
class JointCovariance {
 public:
  JointCovariance(std::vector<std::string> labels, Eigen::MatrixXd matrix);

  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t size() const { return labels_.size(); }

  // Index of a label; throws std::out_of_range if absent.
  std::size_t index(std::string_view label) const;
  IndexSet indices(std::initializer_list<std::string_view> labels) const;

  // Regularization floor: 1e-12 times the largest diagonal entry.
  double floor() const { return floor_; }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd matrix_;
  double floor_ = 0.0;
};

// Variables X_l, X_1e, X_2e, Y_l, Y_1e, Y_2e of the general model.
JointCovariance build_joint_covariance_general(const GeneralGaussianParams& p,
                                               const CorrelationTriple& rho);

// Variables X_l, X_1e, X_2e, Y_l, Y_1e_m, Y_1e_c, Y_2e_m, Y_2e_c of the
// orthogonal model. Inputs are independent unless rho says otherwise.
JointCovariance build_joint_covariance_orthogonal(const OrthogonalGaussianParams& p,
                                                  const CorrelationTriple& rho = {});

// I(A; B | C) in bits from log-determinants of principal submatrices. An
// empty C means unconditional. Eigenvalues below the covariance floor are
// clamped to the floor; small negative results are truncated to 0.
double mi_gaussian(const JointCovariance& cov, const IndexSet& a, const IndexSet& b,
                   const IndexSet& c = {});

// Var(target | given) via the Schur complement, using a floor-truncated
// pseudo-inverse of the conditioning block.
double schur_conditional_variance(const JointCovariance& cov, std::size_t target,
                                  const IndexSet& given);

// Every term of the general-model rate recomputed from the covariance:
//   main = I(X_l;Y_l), RL1 = I(X_l; Y_1e,Y_2e | X_1e,X_2e), A_j = I(X_l,X_1e,X_2e; Y_je).
// Degenerate inputs (zero powers, |rho_12| = 1) are admitted.
RateBreakdown rate_general_oracle(const GeneralGaussianParams& p, const CorrelationTriple& rho);

// Orthogonal counterpart; A_j observes the pair (Y_je_m, Y_je_c).
RateBreakdown rate_orthogonal_oracle(const OrthogonalGaussianParams& p,
                                     const CorrelationTriple& rho = {});

}  // namespace wtcce
