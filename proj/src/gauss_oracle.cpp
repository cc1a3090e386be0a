#include "wtcce/gauss_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wtcce/errors.hpp"

namespace wtcce {

namespace {

constexpr double kRelativeFloor = 1e-12;
constexpr double kPsdTolerance = 1e-10;

Eigen::MatrixXd principal(const Eigen::MatrixXd& m, const IndexSet& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(idx[i], idx[j]);
  }
  return out;
}

IndexSet join(const IndexSet& a, const IndexSet& b) {
  IndexSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Natural-log determinant with eigenvalues clamped at `floor`.
double log_det(const Eigen::MatrixXd& m, double floor) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!std::isfinite(ev[i])) throw NumericalError("non-finite eigenvalue in covariance");
    if (ev[i] < -kPsdTolerance * scale) {
      throw NumericalError("covariance block is not positive semidefinite");
    }
    acc += std::log(std::max(ev[i], floor));
  }
  return acc;
}

void check_disjoint(const IndexSet& a, const IndexSet& b, const IndexSet& c, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const IndexSet* s : {&a, &b, &c}) {
    for (std::size_t i : *s) {
      if (i >= n) throw std::out_of_range("mi_gaussian: index out of range");
      if (seen[i]++) throw PreconditionError("mi_gaussian: index sets must be disjoint");
    }
  }
}

Eigen::MatrixXd input_covariance(double p0, double p1, double p2, const CorrelationTriple& rho) {
  Eigen::Matrix3d corr;
  corr << 1.0, rho.rho_1, rho.rho_2,  //
      rho.rho_1, 1.0, rho.rho_12,     //
      rho.rho_2, rho.rho_12, 1.0;
  const Eigen::Vector3d sd(std::sqrt(p0), std::sqrt(p1), std::sqrt(p2));
  return sd.asDiagonal() * corr * sd.asDiagonal();
}

// Stacks (X, H X + Z) for inputs X with covariance sx, noise powers on the diagonal.
Eigen::MatrixXd linear_model_covariance(const Eigen::MatrixXd& sx, const Eigen::MatrixXd& h,
                                        const Eigen::VectorXd& noise) {
  const Eigen::Index nx = sx.rows();
  const Eigen::Index ny = h.rows();
  Eigen::MatrixXd out(nx + ny, nx + ny);
  out.topLeftCorner(nx, nx) = sx;
  out.topRightCorner(nx, ny) = sx * h.transpose();
  out.bottomLeftCorner(ny, nx) = h * sx;
  Eigen::MatrixXd yy = h * sx * h.transpose();
  yy.diagonal() += noise;
  out.bottomRightCorner(ny, ny) = yy;
  return out;
}

}  // namespace

JointCovariance::JointCovariance(std::vector<std::string> labels, Eigen::MatrixXd matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() ||
      static_cast<std::size_t>(matrix_.rows()) != labels_.size()) {
    throw PreconditionError("JointCovariance: label count does not match matrix shape");
  }
  if (!matrix_.allFinite()) throw NumericalError("JointCovariance: non-finite entry");
  // Exact symmetry keeps every principal block self-adjoint.
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
  const double max_diag = matrix_.size() ? matrix_.diagonal().maxCoeff() : 0.0;
  floor_ = kRelativeFloor * std::max(max_diag, 1e-300);
}

std::size_t JointCovariance::index(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown variable " + std::string(label));
  return static_cast<std::size_t>(it - labels_.begin());
}

IndexSet JointCovariance::indices(std::initializer_list<std::string_view> labels) const {
  IndexSet out;
  for (auto l : labels) out.push_back(index(l));
  return out;
}

JointCovariance build_joint_covariance_general(const GeneralGaussianParams& p,
                                               const CorrelationTriple& rho) {
  p.validate();
  validate_correlation(rho);
  const Eigen::MatrixXd sx = input_covariance(p.P_l, p.P_1e, p.P_2e, rho);
  Eigen::MatrixXd h(3, 3);
  h << p.h_l, p.h_1e_l, p.h_2e_l,  //
      p.h_l_1e, 0.0, p.h_2e_1e,    //
      p.h_l_2e, p.h_1e_2e, 0.0;
  const Eigen::Vector3d noise(p.N_l, p.N_1e, p.N_2e);
  return JointCovariance({"X_l", "X_1e", "X_2e", "Y_l", "Y_1e", "Y_2e"},
                         linear_model_covariance(sx, h, noise));
}

JointCovariance build_joint_covariance_orthogonal(const OrthogonalGaussianParams& p,
                                                  const CorrelationTriple& rho) {
  p.validate();
  validate_correlation(rho);
  const Eigen::MatrixXd sx = input_covariance(p.P_l, p.P_1e, p.P_2e, rho);
  Eigen::MatrixXd h(5, 3);
  h << p.h_l, 0.0, 0.0,   //
      p.h_1m, 0.0, 0.0,   //
      0.0, 0.0, p.h_1c,   //
      p.h_2m, 0.0, 0.0,   //
      0.0, p.h_2c, 0.0;
  Eigen::VectorXd noise(5);
  noise << p.N_l, p.N_1e_m, p.N_1e_c, p.N_2e_m, p.N_2e_c;
  return JointCovariance({"X_l", "X_1e", "X_2e", "Y_l", "Y_1e_m", "Y_1e_c", "Y_2e_m", "Y_2e_c"},
                         linear_model_covariance(sx, h, noise));
}

double mi_gaussian(const JointCovariance& cov, const IndexSet& a, const IndexSet& b,
                   const IndexSet& c) {
  check_disjoint(a, b, c, cov.size());
  if (a.empty() || b.empty()) return 0.0;
  const Eigen::MatrixXd& m = cov.matrix();
  const double f = cov.floor();
  const double nats = log_det(principal(m, join(a, c)), f) +
                      log_det(principal(m, join(b, c)), f) - log_det(principal(m, c), f) -
                      log_det(principal(m, join(join(a, b), c)), f);
  const double bits = 0.5 * nats / std::numbers::ln2;
  if (!std::isfinite(bits)) throw NumericalError("mi_gaussian: non-finite result");
  return std::max(0.0, bits);
}

double schur_conditional_variance(const JointCovariance& cov, std::size_t target,
                                  const IndexSet& given) {
  if (target >= cov.size()) throw std::out_of_range("schur_conditional_variance: bad target");
  if (std::find(given.begin(), given.end(), target) != given.end()) return 0.0;
  const Eigen::MatrixXd& m = cov.matrix();
  const double var = m(target, target);
  if (given.empty()) return var;

  const Eigen::MatrixXd gg = principal(m, given);
  Eigen::VectorXd tg(static_cast<Eigen::Index>(given.size()));
  for (std::size_t i = 0; i < given.size(); ++i) tg[i] = m(target, given[i]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gg);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * tg;
  double explained = 0.0;
  for (Eigen::Index i = 0; i < proj.size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev > cov.floor()) explained += proj[i] * proj[i] / ev;
  }
  return std::max(0.0, var - explained);
}

RateBreakdown rate_general_oracle(const GeneralGaussianParams& p, const CorrelationTriple& rho) {
  const JointCovariance cov = build_joint_covariance_general(p, rho);
  const IndexSet x_l = cov.indices({"X_l"});
  const IndexSet x_all = cov.indices({"X_l", "X_1e", "X_2e"});
  const IndexSet x_e = cov.indices({"X_1e", "X_2e"});
  const double main = mi_gaussian(cov, x_l, cov.indices({"Y_l"}));
  const double rl1 = mi_gaussian(cov, x_l, cov.indices({"Y_1e", "Y_2e"}), x_e);
  const double a1 = mi_gaussian(cov, x_all, cov.indices({"Y_1e"}));
  const double a2 = mi_gaussian(cov, x_all, cov.indices({"Y_2e"}));
  return combine_rates(main, rl1, a1, a2);
}

RateBreakdown rate_orthogonal_oracle(const OrthogonalGaussianParams& p,
                                     const CorrelationTriple& rho) {
  const JointCovariance cov = build_joint_covariance_orthogonal(p, rho);
  const IndexSet x_l = cov.indices({"X_l"});
  const IndexSet x_all = cov.indices({"X_l", "X_1e", "X_2e"});
  const double main = mi_gaussian(cov, x_l, cov.indices({"Y_l"}));
  const double rl1 = mi_gaussian(cov, x_l, cov.indices({"Y_1e_m", "Y_1e_c", "Y_2e_m", "Y_2e_c"}),
                                 cov.indices({"X_1e", "X_2e"}));
  const double a1 = mi_gaussian(cov, x_all, cov.indices({"Y_1e_m", "Y_1e_c"}));
  const double a2 = mi_gaussian(cov, x_all, cov.indices({"Y_2e_m", "Y_2e_c"}));
  return combine_rates(main, rl1, a1, a2);
}

}  // namespace wtcce
