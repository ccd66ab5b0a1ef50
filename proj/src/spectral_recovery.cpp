#include "lrb/spectral_recovery.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "lrb/errors.hpp"

namespace lrb {

Eigen::MatrixXd build_m_tilde(const Trajectory& traj, const JointDist& omega, int m, int n) {
  if (omega.omega.rows() != m || omega.omega.cols() != n)
    throw DimensionMismatch("build_m_tilde: omega shape mismatch");
  if (omega.omega_min <= 0.0)
    throw ZeroPropensity("build_m_tilde: omega has a zero cell; IPS weights undefined");
  const long long T = static_cast<long long>(traj.samples.size());
  if (T == 0) throw std::invalid_argument("build_m_tilde: empty trajectory");

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(m, n);
  for (const Sample& s : traj.samples) {
    if (s.i < 0 || s.i >= m || s.j < 0 || s.j >= n)
      throw DimensionMismatch("build_m_tilde: sample index out of range");
    sums(s.i, s.j) += s.r;
  }
  return sums.cwiseQuotient(static_cast<double>(T) * omega.omega);
}

SubspaceEstimate truncated_svd(const Eigen::MatrixXd& M_tilde, int r) {
  const int m = static_cast<int>(M_tilde.rows());
  const int n = static_cast<int>(M_tilde.cols());
  if (r < 1 || r > std::min(m, n)) throw DimensionMismatch("truncated_svd: rank out of range");

  Eigen::MatrixXd U, V;
  Eigen::VectorXd s;
  if (std::max(m, n) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M_tilde, Eigen::ComputeFullU | Eigen::ComputeFullV);
    U = svd.matrixU();
    s = svd.singularValues();
    V = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M_tilde, Eigen::ComputeFullU | Eigen::ComputeFullV);
    U = svd.matrixU();
    s = svd.singularValues();
    V = svd.matrixV();
  }

  SubspaceEstimate est;
  est.rank = r;
  est.M_tilde = M_tilde;
  est.U_hat = U.leftCols(r);
  est.V_hat = V.leftCols(r);
  est.Sigma_hat = s.head(r);
  apply_sign_convention(est.U_hat, est.V_hat);
  est.U_perp = U.rightCols(m - r);
  est.V_perp = V.rightCols(n - r);
  orient_columns(est.U_perp);
  orient_columns(est.V_perp);
  est.M_hat = est.U_hat * est.Sigma_hat.asDiagonal() * est.V_hat.transpose();
  return est;
}

double d_two_to_inf(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != B.rows()) throw DimensionMismatch("d_two_to_inf: row mismatch");
  const Eigen::MatrixXd diff = A * A.transpose() - B * B.transpose();
  return diff.rowwise().norm().maxCoeff();
}

RecoveryMetrics recovery_metrics(const SubspaceEstimate& est, const LowRankMatrix& truth) {
  if (truth.rows() != est.U_hat.rows() || truth.cols() != est.V_hat.rows())
    throw DimensionMismatch("recovery_metrics: shape mismatch");
  RecoveryMetrics out;
  const double dl = d_two_to_inf(truth.U, est.U_hat);
  const double dr = d_two_to_inf(truth.V, est.V_hat);
  out.eps_sub_rec = std::max(dl, dr);
  const Eigen::MatrixXd PU =
      truth.U * truth.U.transpose() - est.U_hat * est.U_hat.transpose();
  const Eigen::MatrixXd PV =
      truth.V * truth.V.transpose() - est.V_hat * est.V_hat.transpose();
  out.frob_left = PU.norm();
  out.frob_right = PV.norm();
  const Eigen::MatrixXd err = truth.entries - est.M_hat;
  out.op_err = err.jacobiSvd().singularValues()(0);
  out.max_err_hat = err.cwiseAbs().maxCoeff();
  return out;
}

BoundValue recovery_bound(const SpectralSummary& s, int m, int n, int r, long long T,
                          double omega_min, double delta, double constant) {
  if (T < 1 || omega_min <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("recovery_bound: bad parameters");
  const double mn_sum = static_cast<double>(m) + n;
  const double logt = std::log(mn_sum * static_cast<double>(T) / delta);
  const double log3 = logt * logt * logt;
  BoundValue out;
  out.value = constant * std::sqrt(s.L * s.L * s.kappa * s.kappa * s.mu * s.mu * r * mn_sum *
                                   log3 /
                                   (s.sigma_r * s.sigma_r * static_cast<double>(T) * omega_min *
                                    std::min(m, n)));
  out.condition_met =
      static_cast<double>(T) >= s.L * s.L * mn_sum * log3 / (s.sigma_r * s.sigma_r * omega_min);
  return out;
}

SubspaceEstimate oracle_estimate(const LowRankMatrix& truth) {
  return truncated_svd(truth.entries, truth.rank);
}

}  // namespace lrb
