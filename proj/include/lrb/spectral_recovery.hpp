#pragma once
#include <Eigen/Dense>

#include "lrb/environment.hpp"
#include "lrb/lowrank_model.hpp"

namespace lrb {

// Output of the rank-r truncation of the inverse-propensity matrix estimate:
// leading singular pairs plus orthonormal completions of both subspaces.
struct SubspaceEstimate {
  Eigen::MatrixXd M_tilde;    // m x n input estimate
  Eigen::MatrixXd M_hat;      // best rank-r approximation of M_tilde
  Eigen::MatrixXd U_hat;      // m x r
  Eigen::MatrixXd V_hat;      // n x r
  Eigen::MatrixXd U_perp;     // m x (m-r)
  Eigen::MatrixXd V_perp;     // n x (n-r)
  Eigen::VectorXd Sigma_hat;  // leading r singular values of M_tilde
  int rank = 0;
};

struct RecoveryMetrics {
  double eps_sub_rec = 0.0;  // max of the two projector 2->inf distances
  double frob_left = 0.0;    // ||UU' - Uhat Uhat'||_F
  double frob_right = 0.0;
  double op_err = 0.0;       // ||M - M_hat||_op
  double max_err_hat = 0.0;  // ||M - M_hat||_max
};

struct BoundValue {
  double value = 0.0;
  bool condition_met = false;  // sample-size condition under which the bound is proved
};

// Entrywise inverse-propensity average: each cell is (1/(T*omega_ij)) times
// the summed rewards observed at that cell.  Throws ZeroPropensity if any
// omega_ij <= 0, and rejects empty trajectories.
Eigen::MatrixXd build_m_tilde(const Trajectory& traj, const JointDist& omega, int m, int n);

// Full SVD of M_tilde, truncated at rank r; sign convention matches
// from_entries (completion columns are also sign-fixed for determinism).
SubspaceEstimate truncated_svd(const Eigen::MatrixXd& M_tilde, int r);

// ||AA' - BB'||_{2->inf} for two orthonormal bases of the same shape.
double d_two_to_inf(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

RecoveryMetrics recovery_metrics(const SubspaceEstimate& est, const LowRankMatrix& truth);

// High-probability subspace recovery bound
//   c * sqrt( L^2 kappa^2 mu^2 r (m+n) log^3((m+n)T/delta)
//             / (sigma_r^2 T omega_min min(m,n)) )
// with the validity condition T >= L^2 (m+n) log^3((m+n)T/delta) /
// (sigma_r^2 omega_min) reported alongside (c is a caller constant).
BoundValue recovery_bound(const SpectralSummary& s, int m, int n, int r, long long T,
                          double omega_min, double delta, double constant = 1.0);

// Idealized estimate with M_tilde := M exactly (diagnostic/oracle runs).
SubspaceEstimate oracle_estimate(const LowRankMatrix& truth);

}  // namespace lrb
