#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "golden_values.hpp"
#include "lrb/environment.hpp"
#include "lrb/errors.hpp"
#include "lrb/spectral_recovery.hpp"

using namespace lrb;

namespace {
Eigen::MatrixXd frozen5x4() {
  Eigen::MatrixXd A(5, 4);
  A << 3, 1, 0, 2, 1, 4, 2, 0, 0, 2, 5, 1, 2, 0, 1, 6, 1, 1, 1, 1;
  return A;
}

// One visit to every cell with the exact entry as reward: the inverse-
// propensity average then reproduces M exactly when omega is uniform.
Trajectory full_coverage(const Eigen::MatrixXd& M) {
  Trajectory traj;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) traj.samples.push_back({i, j, M(i, j)});
  return traj;
}
}  // namespace

TEST_CASE("inverse-propensity averaging is exact under exact coverage") {
  Eigen::MatrixXd M(2, 2);
  M << 1, 2, 3, 0;
  const JointDist omega = joint_dist(uniform_context(2), uniform_policy(2, 2));
  const Eigen::MatrixXd M_tilde = build_m_tilde(full_coverage(M), omega, 2, 2);
  CHECK((M_tilde - M).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero propensity and empty trajectories are rejected") {
  JointDist omega = joint_dist(uniform_context(2), uniform_policy(2, 2));
  Trajectory traj = full_coverage(Eigen::MatrixXd::Ones(2, 2));
  omega.omega(0, 0) = 0.0;
  omega.omega_min = 0.0;
  CHECK_THROWS_AS(build_m_tilde(traj, omega, 2, 2), ZeroPropensity);

  const JointDist ok = joint_dist(uniform_context(2), uniform_policy(2, 2));
  CHECK_THROWS_AS(build_m_tilde(Trajectory{}, ok, 2, 2), std::invalid_argument);
}

TEST_CASE("rank-2 truncation matches the frozen residuals") {
  const SubspaceEstimate est = truncated_svd(frozen5x4(), 2);
  CHECK(est.rank == 2);
  CHECK(est.Sigma_hat(0) == doctest::Approx(kFrozen5x4Sigma1).epsilon(1e-12));
  CHECK(est.Sigma_hat(1) == doctest::Approx(kFrozen5x4Sigma2).epsilon(1e-12));
  const Eigen::MatrixXd R = frozen5x4() - est.M_hat;
  CHECK(R.norm() == doctest::Approx(kFrozen5x4Rank2FrobResid).epsilon(1e-10));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  CHECK(svd.singularValues()(0) == doctest::Approx(kFrozen5x4Rank2OpResid).epsilon(1e-10));
}

TEST_CASE("subspace completions assemble orthonormal bases of the full space") {
  const SubspaceEstimate est = truncated_svd(frozen5x4(), 2);
  Eigen::MatrixXd Ufull(5, 5);
  Ufull << est.U_hat, est.U_perp;
  CHECK((Ufull * Ufull.transpose() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <
        1e-10);
  Eigen::MatrixXd Vfull(4, 4);
  Vfull << est.V_hat, est.V_perp;
  CHECK((Vfull * Vfull.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
  // Determinism: running twice yields bit-identical bases.
  const SubspaceEstimate est2 = truncated_svd(frozen5x4(), 2);
  CHECK((est.U_hat - est2.U_hat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((est.U_perp - est2.U_perp).cwiseAbs().maxCoeff() == 0.0);
  CHECK((est.V_perp - est2.V_perp).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projector distance: zero under rotations, one for orthogonal lines") {
  Eigen::MatrixXd U(4, 2);
  U << 1, 0, 0, 1, 0, 0, 0, 0;
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::MatrixXd Rot(2, 2);
  Rot << c, -s, s, c;
  CHECK(d_two_to_inf(U, U * Rot) < 1e-14);  // same subspace, different basis

  Eigen::MatrixXd e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(d_two_to_inf(e1, e2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d_two_to_inf(e1, e1) == 0.0);
}

TEST_CASE("oracle estimates recover the truth to rounding") {
  const LowRankMatrix truth = gen_pdq(12, 9, 2, 5);
  const SubspaceEstimate est = oracle_estimate(truth);
  const RecoveryMetrics met = recovery_metrics(est, truth);
  CHECK(met.eps_sub_rec < 1e-10);
  CHECK(met.max_err_hat < 1e-9);
  CHECK(met.op_err < 1e-9);
  CHECK(met.eps_sub_rec ==
        std::max(d_two_to_inf(truth.U, est.U_hat), d_two_to_inf(truth.V, est.V_hat)));
}

TEST_CASE("recovery error decreases with the sample budget") {
  const LowRankMatrix truth = gen_pdq(10, 8, 2, 17);
  const ContextDist rho = uniform_context(10);
  const Policy pi = uniform_policy(10, 8);
  const JointDist omega = joint_dist(rho, pi);

  auto eps_at = [&](long long T) {
    const Trajectory traj = sample_trajectory(truth, rho, pi, 0.5, T, 99);
    const SubspaceEstimate est = truncated_svd(build_m_tilde(traj, omega, 10, 8), 2);
    return recovery_metrics(est, truth).eps_sub_rec;
  };
  const double coarse = eps_at(2000);
  const double fine = eps_at(80000);
  CHECK(fine < coarse);
  CHECK(fine < 0.05);
}

TEST_CASE("recovery bound evaluates the pinned formula") {
  const LowRankMatrix truth = gen_pdq(10, 8, 2, 17);
  const SpectralSummary s = spectral_summary(truth, 0.5);
  const int m = 10, n = 8, r = 2;
  const double omega_min = 1.0 / 80.0, delta = 0.05;
  const long long T = 50000;
  const BoundValue b = recovery_bound(s, m, n, r, T, omega_min, delta, 2.0);

  const double logs = std::pow(std::log((m + n) * static_cast<double>(T) / delta), 3.0);
  const double expect = 2.0 * std::sqrt(s.L * s.L * s.kappa * s.kappa * s.mu * s.mu * r *
                                        (m + n) * logs /
                                        (s.sigma_r * s.sigma_r * static_cast<double>(T) *
                                         omega_min * std::min(m, n)));
  CHECK(b.value == doctest::Approx(expect).epsilon(1e-12));
  const bool cond = static_cast<double>(T) >=
                    s.L * s.L * (m + n) * logs / (s.sigma_r * s.sigma_r * omega_min);
  CHECK(b.condition_met == cond);

  // The validity condition flips on once T is large enough.
  CHECK_FALSE(recovery_bound(s, m, n, r, 100, omega_min, delta).condition_met);
  CHECK(recovery_bound(s, m, n, r, 4000000000LL, omega_min, delta).condition_met);
}

TEST_CASE("truncation rejects invalid ranks") {
  CHECK_THROWS_AS(truncated_svd(frozen5x4(), 0), DimensionMismatch);
  CHECK_THROWS_AS(truncated_svd(frozen5x4(), 5), DimensionMismatch);
}
