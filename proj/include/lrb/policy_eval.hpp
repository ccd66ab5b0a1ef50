#pragma once
#include <Eigen/Dense>
#include <string>

#include "lrb/environment.hpp"
#include "lrb/lowrank_model.hpp"
#include "lrb/reduction.hpp"
#include "lrb/spectral_recovery.hpp"

namespace lrb {

enum class Estimator { IPS, SIPS, RSPE };

const char* estimator_name(Estimator e);

struct PEEstimate {
  double value = 0.0;
  Estimator id = Estimator::IPS;
  long long T = 0;
  long long T1 = 0;   // 0 = no split (all samples in both phases)
  double tau = 0.0;   // 0 for estimators without a regularizer
  int d = 0;          // 0 for estimators without a feature space
};

struct RegularizedLS {
  Eigen::VectorXd theta_hat;
  Eigen::MatrixXd gram;  // sum phi phi' + tau I
  double tau = 0.0;
};

// Subspace fit + least squares + full prediction matrix; shared by the
// value estimator, the matrix estimator and best-policy identification.
struct RspeFit {
  SubspaceEstimate est;
  FeatureMap map;
  RegularizedLS ls;
  Eigen::MatrixXd M_bar;  // phi_ij' theta_hat for all cells
  long long T = 0;
  long long T1 = 0;
  double tau = 0.0;
};

// Target weights omega^pi_{ij} = rho_i * target(j|i), with rho recovered as
// the row sums of the behavior joint distribution.
Eigen::MatrixXd target_weights(const JointDist& omega, const Policy& target);

// IPS: sum over cells of omega^pi * M_tilde.
PEEstimate ips_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target);

// SIPS: same but with the rank-r truncation of M_tilde.
PEEstimate sips_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target,
                         int r);

// Two-phase fit: subspaces from the first T1 samples (all of them when
// T1 = 0), regularized LS in feature space on the remainder (again all when
// T1 = 0).  tau must be > 0; T1 >= T throws InvalidSplit.
// `m_tilde_override` injects an idealized phase-1 matrix (oracle runs).
RspeFit fit_rspe(const Trajectory& traj, const JointDist& omega, int r, long long T1, double tau,
                 const Eigen::MatrixXd* m_tilde_override = nullptr);

PEEstimate rspe_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target,
                         int r, long long T1, double tau);

Eigen::MatrixXd m_bar(const Trajectory& traj, const JointDist& omega, int r, long long T1,
                      double tau);

// Instance-dependent quantities in the TRUE feature space:
// psi_pi = sum omega^pi psi_ij, Lambda = sum omega psi psi', and
// ||psi_pi||_{Lambda^{-1}}.
struct InstanceQuantities {
  Eigen::VectorXd psi_pi;
  Eigen::MatrixXd Lambda;
  double weighted_norm = 0.0;  // ||psi_pi||_{Lambda^{-1}}
  double psi_pi_norm2 = 0.0;   // plain Euclidean norm, used by overlays
};

InstanceQuantities instance_quantities(const LowRankMatrix& truth, const JointDist& omega,
                                       const Policy& target);

// Same weighted norm for an arbitrary feature map (e.g. estimated bases);
// logged next to the true-space value, never asserted against it.
double mixture_weighted_norm(const FeatureMap& map, const JointDist& omega, const Policy& target);

double bernoulli_kl(double p, double q);

struct LowerBoundReport {
  double L_M_pi = 0.0;
  double minimax_T = 0.0;  // sigma^2 * L_M_pi * kl(delta, 1-delta) / (2 eps^2)
  double kl_term = 0.0;
};

// Information-theoretic sample floor for (eps, delta)-accurate evaluation of
// `target`.  Invariant under the rank factorization used internally.
LowerBoundReport pe_lower_bound(const LowRankMatrix& truth, const JointDist& omega,
                                const Policy& target, double sigma, double eps, double delta);

struct PEBoundInputs {
  int m = 0, n = 0, r = 0;
  double mu = 0.0, kappa = 0.0, L = 0.0, max_norm = 0.0;
  double sigma = 0.0, omega_min = 0.0;
  double psi_pi_norm2 = 0.0;
  double eps = 0.0, delta = 0.0;
  long long T = 0;  // used only inside the self-referential log terms
};

struct PEBoundFormulas {
  double sips_T = 0.0;
  double rspe_T = 0.0;          // instance-dependent form
  double rspe_minimax_T = 0.0;  // worst-case form
  double K0 = 0.0;
};

// Unit-constant evaluations of the three sample-complexity formulas, for
// reporting alongside empirical curves.
PEBoundFormulas pe_upper_bound_formulas(const PEBoundInputs& p);

// CSV helpers: header "estimator,T,T1,tau,seed,v_true,v_hat,abs_err".
std::string pe_csv_header();
std::string pe_csv_row(const PEEstimate& est, std::uint64_t seed, double v_true);

}  // namespace lrb
