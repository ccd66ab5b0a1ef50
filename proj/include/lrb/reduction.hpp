#pragma once
#include <Eigen/Dense>
#include <cstddef>

#include "lrb/lowrank_model.hpp"
#include "lrb/spectral_recovery.hpp"

namespace lrb {

// Linear feature map in R^d, d = r(m+n) - r^2, built from an orthonormal
// basis pair (Ub, Vb) and completions.  phi_{ij} stacks three blocks,
//   [ vec(Ub' e_i e_j' Vb) ; vec(Ub' e_i e_j' Vb_perp) ; vec(Ub_perp' e_i e_j' Vb) ]
// with vec(.) COLUMN-MAJOR throughout (a fixed convention; coefficient
// vectors below use the same stacking, which is all that matters).
// The same struct serves the estimated bases and the true ones.
struct FeatureMap {
  int m = 0, n = 0, r = 0, d = 0;
  Eigen::MatrixXd Ub, Vb;            // m x r, n x r
  Eigen::MatrixXd Ub_perp, Vb_perp;  // m x (m-r), n x (n-r)

  void phi_into(int i, int j, Eigen::VectorXd& out) const;
  Eigen::VectorXd phi(int i, int j) const;

  // Feature vector of a weighted entry mixture: sum_ij W_ij phi_ij.
  Eigen::VectorXd mixture(const Eigen::MatrixXd& W) const;

  // The m x n matrix with entries phi_ij' coeffs (cheap via block structure).
  Eigen::MatrixXd model_from_coeffs(const Eigen::VectorXd& coeffs) const;

  // All mn feature vectors as rows (row index p = i*n + j).  Throws if
  // mn*d exceeds `budget` scalars; large problems use phi_into lazily.
  Eigen::MatrixXd dense(std::size_t budget = 200000000) const;
};

// Diagnostic quantities that require the true matrix.  Kept out of
// FeatureMap so learning code cannot touch them by construction.
struct ReductionDiagnostics {
  Eigen::VectorXd theta;  // projections of M onto the three blocks
  Eigen::MatrixXd eps;    // M - Phi' theta, the misspecification surface
  double eps_max = 0.0;
};

FeatureMap build_features(const SubspaceEstimate& est);

// Feature map from the true factors; completions via Householder QR.
FeatureMap build_true_features(const LowRankMatrix& truth);

ReductionDiagnostics feature_diagnostics(const FeatureMap& map, const Eigen::MatrixXd& M);

// eps_sub_rec^2 * kappa * sigma_r : misspecification ceiling implied by a
// two-to-infinity subspace recovery level.
double misspec_bound(double eps_sub_rec, double kappa, double sigma_r);

// Extended map in R^{mn}: the three blocks above plus the tail block
// vec(Ub_perp' e_i e_j' Vb_perp).  ||phi_ext|| = 1 exactly and the
// decomposition M_ij = <phi_ext, theta_ext> is exact for every matrix.
struct ExtendedFeatureMap {
  FeatureMap head;
  int D = 0;  // = m*n

  void phi_into(int i, int j, Eigen::VectorXd& out) const;
  Eigen::VectorXd phi(int i, int j) const;
};

struct ExtendedDiagnostics {
  Eigen::VectorXd theta_ext;  // length mn
  Eigen::VectorXd theta_ell;  // tail block vec(Ub_perp' M Vb_perp)
};

ExtendedFeatureMap build_extended_features(const SubspaceEstimate& est);
ExtendedDiagnostics extended_diagnostics(const ExtendedFeatureMap& map, const Eigen::MatrixXd& M);

}  // namespace lrb
