#pragma once
#include <Eigen/Dense>
#include <cstdint>

namespace lrb {

// Rank-r reward matrix with its thin SVD held explicitly.  Sign convention:
// each left singular vector has its largest-magnitude entry positive (the
// paired right vector is flipped with it), so factorizations are unique up to
// ties and reproducible across runs.
struct LowRankMatrix {
  Eigen::MatrixXd entries;          // m x n
  int rank = 0;                     // r
  Eigen::MatrixXd U;                // m x r, orthonormal columns
  Eigen::MatrixXd V;                // n x r, orthonormal columns
  Eigen::VectorXd singular_values;  // length r, descending, > 0

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

// Scale/shape constants of an instance.  mu is the joint incoherence
// sqrt(dim/r) * max row norm over U and V; kappa the condition number
// sigma_1/sigma_r; L = max(max|M_ij|, sigma_noise).
struct SpectralSummary {
  double mu = 0.0;
  double kappa = 0.0;
  double max_norm = 0.0;
  double sigma1 = 0.0;
  double sigma_r = 0.0;
  double L = 0.0;
};

// Builds a LowRankMatrix from raw entries.  Throws RankMismatch unless the
// numerical rank equals `rank` (singular values below 1e-8 * sigma_1 count as
// zero).  Throws DimensionMismatch for empty matrices or rank out of range.
LowRankMatrix from_entries(const Eigen::MatrixXd& entries, int rank);

SpectralSummary spectral_summary(const LowRankMatrix& M, double sigma_noise);

// sqrt(rows/r) * max row 2-norm of an orthonormal basis; >= 1 always.
double incoherence(const Eigen::MatrixXd& basis);

// Random instance: P (m x m) and Q (n x n) iid U[0,1) with each diagonal
// entry replaced by its row sum (including the sampled diagonal value, so
// the factors are strictly diagonally dominant), M = P * D * Q with
// D_{ij} = 1{i==j, i<=r}.  Deterministic in `seed`.
LowRankMatrix gen_pdq(int m, int n, int r, std::uint64_t seed);

// All-ones matrix, built in closed form (rank 1, sigma_1 = sqrt(m*n), and
// max|M|/sigma_1 meets the 1/sqrt(mn) spikiness floor exactly).
LowRankMatrix gen_all_ones(int m, int n);

// Flips columns of (U, V) pairwise so each U column's largest-|.| entry is
// positive.  Exposed because the subspace estimator applies the same rule.
void apply_sign_convention(Eigen::MatrixXd& U, Eigen::MatrixXd& V);

// Same orientation rule for a lone basis (used for subspace completions,
// where columns have no partner to flip with).
void orient_columns(Eigen::MatrixXd& A);

}  // namespace lrb
