#include "lrb/lowrank_model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "lrb/errors.hpp"
#include "lrb/rng.hpp"

namespace lrb {

namespace {
constexpr double kRankTol = 1e-8;  // relative cutoff for numerical rank

// Jacobi is more accurate and fast enough for the small matrices that
// dominate the tests; BDC takes over beyond 32.
void thin_svd(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::VectorXd& s,
              Eigen::MatrixXd& V) {
  if (std::max(A.rows(), A.cols()) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U = svd.matrixU();
    s = svd.singularValues();
    V = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U = svd.matrixU();
    s = svd.singularValues();
    V = svd.matrixV();
  }
}
}  // namespace

void orient_columns(Eigen::MatrixXd& A) {
  for (int k = 0; k < A.cols(); ++k) {
    int imax = 0;
    A.col(k).cwiseAbs().maxCoeff(&imax);
    if (A(imax, k) < 0.0) A.col(k) = -A.col(k);
  }
}

void apply_sign_convention(Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  for (int k = 0; k < U.cols(); ++k) {
    int imax = 0;
    U.col(k).cwiseAbs().maxCoeff(&imax);
    if (U(imax, k) < 0.0) {
      U.col(k) = -U.col(k);
      if (k < V.cols()) V.col(k) = -V.col(k);
    }
  }
}

LowRankMatrix from_entries(const Eigen::MatrixXd& entries, int rank) {
  const int m = static_cast<int>(entries.rows());
  const int n = static_cast<int>(entries.cols());
  if (m < 1 || n < 1) throw DimensionMismatch("from_entries: empty matrix");
  if (rank < 1 || rank > std::min(m, n))
    throw DimensionMismatch("from_entries: rank " + std::to_string(rank) +
                            " out of range for " + std::to_string(m) + "x" + std::to_string(n));

  Eigen::MatrixXd U, V;
  Eigen::VectorXd s;
  thin_svd(entries, U, s, V);

  const double s1 = s(0);
  if (!(s1 > 0.0)) throw RankMismatch("from_entries: zero matrix has rank 0");
  int num_rank = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s(k) > kRankTol * s1) ++num_rank;
  if (num_rank != rank)
    throw RankMismatch("from_entries: numerical rank " + std::to_string(num_rank) +
                       " != requested " + std::to_string(rank));

  LowRankMatrix out;
  out.entries = entries;
  out.rank = rank;
  out.U = U.leftCols(rank);
  out.V = V.leftCols(rank);
  out.singular_values = s.head(rank);
  apply_sign_convention(out.U, out.V);
  return out;
}

double incoherence(const Eigen::MatrixXd& basis) {
  const double dim = static_cast<double>(basis.rows());
  const double r = static_cast<double>(basis.cols());
  return std::sqrt(dim / r) * basis.rowwise().norm().maxCoeff();
}

SpectralSummary spectral_summary(const LowRankMatrix& M, double sigma_noise) {
  SpectralSummary s;
  s.sigma1 = M.singular_values(0);
  s.sigma_r = M.singular_values(M.rank - 1);
  s.kappa = s.sigma1 / s.sigma_r;
  s.mu = std::max(incoherence(M.U), incoherence(M.V));
  s.max_norm = M.entries.cwiseAbs().maxCoeff();
  s.L = std::max(s.max_norm, sigma_noise);
  return s;
}

LowRankMatrix gen_pdq(int m, int n, int r, std::uint64_t seed) {
  if (m < 1 || n < 1 || r < 1 || r > std::min(m, n))
    throw DimensionMismatch("gen_pdq: bad shape");
  Rng rng = Rng::stream(seed, 0);
  auto fill = [&rng](int dim) {
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = rng.uniform01();
    for (int i = 0; i < dim; ++i) A(i, i) = A.row(i).sum();  // includes sampled diagonal
    return A;
  };
  const Eigen::MatrixXd P = fill(m);
  const Eigen::MatrixXd Q = fill(n);
  // P * D * Q with D selecting the first r "directions": only the first r
  // columns of P and rows of Q survive.
  const Eigen::MatrixXd M = P.leftCols(r) * Q.topRows(r);
  return from_entries(M, r);
}

LowRankMatrix gen_all_ones(int m, int n) {
  if (m < 1 || n < 1) throw DimensionMismatch("gen_all_ones: bad shape");
  LowRankMatrix out;
  out.entries = Eigen::MatrixXd::Ones(m, n);
  out.rank = 1;
  out.U = Eigen::MatrixXd::Constant(m, 1, 1.0 / std::sqrt(static_cast<double>(m)));
  out.V = Eigen::MatrixXd::Constant(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
  out.singular_values = Eigen::VectorXd::Constant(1, std::sqrt(static_cast<double>(m) * n));
  return out;
}

}  // namespace lrb
