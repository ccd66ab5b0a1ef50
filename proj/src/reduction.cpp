#include "lrb/reduction.hpp"

#include <Eigen/QR>
#include <cmath>

#include "lrb/errors.hpp"

namespace lrb {

namespace {
using MapMat = Eigen::Map<Eigen::MatrixXd>;
using CMapMat = Eigen::Map<const Eigen::MatrixXd>;
}  // namespace

void FeatureMap::phi_into(int i, int j, Eigen::VectorXd& out) const {
  if (i < 0 || i >= m || j < 0 || j >= n) throw DimensionMismatch("phi: index out of range");
  out.resize(d);
  MapMat(out.data(), r, r).noalias() = Ub.row(i).transpose() * Vb.row(j);
  MapMat(out.data() + r * r, r, n - r).noalias() = Ub.row(i).transpose() * Vb_perp.row(j);
  MapMat(out.data() + r * n, m - r, r).noalias() = Ub_perp.row(i).transpose() * Vb.row(j);
}

Eigen::VectorXd FeatureMap::phi(int i, int j) const {
  Eigen::VectorXd out;
  phi_into(i, j, out);
  return out;
}

Eigen::VectorXd FeatureMap::mixture(const Eigen::MatrixXd& W) const {
  if (W.rows() != m || W.cols() != n) throw DimensionMismatch("mixture: weight shape mismatch");
  Eigen::VectorXd out(d);
  MapMat(out.data(), r, r).noalias() = Ub.transpose() * W * Vb;
  MapMat(out.data() + r * r, r, n - r).noalias() = Ub.transpose() * W * Vb_perp;
  MapMat(out.data() + r * n, m - r, r).noalias() = Ub_perp.transpose() * W * Vb;
  return out;
}

Eigen::MatrixXd FeatureMap::model_from_coeffs(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != d) throw DimensionMismatch("model_from_coeffs: coeff length != d");
  CMapMat T1(coeffs.data(), r, r);
  CMapMat T2(coeffs.data() + r * r, r, n - r);
  CMapMat T3(coeffs.data() + r * n, m - r, r);
  Eigen::MatrixXd out = Ub * T1 * Vb.transpose();
  out.noalias() += Ub * T2 * Vb_perp.transpose();
  out.noalias() += Ub_perp * T3 * Vb.transpose();
  return out;
}

Eigen::MatrixXd FeatureMap::dense(std::size_t budget) const {
  const std::size_t need = static_cast<std::size_t>(m) * n * d;
  if (need > budget)
    throw std::invalid_argument("dense feature matrix exceeds scalar budget; use phi_into");
  Eigen::MatrixXd F(static_cast<long>(m) * n, d);
  Eigen::VectorXd row;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      phi_into(i, j, row);
      F.row(static_cast<long>(i) * n + j) = row;
    }
  return F;
}

namespace {
FeatureMap make_map(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                    const Eigen::MatrixXd& Up, const Eigen::MatrixXd& Vp) {
  FeatureMap map;
  map.m = static_cast<int>(U.rows());
  map.n = static_cast<int>(V.rows());
  map.r = static_cast<int>(U.cols());
  map.d = map.r * (map.m + map.n) - map.r * map.r;
  map.Ub = U;
  map.Vb = V;
  map.Ub_perp = Up;
  map.Vb_perp = Vp;
  return map;
}

// Orthonormal completion of a thin orthonormal basis.
Eigen::MatrixXd qr_complement(const Eigen::MatrixXd& B) {
  const int dim = static_cast<int>(B.rows());
  const int r = static_cast<int>(B.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd comp = Q.rightCols(dim - r);
  orient_columns(comp);
  return comp;
}
}  // namespace

FeatureMap build_features(const SubspaceEstimate& est) {
  return make_map(est.U_hat, est.V_hat, est.U_perp, est.V_perp);
}

FeatureMap build_true_features(const LowRankMatrix& truth) {
  return make_map(truth.U, truth.V, qr_complement(truth.U), qr_complement(truth.V));
}

ReductionDiagnostics feature_diagnostics(const FeatureMap& map, const Eigen::MatrixXd& M) {
  if (M.rows() != map.m || M.cols() != map.n)
    throw DimensionMismatch("feature_diagnostics: matrix shape mismatch");
  ReductionDiagnostics diag;
  diag.theta.resize(map.d);
  const int r = map.r;
  MapMat(diag.theta.data(), r, r).noalias() = map.Ub.transpose() * M * map.Vb;
  MapMat(diag.theta.data() + r * r, r, map.n - r).noalias() =
      map.Ub.transpose() * M * map.Vb_perp;
  MapMat(diag.theta.data() + r * map.n, map.m - r, r).noalias() =
      map.Ub_perp.transpose() * M * map.Vb;
  diag.eps = M - map.model_from_coeffs(diag.theta);
  diag.eps_max = diag.eps.size() ? diag.eps.cwiseAbs().maxCoeff() : 0.0;
  return diag;
}

double misspec_bound(double eps_sub_rec, double kappa, double sigma_r) {
  if (eps_sub_rec < 0.0 || kappa < 0.0 || sigma_r < 0.0)
    throw std::invalid_argument("misspec_bound: negative input");
  return eps_sub_rec * eps_sub_rec * kappa * sigma_r;
}

void ExtendedFeatureMap::phi_into(int i, int j, Eigen::VectorXd& out) const {
  out.resize(D);
  Eigen::VectorXd head_part;
  head.phi_into(i, j, head_part);
  out.head(head.d) = head_part;
  MapMat(out.data() + head.d, head.m - head.r, head.n - head.r).noalias() =
      head.Ub_perp.row(i).transpose() * head.Vb_perp.row(j);
}

Eigen::VectorXd ExtendedFeatureMap::phi(int i, int j) const {
  Eigen::VectorXd out;
  phi_into(i, j, out);
  return out;
}

ExtendedFeatureMap build_extended_features(const SubspaceEstimate& est) {
  ExtendedFeatureMap map;
  map.head = build_features(est);
  map.D = map.head.m * map.head.n;
  return map;
}

ExtendedDiagnostics extended_diagnostics(const ExtendedFeatureMap& map, const Eigen::MatrixXd& M) {
  const FeatureMap& h = map.head;
  if (M.rows() != h.m || M.cols() != h.n)
    throw DimensionMismatch("extended_diagnostics: matrix shape mismatch");
  ExtendedDiagnostics diag;
  diag.theta_ext.resize(map.D);
  diag.theta_ext.head(h.d) = feature_diagnostics(h, M).theta;
  const Eigen::MatrixXd tail = h.Ub_perp.transpose() * M * h.Vb_perp;
  diag.theta_ell = CMapMat(tail.data(), tail.size(), 1);
  diag.theta_ext.tail(map.D - h.d) = diag.theta_ell;
  return diag;
}

}  // namespace lrb
