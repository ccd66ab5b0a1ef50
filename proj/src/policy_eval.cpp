#include "lrb/policy_eval.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "lrb/csv.hpp"
#include "lrb/errors.hpp"

namespace lrb {

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::IPS:
      return "ips";
    case Estimator::SIPS:
      return "sips";
    case Estimator::RSPE:
      return "rspe";
  }
  return "?";
}

Eigen::MatrixXd target_weights(const JointDist& omega, const Policy& target) {
  if (target.probs.rows() != omega.omega.rows() || target.probs.cols() != omega.omega.cols())
    throw DimensionMismatch("target_weights: shape mismatch");
  const Eigen::VectorXd rho = omega.omega.rowwise().sum();
  return rho.asDiagonal() * target.probs;
}

PEEstimate ips_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target) {
  const int m = static_cast<int>(omega.omega.rows());
  const int n = static_cast<int>(omega.omega.cols());
  const Eigen::MatrixXd M_tilde = build_m_tilde(traj, omega, m, n);
  PEEstimate out;
  out.id = Estimator::IPS;
  out.T = static_cast<long long>(traj.samples.size());
  out.value = target_weights(omega, target).cwiseProduct(M_tilde).sum();
  return out;
}

PEEstimate sips_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target,
                         int r) {
  const int m = static_cast<int>(omega.omega.rows());
  const int n = static_cast<int>(omega.omega.cols());
  const Eigen::MatrixXd M_tilde = build_m_tilde(traj, omega, m, n);
  const SubspaceEstimate est = truncated_svd(M_tilde, r);
  PEEstimate out;
  out.id = Estimator::SIPS;
  out.T = static_cast<long long>(traj.samples.size());
  out.value = target_weights(omega, target).cwiseProduct(est.M_hat).sum();
  return out;
}

RspeFit fit_rspe(const Trajectory& traj, const JointDist& omega, int r, long long T1, double tau,
                 const Eigen::MatrixXd* m_tilde_override) {
  const long long T = static_cast<long long>(traj.samples.size());
  if (T1 < 0 || (T1 != 0 && T1 >= T)) throw InvalidSplit("fit_rspe: need 0 <= T1 < T");
  if (!(tau > 0.0)) throw std::invalid_argument("fit_rspe: tau must be positive");
  const int m = static_cast<int>(omega.omega.rows());
  const int n = static_cast<int>(omega.omega.cols());

  RspeFit fit;
  fit.T = T;
  fit.T1 = T1;
  fit.tau = tau;

  if (m_tilde_override) {
    fit.est = truncated_svd(*m_tilde_override, r);
  } else {
    Trajectory phase1;
    const Trajectory* p1 = &traj;
    if (T1 > 0) {
      phase1.samples.assign(traj.samples.begin(), traj.samples.begin() + T1);
      p1 = &phase1;
    }
    fit.est = truncated_svd(build_m_tilde(*p1, omega, m, n), r);
  }
  fit.map = build_features(fit.est);

  // Least squares over the second phase, accumulated per distinct cell:
  // Gram = sum_ij N_ij phi phi', rhs = sum_ij S_ij phi with N the visit
  // counts and S the reward sums.  Avoids per-sample d^2 work.
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, n);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(m, n);
  const std::size_t begin2 = T1 > 0 ? static_cast<std::size_t>(T1) : 0;
  for (std::size_t t = begin2; t < traj.samples.size(); ++t) {
    const Sample& s = traj.samples[t];
    counts(s.i, s.j) += 1.0;
    sums(s.i, s.j) += s.r;
  }

  const int d = fit.map.d;
  Eigen::MatrixXd gram = tau * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd feat;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (counts(i, j) == 0.0) continue;
      fit.map.phi_into(i, j, feat);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(feat, counts(i, j));
      rhs.noalias() += sums(i, j) * feat;
    }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  fit.ls.tau = tau;
  fit.ls.gram = gram;
  fit.ls.theta_hat = Eigen::LLT<Eigen::MatrixXd>(gram).solve(rhs);
  fit.M_bar = fit.map.model_from_coeffs(fit.ls.theta_hat);
  return fit;
}

PEEstimate rspe_estimate(const Trajectory& traj, const JointDist& omega, const Policy& target,
                         int r, long long T1, double tau) {
  const RspeFit fit = fit_rspe(traj, omega, r, T1, tau);
  PEEstimate out;
  out.id = Estimator::RSPE;
  out.T = fit.T;
  out.T1 = fit.T1;
  out.tau = tau;
  out.d = fit.map.d;
  out.value = target_weights(omega, target).cwiseProduct(fit.M_bar).sum();
  return out;
}

Eigen::MatrixXd m_bar(const Trajectory& traj, const JointDist& omega, int r, long long T1,
                      double tau) {
  return fit_rspe(traj, omega, r, T1, tau).M_bar;
}

namespace {
// Lambda = sum_ij w_ij phi_ij phi_ij' for a weight matrix w.
Eigen::MatrixXd weighted_gram(const FeatureMap& map, const Eigen::MatrixXd& w) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(map.d, map.d);
  Eigen::VectorXd feat;
  for (int i = 0; i < map.m; ++i)
    for (int j = 0; j < map.n; ++j) {
      if (w(i, j) == 0.0) continue;
      map.phi_into(i, j, feat);
      G.selfadjointView<Eigen::Lower>().rankUpdate(feat, w(i, j));
    }
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G;
}

double weighted_norm_impl(const FeatureMap& map, const JointDist& omega, const Policy& target,
                          Eigen::VectorXd* psi_pi_out, Eigen::MatrixXd* lambda_out) {
  const Eigen::MatrixXd Lambda = weighted_gram(map, omega.omega);
  const Eigen::VectorXd psi_pi = map.mixture(target_weights(omega, target));
  Eigen::LLT<Eigen::MatrixXd> llt(Lambda);
  if (llt.info() != Eigen::Success)
    throw SingularBlock("weighted norm: covariance not positive definite (omega_min == 0?)");
  const double norm2 = psi_pi.dot(llt.solve(psi_pi));
  if (psi_pi_out) *psi_pi_out = psi_pi;
  if (lambda_out) *lambda_out = Lambda;
  return std::sqrt(std::max(0.0, norm2));
}
}  // namespace

InstanceQuantities instance_quantities(const LowRankMatrix& truth, const JointDist& omega,
                                       const Policy& target) {
  const FeatureMap psi = build_true_features(truth);
  InstanceQuantities out;
  out.weighted_norm = weighted_norm_impl(psi, omega, target, &out.psi_pi, &out.Lambda);
  out.psi_pi_norm2 = out.psi_pi.norm();
  return out;
}

double mixture_weighted_norm(const FeatureMap& map, const JointDist& omega, const Policy& target) {
  return weighted_norm_impl(map, omega, target, nullptr, nullptr);
}

double bernoulli_kl(double p, double q) {
  if (p < 0.0 || p > 1.0 || q <= 0.0 || q >= 1.0)
    throw std::invalid_argument("bernoulli_kl: need p in [0,1], q in (0,1)");
  double acc = 0.0;
  if (p > 0.0) acc += p * std::log(p / q);
  if (p < 1.0) acc += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return acc;
}

LowerBoundReport pe_lower_bound(const LowRankMatrix& truth, const JointDist& omega,
                                const Policy& target, double sigma, double eps, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("pe_lower_bound: delta in (0,1/2)");
  if (!(eps > 0.0)) throw std::invalid_argument("pe_lower_bound: eps must be positive");

  // Balanced factorization M = P Q' with P = U sqrt(S), Q = V sqrt(S); the
  // resulting quantity is invariant to this choice (tested).
  const Eigen::VectorXd root = truth.singular_values.cwiseSqrt();
  const Eigen::MatrixXd P = truth.U * root.asDiagonal();
  const Eigen::MatrixXd Q = truth.V * root.asDiagonal();
  const Eigen::MatrixXd wpi = target_weights(omega, target);
  const int m = truth.rows();
  const int n = truth.cols();
  const int r = truth.rank;

  auto side = [&](const Eigen::MatrixXd& F, bool rows) {
    // rows: for each context i, Lambda_i = sum_j omega_ij q_j q_j',
    //       v_i = sum_j wpi_ij q_j; accumulate v' Lambda^{-1} v.
    const int outer = rows ? m : n;
    const int inner = rows ? n : m;
    double acc = 0.0;
    for (int a = 0; a < outer; ++a) {
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(r, r);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(r);
      for (int b = 0; b < inner; ++b) {
        const double w = rows ? omega.omega(a, b) : omega.omega(b, a);
        const double wp = rows ? wpi(a, b) : wpi(b, a);
        const Eigen::VectorXd f = F.row(b);
        G.selfadjointView<Eigen::Lower>().rankUpdate(f, w);
        v.noalias() += wp * f;
      }
      G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
      Eigen::LLT<Eigen::MatrixXd> llt(G);
      if (llt.info() != Eigen::Success)
        throw SingularBlock("pe_lower_bound: singular per-index covariance block");
      acc += v.dot(llt.solve(v));
    }
    return acc;
  };

  LowerBoundReport out;
  out.L_M_pi = std::max(side(Q, true), side(P, false));
  out.kl_term = bernoulli_kl(delta, 1.0 - delta);
  out.minimax_T = sigma * sigma * out.L_M_pi * out.kl_term / (2.0 * eps * eps);
  return out;
}

PEBoundFormulas pe_upper_bound_formulas(const PEBoundInputs& p) {
  const double mnsum = static_cast<double>(p.m) + p.n;
  const double mnprod = static_cast<double>(p.m) * p.n;
  const double mmin = std::min(p.m, p.n);
  const double eps2 = p.eps * p.eps;
  const double log3 = std::pow(std::log(mnsum * static_cast<double>(p.T) / p.delta), 3);
  const double loge = std::log(std::exp(1.0) / p.delta);
  const double mu2 = p.mu * p.mu;

  PEBoundFormulas out;
  out.K0 = (p.L * p.L / p.max_norm) * std::pow(mu2, 3) * std::pow(p.kappa, 4) *
           std::pow(static_cast<double>(p.r), 3) * mnsum * mnsum * std::sqrt(mnprod) /
           (std::pow(p.omega_min * mnprod, 2) * mmin);
  out.sips_T = p.L * p.L * std::pow(mu2, 3) * std::pow(p.kappa, 4) *
               std::pow(static_cast<double>(p.r), 3) * mnsum / (p.omega_min * mmin * mmin * eps2) *
               log3;
  out.rspe_T = p.sigma * p.sigma * p.psi_pi_norm2 * p.psi_pi_norm2 / (p.omega_min * eps2) * loge +
               std::pow(out.K0, 4.0 / 3.0) / std::pow(p.eps, 4.0 / 3.0) * log3;
  out.rspe_minimax_T =
      p.sigma * p.sigma * mu2 * p.r * mnsum / (p.omega_min * mnprod * eps2) * loge +
      out.K0 / p.eps * log3;
  return out;
}

std::string pe_csv_header() { return "estimator,T,T1,tau,seed,v_true,v_hat,abs_err"; }

std::string pe_csv_row(const PEEstimate& est, std::uint64_t seed, double v_true) {
  return std::string(estimator_name(est.id)) + "," + fmt_ll(est.T) + "," + fmt_ll(est.T1) + "," +
         fmt_double(est.tau) + "," + std::to_string(seed) + "," + fmt_double(v_true) + "," +
         fmt_double(est.value) + "," + fmt_double(std::abs(v_true - est.value));
}

}  // namespace lrb
