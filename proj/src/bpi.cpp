#include "lrb/bpi.hpp"

#include <cmath>

#include "lrb/csv.hpp"
#include "lrb/errors.hpp"
#include "lrb/policy_eval.hpp"
#include "lrb/spectral_recovery.hpp"

namespace lrb {

const char* bpi_algo_name(BpiAlgo a) {
  switch (a) {
    case BpiAlgo::SBPI:
      return "sbpi";
    case BpiAlgo::RSBPI:
      return "rsbpi";
    case BpiAlgo::GRSBPI:
      return "grsbpi";
    case BpiAlgo::TILDE_ARGMAX:
      return "tilde_argmax";
  }
  return "?";
}

Policy row_argmax_policy(const Eigen::MatrixXd& scores) {
  std::vector<int> arm(scores.rows());
  for (int i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = j;
    arm[i] = best;
  }
  return Policy::deterministic(arm, static_cast<int>(scores.cols()));
}

namespace {
BPIResult score_policy(Policy policy, const LowRankMatrix& truth, const Eigen::VectorXd& rho_vec,
                       BpiAlgo id) {
  BPIResult res;
  res.id = id;
  res.policy = std::move(policy);
  const ContextDist rho{rho_vec};
  // Both values go through policy_value so that an exactly-optimal policy
  // yields an exactly-zero gap (same summation order on both sides).
  res.v_star = policy_value(truth, rho, optimal_policy(truth.entries, rho).first);
  res.v_hat = policy_value(truth, rho, res.policy);
  res.gap = res.v_star - res.v_hat;
  return res;
}
}  // namespace

BPIResult sbpi(const Trajectory& traj, const JointDist& omega, int r, const LowRankMatrix& truth) {
  const Eigen::MatrixXd M_tilde = build_m_tilde(traj, omega, truth.rows(), truth.cols());
  const SubspaceEstimate est = truncated_svd(M_tilde, r);
  return score_policy(row_argmax_policy(est.M_hat), truth, omega.omega.rowwise().sum(),
                      BpiAlgo::SBPI);
}

BPIResult rsbpi(const Trajectory& traj, const JointDist& omega, int r, long long T1, double tau,
                const LowRankMatrix& truth) {
  const Eigen::MatrixXd M_bar_mat = m_bar(traj, omega, r, T1, tau);
  return score_policy(row_argmax_policy(M_bar_mat), truth, omega.omega.rowwise().sum(),
                      BpiAlgo::RSBPI);
}

BPIResult tilde_argmax(const Trajectory& traj, const JointDist& omega,
                       const LowRankMatrix& truth) {
  const Eigen::MatrixXd M_tilde = build_m_tilde(traj, omega, truth.rows(), truth.cols());
  return score_policy(row_argmax_policy(M_tilde), truth, omega.omega.rowwise().sum(),
                      BpiAlgo::TILDE_ARGMAX);
}

int dyadic_bucket(double rho_i, int levels) {
  // Exact band comparisons rather than floor(-log2(rho)): immune to the
  // boundary cases rho = 2^{-l} that the experiments' uniform rho hits.
  for (int l = 0; l < levels; ++l)
    if (rho_i > std::ldexp(1.0, -l - 1) && rho_i <= std::ldexp(1.0, -l)) return l;
  return levels;  // tail bucket
}

BPIResult grsbpi(const Trajectory& traj, const ContextDist& rho, int r, double tau, double eps,
                 const LowRankMatrix& truth) {
  if (!(eps > 0.0)) throw std::invalid_argument("grsbpi: eps must be positive");
  const int m = truth.rows();
  const int n = truth.cols();
  if (rho.rho.size() != m) throw DimensionMismatch("grsbpi: rho size mismatch");
  const int levels = std::max(0, static_cast<int>(std::ceil(std::log2(m / eps))));

  std::vector<int> bucket(m);
  std::vector<std::vector<int>> members(levels + 1);
  for (int i = 0; i < m; ++i) {
    bucket[i] = dyadic_bucket(rho.rho(i), levels);
    members[bucket[i]].push_back(i);
  }

  std::vector<int> arm(m, 0);  // tail bucket and sample-starved buckets: arm 1
  bool warn = false;
  for (int l = 0; l < levels; ++l) {
    const std::vector<int>& ctx = members[l];
    if (ctx.empty()) continue;
    const int ml = static_cast<int>(ctx.size());

    std::vector<int> local(m, -1);
    for (int k = 0; k < ml; ++k) local[ctx[k]] = k;

    Trajectory sub;
    for (const Sample& s : traj.samples)
      if (local[s.i] >= 0) sub.samples.push_back({local[s.i], s.j, s.r});

    const int rl = std::min(r, std::min(ml, n));
    const int dl = rl * (ml + n) - rl * rl;
    if (sub.samples.empty()) {
      warn = true;  // nothing observed in this band; keep the default arm
      continue;
    }
    if (static_cast<long long>(sub.samples.size()) < dl) warn = true;

    // Conditional sampling law within the bucket: contexts renormalized,
    // arms uniform (the algorithm's sampling rule).
    Eigen::VectorXd rho_l(ml);
    for (int k = 0; k < ml; ++k) rho_l(k) = rho.rho(ctx[k]);
    rho_l /= rho_l.sum();
    const JointDist omega_l = joint_dist({rho_l}, uniform_policy(ml, n));

    const Eigen::MatrixXd M_bar_l = m_bar(sub, omega_l, rl, 0, tau);
    const Policy pol_l = row_argmax_policy(M_bar_l);
    for (int k = 0; k < ml; ++k) {
      int best = 0;
      pol_l.probs.row(k).maxCoeff(&best);
      arm[ctx[k]] = best;
    }
  }

  BPIResult res = score_policy(Policy::deterministic(arm, n), truth, rho.rho, BpiAlgo::GRSBPI);
  res.small_bucket_warning = warn;
  res.bucket_of_context = std::move(bucket);
  return res;
}

std::string bpi_csv_header() { return "algorithm,T,seed,gap,v_star,v_hat"; }

std::string bpi_csv_row(const BPIResult& res, long long T, std::uint64_t seed) {
  return std::string(bpi_algo_name(res.id)) + "," + fmt_ll(T) + "," + std::to_string(seed) + "," +
         fmt_double(res.gap) + "," + fmt_double(res.v_star) + "," + fmt_double(res.v_hat);
}

}  // namespace lrb
