#include "lrb/environment.hpp"

#include <cmath>
#include <string>

#include "lrb/csv.hpp"
#include "lrb/errors.hpp"
#include "lrb/rng.hpp"

namespace lrb {

namespace {
void check_dist(const Eigen::VectorXd& p, const char* what) {
  if (p.size() < 1) throw DimensionMismatch(std::string(what) + ": empty");
  if (p.minCoeff() < -1e-12) throw std::invalid_argument(std::string(what) + ": negative mass");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
}
}  // namespace

Policy Policy::deterministic(const std::vector<int>& arm_of_context, int n) {
  const int m = static_cast<int>(arm_of_context.size());
  Policy pi;
  pi.probs = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    const int j = arm_of_context[i];
    if (j < 0 || j >= n) throw DimensionMismatch("deterministic policy: arm out of range");
    pi.probs(i, j) = 1.0;
  }
  return pi;
}

ContextDist uniform_context(int m) {
  if (m < 1) throw DimensionMismatch("uniform_context: m < 1");
  return {Eigen::VectorXd::Constant(m, 1.0 / m)};
}

Policy uniform_policy(int m, int n) {
  if (m < 1 || n < 1) throw DimensionMismatch("uniform_policy: bad shape");
  return {Eigen::MatrixXd::Constant(m, n, 1.0 / n)};
}

JointDist joint_dist(const ContextDist& rho, const Policy& pi) {
  check_dist(rho.rho, "context dist");
  if (pi.probs.rows() != rho.rho.size())
    throw DimensionMismatch("joint_dist: policy rows != context count");
  for (int i = 0; i < pi.probs.rows(); ++i) check_dist(pi.probs.row(i), "policy row");
  JointDist jd;
  jd.omega = rho.rho.asDiagonal() * pi.probs;
  jd.omega_min = jd.omega.minCoeff();
  jd.omega_max = jd.omega.maxCoeff();
  return jd;
}

double policy_value(const Eigen::MatrixXd& M, const ContextDist& rho, const Policy& pi) {
  if (pi.probs.rows() != M.rows() || pi.probs.cols() != M.cols() || rho.rho.size() != M.rows())
    throw DimensionMismatch("policy_value: shape mismatch");
  return (rho.rho.asDiagonal() * pi.probs).cwiseProduct(M).sum();
}

double policy_value(const LowRankMatrix& M, const ContextDist& rho, const Policy& pi) {
  return policy_value(M.entries, rho, pi);
}

std::pair<Policy, double> optimal_policy(const Eigen::MatrixXd& M, const ContextDist& rho) {
  if (rho.rho.size() != M.rows()) throw DimensionMismatch("optimal_policy: shape mismatch");
  std::vector<int> arm(M.rows());
  double value = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < M.cols(); ++j)
      if (M(i, j) > M(i, best)) best = j;  // strict >, so ties keep the smallest index
    arm[i] = best;
    value += rho.rho(i) * M(i, best);
  }
  return {Policy::deterministic(arm, static_cast<int>(M.cols())), value};
}

Trajectory sample_trajectory(const LowRankMatrix& M, const ContextDist& rho,
                             const Policy& behavior, double sigma_noise, long long T,
                             std::uint64_t seed) {
  if (T < 0) throw std::invalid_argument("sample_trajectory: T < 0");
  if (sigma_noise < 0.0) throw std::invalid_argument("sample_trajectory: sigma < 0");
  check_dist(rho.rho, "context dist");
  if (behavior.probs.rows() != M.rows() || behavior.probs.cols() != M.cols())
    throw DimensionMismatch("sample_trajectory: behavior shape mismatch");

  CategoricalSampler ctx(std::vector<double>(rho.rho.data(), rho.rho.data() + rho.rho.size()));
  std::vector<CategoricalSampler> arms;
  arms.reserve(M.rows());
  for (int i = 0; i < M.rows(); ++i) {
    Eigen::VectorXd row = behavior.probs.row(i);
    arms.emplace_back(std::vector<double>(row.data(), row.data() + row.size()));
  }

  Rng r_ctx = Rng::stream(seed, 1);
  Rng r_arm = Rng::stream(seed, 2);
  Rng r_noise = Rng::stream(seed, 3);

  Trajectory traj;
  traj.samples.resize(static_cast<std::size_t>(T));
  for (long long t = 0; t < T; ++t) {
    Sample& s = traj.samples[static_cast<std::size_t>(t)];
    s.i = ctx.draw(r_ctx);
    s.j = arms[s.i].draw(r_arm);
    s.r = M.entries(s.i, s.j) + (sigma_noise > 0.0 ? sigma_noise * r_noise.normal() : 0.0);
  }
  return traj;
}

ContextDist estimate_context_dist(const Trajectory& traj, int m) {
  if (m < 1) throw DimensionMismatch("estimate_context_dist: m < 1");
  if (traj.samples.empty()) throw std::invalid_argument("estimate_context_dist: empty trajectory");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(m);
  for (const Sample& s : traj.samples) {
    if (s.i < 0 || s.i >= m) throw DimensionMismatch("estimate_context_dist: context out of range");
    counts(s.i) += 1.0;
  }
  return {counts / static_cast<double>(traj.samples.size())};
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  CsvWriter out(path);
  out.line("t,i,j,r");
  long long t = 1;
  for (const Sample& s : traj.samples) {
    out.line(fmt_ll(t++) + "," + std::to_string(s.i + 1) + "," + std::to_string(s.j + 1) + "," +
             fmt_double(s.r));
  }
  out.close();
}

}  // namespace lrb
