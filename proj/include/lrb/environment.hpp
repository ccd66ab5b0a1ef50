#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lrb/lowrank_model.hpp"

namespace lrb {

// Discrete context distribution over rows.
struct ContextDist {
  Eigen::VectorXd rho;  // length m, nonnegative, sums to 1
};

// Row-stochastic policy: probs(i, j) = probability of arm j in context i.
struct Policy {
  Eigen::MatrixXd probs;

  static Policy deterministic(const std::vector<int>& arm_of_context, int n);
};

// Joint sampling distribution omega_{ij} = rho_i * pi(j|i), with its extremes
// cached because every estimator weights by them.
struct JointDist {
  Eigen::MatrixXd omega;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

struct Sample {
  int i = 0;  // context (0-based)
  int j = 0;  // arm (0-based)
  double r = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
};

ContextDist uniform_context(int m);
Policy uniform_policy(int m, int n);
JointDist joint_dist(const ContextDist& rho, const Policy& pi);

// E_{i~rho, j~pi(.|i)}[M_{ij}].
double policy_value(const Eigen::MatrixXd& M, const ContextDist& rho, const Policy& pi);
double policy_value(const LowRankMatrix& M, const ContextDist& rho, const Policy& pi);

// Row-wise argmax policy and its value; ties break to the smallest arm index.
std::pair<Policy, double> optimal_policy(const Eigen::MatrixXd& M, const ContextDist& rho);

// T rounds of (i_t, j_t, r_t) with r_t = M_{i_t j_t} + N(0, sigma^2) noise.
// Deterministic in seed; contexts, arms and noise use separate substreams.
Trajectory sample_trajectory(const LowRankMatrix& M, const ContextDist& rho,
                             const Policy& behavior, double sigma_noise, long long T,
                             std::uint64_t seed);

// Empirical context frequencies from a trajectory.
ContextDist estimate_context_dist(const Trajectory& traj, int m);

// CSV columns: t,i,j,r  (t and indices 1-based; r at 17 significant digits).
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace lrb
