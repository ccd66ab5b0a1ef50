#pragma once
#include <string>
#include <vector>

#include "lrb/environment.hpp"
#include "lrb/lowrank_model.hpp"

namespace lrb {

enum class BpiAlgo { SBPI, RSBPI, GRSBPI, TILDE_ARGMAX };

const char* bpi_algo_name(BpiAlgo a);

struct BPIResult {
  Policy policy;  // deterministic
  double gap = 0.0;
  double v_star = 0.0;
  double v_hat = 0.0;
  BpiAlgo id = BpiAlgo::SBPI;
  bool small_bucket_warning = false;   // some bucket solved with < d samples
  std::vector<int> bucket_of_context;  // GRSBPI only; level index per context
};

// Row-wise argmax policy of a score matrix; ties break to the smallest arm.
Policy row_argmax_policy(const Eigen::MatrixXd& scores);

// Argmax of the rank-r truncation M_hat.  `truth` is simulator-side and used
// only to score the returned policy (gap, v_star, v_hat).
BPIResult sbpi(const Trajectory& traj, const JointDist& omega, int r, const LowRankMatrix& truth);

// Argmax of the two-phase prediction matrix M_bar.
BPIResult rsbpi(const Trajectory& traj, const JointDist& omega, int r, long long T1, double tau,
                const LowRankMatrix& truth);

// Argmax of the raw inverse-propensity matrix M_tilde (benchmark).
BPIResult tilde_argmax(const Trajectory& traj, const JointDist& omega,
                       const LowRankMatrix& truth);

// General context distributions: contexts are bucketed by dyadic probability
// bands, C_l = {i : 2^{-l-1} < rho_i <= 2^{-l}} for l < L and
// C_L = {i : rho_i <= 2^{-L}} with L = ceil(log2(m/eps)); each bucket is
// solved as an independent sub-problem on its own samples (uniform arms,
// no split, shared tau), and contexts in C_L get arm 1.
BPIResult grsbpi(const Trajectory& traj, const ContextDist& rho, int r, double tau, double eps,
                 const LowRankMatrix& truth);

// Bucket index for one context probability (exposed for direct testing).
int dyadic_bucket(double rho_i, int levels);

// CSV helpers: header "algorithm,T,seed,gap,v_star,v_hat".
std::string bpi_csv_header();
std::string bpi_csv_row(const BPIResult& res, long long T, std::uint64_t seed);

}  // namespace lrb
