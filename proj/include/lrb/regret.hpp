#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lrb/environment.hpp"
#include "lrb/lowrank_model.hpp"
#include "lrb/spectral_recovery.hpp"

namespace lrb {

struct BanditEnv {
  LowRankMatrix model;
  ContextDist rho;
  double sigma_noise = 0.0;
};

// sigma * (1 + sqrt(2 log((T2 m n / delta) * ceil(log(T2/d)/2)))); inner and
// outer logs natural.
double beta_threshold(double sigma, long long T2, int m, int n, int d, double delta);

// T2 / (d * log(1 + T2/lambda)): the tail regularizer of the extended-
// feature baseline (d is the LOW dimension r(m+n)-r^2).
double tail_regularizer(long long T2, int d, double lambda);

// One round's decision in the staged-elimination index policy.  arm_sets
// holds A_1, A_2, ... for this round as bitmasks (ceil(K/64) words each);
// record_level == -1 means the exploit branch fired and nothing is recorded.
struct SupLinDecision {
  int arm = -1;
  int record_level = -1;
  std::vector<std::vector<std::uint64_t>> arm_sets;
};

// Staged-elimination linear bandit policy over J = ceil(log2(T2/d)/2) + 1
// width levels.  Each level j keeps its own regularized design matrix built
// from exactly the rounds recorded at level j.  decide() is const; the
// caller records the observed reward afterwards.
class SupLinUcb {
 public:
  SupLinUcb(const Eigen::VectorXd& lambda_diag, double beta, long long T2);

  SupLinDecision decide(const Eigen::MatrixXd& X) const;  // X: K x d arm features
  void record(const SupLinDecision& dec, const Eigen::VectorXd& x, double reward);

  int levels() const { return J_; }
  long long recorded_at(int level) const { return levels_[level - 1].count; }
  double beta() const { return beta_; }

 private:
  struct Level {
    Eigen::MatrixXd V, Vinv;
    Eigen::VectorXd b, theta;
    long long count = 0;
    int since_rebuild = 0;
  };
  int J_ = 1;
  int d_ = 0;
  double beta_ = 0.0;
  double exploit_thresh_ = 0.0;  // beta * sqrt(d / T2)
  std::vector<Level> levels_;
};

struct RegretRound {
  int i = 0;
  int j = 0;
  double inst_regret = 0.0;
};

struct RegretTrace {
  std::vector<RegretRound> rounds;  // length T; prefix T1 is the uniform phase
  long long T1 = 0;
  int d = 0;
  int J = 0;
  double beta = 0.0;
  Eigen::VectorXd lambda_diag;
  double sigma_eff = 0.0;
  double cum_regret = 0.0;
  std::vector<SupLinDecision> decisions;       // phase-2 bookkeeping
  std::vector<long long> recorded_per_level;   // |Psi^j| at the end, 1-based at [j-1]
};

// Two-phase regret minimization: T1 uniform rounds build the subspace
// estimate, then the staged-elimination policy runs on the reduced features
// {phi_{i_t, j}}_j with delta = 1/T and Lambda = tau_reg_scale * sigma^2 /
// (max|M|^2 mn) I_d.  sigma enters beta/Lambda floored at 1e-6 * max|M| so
// noiseless oracle runs stay well-posed (inactive for realistic sigma).
// `subspace_override` injects idealized subspaces (oracle runs).
RegretTrace rs_rmin(const BanditEnv& env, int r, long long T, long long T1, double tau_reg_scale,
                    std::uint64_t seed, const SubspaceEstimate* subspace_override = nullptr);

// Phase-1 length that balances the two phases' regret contributions:
//   c * (mu^2 kappa^2 L / max|M|) * r^{5/4} (m+n)^{3/4} (mn)^{1/4}
//     / sqrt(m rho_min (m AND n)) * sqrt(T) * log^{3/2}(1+mnT)
//     * log(T (m+n) L^2 / sigma^2),
// rounded and clamped to [d, T/2].
long long t1_star(double L, double mu, double kappa, int r, int m, int n, double rho_min,
                  long long T, double max_norm, double sigma, double constant = 1.0);

// Same loop on the extended features in R^{mn} with block regularizer
// diag(lambda x d, lambda_perp x (mn-d)), lambda = B2^{-2}, and
// beta = sigma sqrt(2 log((10 T2 mn / delta) log(1+T2))) + B2 sqrt(lambda)
//        + B_ell sqrt(lambda_perp).
RegretTrace almost_lowd_baseline(const BanditEnv& env, int r, long long T, long long T1,
                                 double B2, double B_ell, std::uint64_t seed,
                                 const SubspaceEstimate* subspace_override = nullptr);

// Structure-blind per-cell UCB; harness plumbing only, no guarantees claimed.
RegretTrace naive_ucb(const BanditEnv& env, long long T, std::uint64_t seed);

// CSV columns: t,phase,i,j,inst_regret,cum_regret (t and indices 1-based).
void write_trace_csv(const RegretTrace& trace, const std::string& path);
std::string regret_summary_header();  // "T,seed,cum_regret,T1"
std::string regret_summary_row(const RegretTrace& trace, long long T, std::uint64_t seed);

}  // namespace lrb
