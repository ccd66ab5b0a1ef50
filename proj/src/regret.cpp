#include "lrb/regret.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numeric>

#include "lrb/csv.hpp"
#include "lrb/errors.hpp"
#include "lrb/reduction.hpp"
#include "lrb/rng.hpp"

namespace lrb {

namespace {
// Relative noise floor applied inside beta/Lambda only: keeps the index
// policy well-posed when the environment is exactly noiseless.
constexpr double kSigmaFloorRel = 1e-6;
constexpr int kRebuildEvery = 512;  // exact inverse refresh cadence

std::vector<std::uint64_t> mask_of(const std::vector<int>& idx, int K) {
  std::vector<std::uint64_t> words((K + 63) / 64, 0);
  for (int a : idx) words[static_cast<std::size_t>(a) >> 6] |= (1ull << (a & 63));
  return words;
}

double effective_sigma(double sigma, double max_norm) {
  return std::max(sigma, kSigmaFloorRel * max_norm);
}
}  // namespace

double beta_threshold(double sigma, long long T2, int m, int n, int d, double delta) {
  if (T2 <= d) throw std::invalid_argument("beta_threshold: need T2 > d");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("beta_threshold: delta in (0,1)");
  const double inner = std::ceil(0.5 * std::log(static_cast<double>(T2) / d));
  return sigma *
         (1.0 + std::sqrt(2.0 * std::log((static_cast<double>(T2) * m * n / delta) * inner)));
}

double tail_regularizer(long long T2, int d, double lambda) {
  if (T2 < 1 || d < 1 || !(lambda > 0.0))
    throw std::invalid_argument("tail_regularizer: bad parameters");
  return static_cast<double>(T2) / (d * std::log1p(static_cast<double>(T2) / lambda));
}

SupLinUcb::SupLinUcb(const Eigen::VectorXd& lambda_diag, double beta, long long T2)
    : d_(static_cast<int>(lambda_diag.size())), beta_(beta) {
  if (T2 < 1 || d_ < 1) throw std::invalid_argument("SupLinUcb: bad parameters");
  if (lambda_diag.minCoeff() <= 0.0)
    throw std::invalid_argument("SupLinUcb: regularizer must be positive");
  const double ratio = static_cast<double>(T2) / d_;
  J_ = std::max(1, static_cast<int>(std::ceil(0.5 * std::log2(ratio))) + 1);
  exploit_thresh_ = beta_ * std::sqrt(static_cast<double>(d_) / static_cast<double>(T2));
  levels_.resize(static_cast<std::size_t>(J_));
  for (Level& L : levels_) {
    L.V = lambda_diag.asDiagonal();
    L.Vinv = lambda_diag.cwiseInverse().asDiagonal();
    L.b = Eigen::VectorXd::Zero(d_);
    L.theta = Eigen::VectorXd::Zero(d_);
  }
}

SupLinDecision SupLinUcb::decide(const Eigen::MatrixXd& X) const {
  const int K = static_cast<int>(X.rows());
  if (K < 1 || X.cols() != d_) throw DimensionMismatch("SupLinUcb: arm matrix shape");

  std::vector<int> active(K);
  std::iota(active.begin(), active.end(), 0);
  SupLinDecision dec;
  dec.arm_sets.push_back(mask_of(active, K));

  for (int j = 1;; ++j) {
    // The analysis guarantees a terminal branch fires by level J
    // (beta 2^{-J} <= exploit threshold); the throw is defensive.
    if (j > J_) throw LevelOverflow("staged elimination exceeded its level budget");
    const Level& L = levels_[static_cast<std::size_t>(j) - 1];

    const int A = static_cast<int>(active.size());
    Eigen::MatrixXd Xa(A, d_);
    for (int a = 0; a < A; ++a) Xa.row(a) = X.row(active[a]);
    const Eigen::VectorXd rhat = Xa * L.theta;
    const Eigen::MatrixXd W = Xa * L.Vinv;
    Eigen::VectorXd w(A);
    for (int a = 0; a < A; ++a)
      w(a) = beta_ * std::sqrt(std::max(0.0, W.row(a).dot(Xa.row(a))));

    if (w.maxCoeff() <= exploit_thresh_) {
      int best = 0;
      for (int a = 1; a < A; ++a)
        if (rhat(a) + w(a) > rhat(best) + w(best)) best = a;
      dec.arm = active[best];
      dec.record_level = -1;
      return dec;
    }

    const double lvl_thresh = beta_ * std::ldexp(1.0, -j);
    if (w.maxCoeff() <= lvl_thresh) {
      const double top = (rhat + w).maxCoeff();
      std::vector<int> kept;
      for (int a = 0; a < A; ++a)
        if (rhat(a) + w(a) >= top - 2.0 * lvl_thresh) kept.push_back(active[a]);
      active = std::move(kept);
      dec.arm_sets.push_back(mask_of(active, K));
      continue;
    }

    int best = -1;  // widest arm above the level threshold; ties -> smallest
    for (int a = 0; a < A; ++a)
      if (w(a) > lvl_thresh && (best < 0 || w(a) > w(best))) best = a;
    dec.arm = active[best];
    dec.record_level = j;
    return dec;
  }
}

void SupLinUcb::record(const SupLinDecision& dec, const Eigen::VectorXd& x, double reward) {
  if (dec.record_level < 0) return;
  Level& L = levels_[static_cast<std::size_t>(dec.record_level) - 1];
  L.V.noalias() += x * x.transpose();
  L.b.noalias() += reward * x;
  const Eigen::VectorXd u = L.Vinv * x;
  L.Vinv.noalias() -= (u * u.transpose()) / (1.0 + x.dot(u));
  ++L.count;
  if (++L.since_rebuild >= kRebuildEvery) {
    L.Vinv = Eigen::LLT<Eigen::MatrixXd>(L.V).solve(Eigen::MatrixXd::Identity(d_, d_));
    L.since_rebuild = 0;
  }
  L.theta.noalias() = L.Vinv * L.b;
}

namespace {
struct Phase2Setup {
  SubspaceEstimate est;
  Eigen::VectorXd row_best;  // per-context optimal entry of the true matrix
  JointDist omega1;
};

// Shared phase-1 plumbing: uniform sampling, regret accounting, subspaces.
Phase2Setup run_phase1(const BanditEnv& env, int r, long long T, long long T1,
                       std::uint64_t seed, const SubspaceEstimate* subspace_override,
                       RegretTrace& trace) {
  const int m = env.model.rows();
  const int n = env.model.cols();
  if (T1 < 1 || T1 >= T) throw InvalidSplit("regret run: need 1 <= T1 < T");

  Phase2Setup setup;
  setup.row_best = env.model.entries.rowwise().maxCoeff();
  const Policy unif = uniform_policy(m, n);
  setup.omega1 = joint_dist(env.rho, unif);

  const Trajectory phase1 =
      sample_trajectory(env.model, env.rho, unif, env.sigma_noise, T1, seed);
  trace.T1 = T1;
  trace.rounds.reserve(static_cast<std::size_t>(T));
  for (const Sample& s : phase1.samples)
    trace.rounds.push_back({s.i, s.j, setup.row_best(s.i) - env.model.entries(s.i, s.j)});

  setup.est = subspace_override ? *subspace_override
                                : truncated_svd(build_m_tilde(phase1, setup.omega1, m, n), r);
  return setup;
}

// Phase 2 driver shared by the reduced and extended feature variants.
template <class FeatureFn>
void run_phase2(const BanditEnv& env, long long T2, std::uint64_t seed, int feat_dim,
                FeatureFn&& features_of_context, SupLinUcb& sup, RegretTrace& trace) {
  const int m = env.model.rows();
  std::vector<Eigen::MatrixXd> cache(static_cast<std::size_t>(m));
  auto arms_of = [&](int i) -> const Eigen::MatrixXd& {
    Eigen::MatrixXd& X = cache[static_cast<std::size_t>(i)];
    if (X.size() == 0) X = features_of_context(i);
    return X;
  };

  CategoricalSampler ctx(
      std::vector<double>(env.rho.rho.data(), env.rho.rho.data() + env.rho.rho.size()));
  Rng r_ctx = Rng::stream(seed, 4);
  Rng r_noise = Rng::stream(seed, 5);

  Eigen::VectorXd row_best = env.model.entries.rowwise().maxCoeff();
  trace.decisions.reserve(static_cast<std::size_t>(T2));
  for (long long t = 0; t < T2; ++t) {
    const int i = ctx.draw(r_ctx);
    const Eigen::MatrixXd& X = arms_of(i);
    SupLinDecision dec = sup.decide(X);
    const int j = dec.arm;
    const double reward =
        env.model.entries(i, j) +
        (env.sigma_noise > 0.0 ? env.sigma_noise * r_noise.normal() : 0.0);
    sup.record(dec, X.row(j).transpose(), reward);
    trace.rounds.push_back({i, j, row_best(i) - env.model.entries(i, j)});
    trace.decisions.push_back(std::move(dec));
  }

  trace.d = feat_dim;
  trace.J = sup.levels();
  trace.recorded_per_level.clear();
  for (int j = 1; j <= sup.levels(); ++j) trace.recorded_per_level.push_back(sup.recorded_at(j));
  double cum = 0.0;
  for (const RegretRound& rr : trace.rounds) cum += rr.inst_regret;
  trace.cum_regret = cum;
}
}  // namespace

RegretTrace rs_rmin(const BanditEnv& env, int r, long long T, long long T1, double tau_reg_scale,
                    std::uint64_t seed, const SubspaceEstimate* subspace_override) {
  if (!(tau_reg_scale > 0.0)) throw std::invalid_argument("rs_rmin: tau_reg_scale must be > 0");
  const int m = env.model.rows();
  const int n = env.model.cols();

  RegretTrace trace;
  Phase2Setup setup = run_phase1(env, r, T, T1, seed, subspace_override, trace);
  const FeatureMap map = build_features(setup.est);

  const SpectralSummary sum = spectral_summary(env.model, env.sigma_noise);
  const double sig = effective_sigma(env.sigma_noise, sum.max_norm);
  const long long T2 = T - T1;
  trace.sigma_eff = sig;
  trace.beta = beta_threshold(sig, T2, m, n, map.d, 1.0 / static_cast<double>(T));
  trace.lambda_diag = Eigen::VectorXd::Constant(
      map.d, tau_reg_scale * sig * sig / (sum.max_norm * sum.max_norm * m * n));

  SupLinUcb sup(trace.lambda_diag, trace.beta, T2);
  run_phase2(
      env, T2, seed, map.d,
      [&](int i) {
        Eigen::MatrixXd X(n, map.d);
        Eigen::VectorXd f;
        for (int j = 0; j < n; ++j) {
          map.phi_into(i, j, f);
          X.row(j) = f;
        }
        return X;
      },
      sup, trace);
  return trace;
}

long long t1_star(double L, double mu, double kappa, int r, int m, int n, double rho_min,
                  long long T, double max_norm, double sigma, double constant) {
  if (!(L > 0.0 && mu > 0.0 && kappa > 0.0 && max_norm > 0.0 && rho_min > 0.0))
    throw std::invalid_argument("t1_star: inputs must be positive");
  const int d = r * (m + n) - r * r;
  const double mnprod = static_cast<double>(m) * n;
  const double sig = effective_sigma(sigma, max_norm);
  const double lead = constant * (mu * mu * kappa * kappa * L / max_norm) *
                      std::pow(static_cast<double>(r), 1.25) *
                      std::pow(static_cast<double>(m + n), 0.75) * std::pow(mnprod, 0.25) /
                      std::sqrt(m * rho_min * std::min(m, n));
  const double logs =
      std::pow(std::log1p(mnprod * static_cast<double>(T)), 1.5) *
      std::log(static_cast<double>(T) * (m + n) * L * L / (sig * sig));
  const double raw = lead * std::sqrt(static_cast<double>(T)) * logs;
  long long T1 = std::llround(raw);
  if (T1 < d) T1 = d;
  if (T1 > T / 2) T1 = T / 2;
  return T1;
}

RegretTrace almost_lowd_baseline(const BanditEnv& env, int r, long long T, long long T1,
                                 double B2, double B_ell, std::uint64_t seed,
                                 const SubspaceEstimate* subspace_override) {
  if (!(B2 > 0.0) || B_ell < 0.0)
    throw std::invalid_argument("almost_lowd_baseline: need B2 > 0 and B_ell >= 0");
  const int m = env.model.rows();
  const int n = env.model.cols();

  RegretTrace trace;
  Phase2Setup setup = run_phase1(env, r, T, T1, seed, subspace_override, trace);
  const ExtendedFeatureMap map = build_extended_features(setup.est);
  const int d_low = map.head.d;
  const int D = map.D;

  const SpectralSummary sum = spectral_summary(env.model, env.sigma_noise);
  const double sig = effective_sigma(env.sigma_noise, sum.max_norm);
  const long long T2 = T - T1;
  const double delta = 1.0 / static_cast<double>(T);
  const double lambda = 1.0 / (B2 * B2);
  const double lambda_perp = tail_regularizer(T2, d_low, lambda);

  trace.sigma_eff = sig;
  trace.beta = sig * std::sqrt(2.0 * std::log((10.0 * static_cast<double>(T2) * m * n / delta) *
                                              std::log1p(static_cast<double>(T2)))) +
               B2 * std::sqrt(lambda) + B_ell * std::sqrt(lambda_perp);
  trace.lambda_diag = Eigen::VectorXd::Constant(D, lambda_perp);
  trace.lambda_diag.head(d_low).setConstant(lambda);

  SupLinUcb sup(trace.lambda_diag, trace.beta, T2);
  run_phase2(
      env, T2, seed, D,
      [&](int i) {
        Eigen::MatrixXd X(n, D);
        Eigen::VectorXd f;
        for (int j = 0; j < n; ++j) {
          map.phi_into(i, j, f);
          X.row(j) = f;
        }
        return X;
      },
      sup, trace);
  return trace;
}

RegretTrace naive_ucb(const BanditEnv& env, long long T, std::uint64_t seed) {
  const int m = env.model.rows();
  const int n = env.model.cols();
  const SpectralSummary sum = spectral_summary(env.model, env.sigma_noise);
  const double sig = effective_sigma(env.sigma_noise, sum.max_norm);

  RegretTrace trace;
  trace.T1 = 0;
  trace.sigma_eff = sig;
  const Eigen::VectorXd row_best = env.model.entries.rowwise().maxCoeff();

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, n);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(m, n);
  CategoricalSampler ctx(
      std::vector<double>(env.rho.rho.data(), env.rho.rho.data() + env.rho.rho.size()));
  Rng r_ctx = Rng::stream(seed, 4);
  Rng r_noise = Rng::stream(seed, 5);

  trace.rounds.reserve(static_cast<std::size_t>(T));
  double cum = 0.0;
  for (long long t = 0; t < T; ++t) {
    const int i = ctx.draw(r_ctx);
    int j = -1;
    for (int a = 0; a < n; ++a)
      if (counts(i, a) == 0.0) {
        j = a;
        break;
      }
    if (j < 0) {
      const double logt = std::log(static_cast<double>(t) + 1.0);
      double best_idx = -1e300;
      for (int a = 0; a < n; ++a) {
        const double idx = means(i, a) + sig * std::sqrt(2.0 * logt / counts(i, a));
        if (idx > best_idx) {
          best_idx = idx;
          j = a;
        }
      }
    }
    const double reward =
        env.model.entries(i, j) +
        (env.sigma_noise > 0.0 ? env.sigma_noise * r_noise.normal() : 0.0);
    counts(i, j) += 1.0;
    means(i, j) += (reward - means(i, j)) / counts(i, j);
    const double reg = row_best(i) - env.model.entries(i, j);
    trace.rounds.push_back({i, j, reg});
    cum += reg;
  }
  trace.cum_regret = cum;
  return trace;
}

void write_trace_csv(const RegretTrace& trace, const std::string& path) {
  CsvWriter out(path);
  out.line("t,phase,i,j,inst_regret,cum_regret");
  double cum = 0.0;
  long long t = 1;
  for (const RegretRound& rr : trace.rounds) {
    cum += rr.inst_regret;
    const int phase = t <= trace.T1 ? 1 : 2;
    out.line(fmt_ll(t) + "," + std::to_string(phase) + "," + std::to_string(rr.i + 1) + "," +
             std::to_string(rr.j + 1) + "," + fmt_double(rr.inst_regret) + "," + fmt_double(cum));
    ++t;
  }
  out.close();
}

std::string regret_summary_header() { return "T,seed,cum_regret,T1"; }

std::string regret_summary_row(const RegretTrace& trace, long long T, std::uint64_t seed) {
  return fmt_ll(T) + "," + std::to_string(seed) + "," + fmt_double(trace.cum_regret) + "," +
         fmt_ll(trace.T1);
}

}  // namespace lrb
