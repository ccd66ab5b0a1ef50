#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "golden_values.hpp"
#include "lrb/environment.hpp"
#include "lrb/errors.hpp"
#include "lrb/regret.hpp"
#include "lrb/rng.hpp"

using namespace lrb;

namespace {

// Naive reference implementation of the staged-elimination policy: keeps raw
// per-level sample lists and re-solves the ridge system from scratch at every
// decision.  No code shared with the library's incremental version.
struct NaiveSupLin {
  double lambda, beta, exploit_thresh;
  int J, d;
  std::vector<std::vector<Eigen::VectorXd>> xs;
  std::vector<std::vector<double>> rs;

  NaiveSupLin(double lam, double b, long long T2, int dim)
      : lambda(lam), beta(b), d(dim) {
    J = std::max(1, static_cast<int>(std::ceil(0.5 * std::log2(static_cast<double>(T2) / d))) +
                        1);
    exploit_thresh = beta * std::sqrt(static_cast<double>(d) / static_cast<double>(T2));
    xs.resize(static_cast<std::size_t>(J));
    rs.resize(static_cast<std::size_t>(J));
  }

  struct Decision {
    int arm = -1;
    int record_level = -1;
    std::vector<std::vector<int>> sets;
  };

  Decision decide(const Eigen::MatrixXd& X) const {
    std::vector<int> active(static_cast<std::size_t>(X.rows()));
    for (std::size_t a = 0; a < active.size(); ++a) active[a] = static_cast<int>(a);
    Decision dec;
    dec.sets.push_back(active);
    for (int j = 1; j <= J; ++j) {
      const auto& lx = xs[static_cast<std::size_t>(j) - 1];
      const auto& lr = rs[static_cast<std::size_t>(j) - 1];
      Eigen::MatrixXd V = lambda * Eigen::MatrixXd::Identity(d, d);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
      for (std::size_t k = 0; k < lx.size(); ++k) {
        V += lx[k] * lx[k].transpose();
        b += lr[k] * lx[k];
      }
      const Eigen::MatrixXd Vinv = V.llt().solve(Eigen::MatrixXd::Identity(d, d));
      const Eigen::VectorXd theta = Vinv * b;

      std::vector<double> rhat(active.size()), w(active.size());
      for (std::size_t a = 0; a < active.size(); ++a) {
        const Eigen::VectorXd x = X.row(active[a]).transpose();
        rhat[a] = theta.dot(x);
        w[a] = beta * std::sqrt(std::max(0.0, x.dot(Vinv * x)));
      }
      double wmax = 0.0;
      for (double v : w) wmax = std::max(wmax, v);

      if (wmax <= exploit_thresh) {
        std::size_t best = 0;
        for (std::size_t a = 1; a < active.size(); ++a)
          if (rhat[a] + w[a] > rhat[best] + w[best]) best = a;
        dec.arm = active[best];
        dec.record_level = -1;
        return dec;
      }
      const double thr = beta * std::ldexp(1.0, -j);
      if (wmax <= thr) {
        double top = -1e300;
        for (std::size_t a = 0; a < active.size(); ++a) top = std::max(top, rhat[a] + w[a]);
        std::vector<int> kept;
        for (std::size_t a = 0; a < active.size(); ++a)
          if (rhat[a] + w[a] >= top - 2.0 * thr) kept.push_back(active[a]);
        active = kept;
        dec.sets.push_back(active);
        continue;
      }
      std::size_t best = active.size();
      for (std::size_t a = 0; a < active.size(); ++a)
        if (w[a] > thr && (best == active.size() || w[a] > w[best])) best = a;
      dec.arm = active[best];
      dec.record_level = j;
      return dec;
    }
    throw std::runtime_error("naive replay exceeded level budget");
  }

  void record(const Decision& dec, const Eigen::VectorXd& x, double reward) {
    if (dec.record_level < 0) return;
    xs[static_cast<std::size_t>(dec.record_level) - 1].push_back(x);
    rs[static_cast<std::size_t>(dec.record_level) - 1].push_back(reward);
  }
};

std::vector<int> mask_to_list(const std::vector<std::uint64_t>& mask, int K) {
  std::vector<int> out;
  for (int a = 0; a < K; ++a)
    if (mask[static_cast<std::size_t>(a) >> 6] & (1ull << (a & 63))) out.push_back(a);
  return out;
}

BanditEnv small_env(int m, int n, int r, double sigma, std::uint64_t seed) {
  return BanditEnv{gen_pdq(m, n, r, seed), uniform_context(m), sigma};
}

}  // namespace

TEST_CASE("exploration radius and tail regularizer match the golden oracle") {
  CHECK(beta_threshold(1.0, 10000, 20, 20, 76, 1e-4) ==
        doctest::Approx(kGoldenBeta).epsilon(1e-12));
  CHECK(beta_threshold(2.0, 10000, 20, 20, 76, 1e-4) ==
        doctest::Approx(2.0 * kGoldenBeta).epsilon(1e-12));
  CHECK(tail_regularizer(10000, 76, 1.0) == doctest::Approx(kGoldenLambdaPerp).epsilon(1e-12));
  CHECK_THROWS_AS(beta_threshold(1.0, 50, 76, 1, 76, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(beta_threshold(1.0, 100, 2, 2, 4, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_regularizer(0, 4, 1.0), std::invalid_argument);
}

TEST_CASE("incremental policy replays identically against the naive solver") {
  const int d = 3, K = 5;
  const long long T2 = 300;
  const double beta = 2.0, lambda = 0.05;

  SupLinUcb fast(Eigen::VectorXd::Constant(d, lambda), beta, T2);
  NaiveSupLin slow(lambda, beta, T2, d);
  REQUIRE(fast.levels() == slow.J);

  Eigen::VectorXd theta_star(d);
  theta_star << 0.8, -0.3, 0.5;
  Rng rng(2024);
  long long recorded = 0;
  for (long long t = 0; t < T2; ++t) {
    Eigen::MatrixXd X(K, d);
    for (int a = 0; a < K; ++a)
      for (int c = 0; c < d; ++c) X(a, c) = rng.uniform01() - 0.5;
    const SupLinDecision df = fast.decide(X);
    const NaiveSupLin::Decision ds = slow.decide(X);
    REQUIRE(df.arm == ds.arm);
    REQUIRE(df.record_level == ds.record_level);
    REQUIRE(df.arm_sets.size() == ds.sets.size());
    for (std::size_t s = 0; s < ds.sets.size(); ++s)
      REQUIRE(mask_to_list(df.arm_sets[s], K) == ds.sets[s]);

    const Eigen::VectorXd x = X.row(df.arm).transpose();
    const double reward = theta_star.dot(x) + 0.2 * rng.normal();
    fast.record(df, x, reward);
    slow.record(ds, x, reward);
    if (df.record_level > 0) ++recorded;
  }
  long long total = 0;
  for (int j = 1; j <= fast.levels(); ++j) total += fast.recorded_at(j);
  CHECK(total == recorded);
  CHECK(recorded < T2);  // exploit rounds happen once widths shrink
}

TEST_CASE("policy rejects malformed inputs") {
  SupLinUcb pol(Eigen::VectorXd::Constant(3, 0.1), 1.0, 100);
  CHECK_THROWS_AS(pol.decide(Eigen::MatrixXd::Zero(4, 2)), DimensionMismatch);
  CHECK_THROWS_AS(SupLinUcb(Eigen::VectorXd::Constant(3, 0.0), 1.0, 100),
                  std::invalid_argument);
  CHECK_THROWS_AS(SupLinUcb(Eigen::VectorXd::Constant(3, 0.1), 1.0, 0),
                  std::invalid_argument);
}

TEST_CASE("two-phase runs keep coherent bookkeeping") {
  const BanditEnv env = small_env(6, 5, 2, 1.0, 3);
  const long long T = 1500, T1 = 400;
  const RegretTrace trace = rs_rmin(env, 2, T, T1, 1.0, 11);

  REQUIRE(trace.rounds.size() == static_cast<std::size_t>(T));
  REQUIRE(trace.decisions.size() == static_cast<std::size_t>(T - T1));
  CHECK(trace.T1 == T1);
  CHECK(trace.d == 2 * (6 + 5) - 4);
  CHECK(trace.sigma_eff == 1.0);

  double cum = 0.0;
  for (const RegretRound& rr : trace.rounds) {
    CHECK(rr.inst_regret >= 0.0);
    cum += rr.inst_regret;
  }
  CHECK(trace.cum_regret == doctest::Approx(cum).epsilon(1e-12));

  // Every decision: nested elimination sets, arm inside the last set,
  // at most one recording level.
  std::vector<long long> per_level(static_cast<std::size_t>(trace.J), 0);
  for (const SupLinDecision& dec : trace.decisions) {
    REQUIRE(!dec.arm_sets.empty());
    for (std::size_t s = 1; s < dec.arm_sets.size(); ++s) {
      const auto& prev = dec.arm_sets[s - 1];
      const auto& next = dec.arm_sets[s];
      REQUIRE(prev.size() == next.size());
      for (std::size_t wix = 0; wix < next.size(); ++wix) {
        const std::uint64_t outside = next[wix] & ~prev[wix];  // subset check
        CHECK(outside == 0);
      }
    }
    const auto& last = dec.arm_sets.back();
    const std::uint64_t arm_bit =
        (last[static_cast<std::size_t>(dec.arm) >> 6] >> (dec.arm & 63)) & 1;
    CHECK(arm_bit == 1);
    if (dec.record_level > 0) {
      REQUIRE(dec.record_level <= trace.J);
      ++per_level[static_cast<std::size_t>(dec.record_level) - 1];
    }
  }
  REQUIRE(trace.recorded_per_level.size() == static_cast<std::size_t>(trace.J));
  for (int j = 0; j < trace.J; ++j) CHECK(per_level[j] == trace.recorded_per_level[j]);

  // beta matches its closed form for this run.
  CHECK(trace.beta ==
        doctest::Approx(beta_threshold(1.0, T - T1, 6, 5, trace.d, 1.0 / T)).epsilon(1e-12));
  CHECK(trace.lambda_diag.size() == trace.d);

  CHECK_THROWS_AS(rs_rmin(env, 2, T, 0, 1.0, 11), InvalidSplit);
  CHECK_THROWS_AS(rs_rmin(env, 2, T, T, 1.0, 11), InvalidSplit);
}

TEST_CASE("runs are deterministic in the seed") {
  const BanditEnv env = small_env(5, 5, 2, 0.5, 9);
  const RegretTrace a = rs_rmin(env, 2, 800, 200, 1.0, 21);
  const RegretTrace b = rs_rmin(env, 2, 800, 200, 1.0, 21);
  const RegretTrace c = rs_rmin(env, 2, 800, 200, 1.0, 22);
  CHECK(a.cum_regret == b.cum_regret);
  CHECK(a.cum_regret != c.cum_regret);
}

TEST_CASE("noiseless oracle runs drive per-round regret to zero") {
  BanditEnv env = small_env(6, 6, 2, 0.0, 5);
  const SubspaceEstimate oracle = oracle_estimate(env.model);
  const long long T = 3000, T1 = 50;
  const RegretTrace trace = rs_rmin(env, 2, T, T1, 1.0, 31, &oracle);

  CHECK(trace.sigma_eff > 0.0);  // floor engaged
  // Final round exploits the exact model: zero regret, and the tail of the
  // run is essentially free of mistakes.
  CHECK(trace.rounds.back().inst_regret == 0.0);
  long long zero = 0;
  const std::size_t from = trace.rounds.size() - 500;
  for (std::size_t t = from; t < trace.rounds.size(); ++t)
    if (trace.rounds[t].inst_regret <= 1e-12) ++zero;
  CHECK(zero >= 475);  // >= 95% of the last 500 rounds

  // Phase-2 average regret far below phase-1 average (uniform play).
  double p1 = 0.0, p2 = 0.0;
  for (long long t = 0; t < T1; ++t) p1 += trace.rounds[static_cast<std::size_t>(t)].inst_regret;
  for (long long t = T1; t < T; ++t) p2 += trace.rounds[static_cast<std::size_t>(t)].inst_regret;
  CHECK(p2 / static_cast<double>(T - T1) < 0.05 * (p1 / static_cast<double>(T1)));
}

TEST_CASE("phase-1 length formula: value, clamps, and scaling") {
  const double L = 2.0, mu = 1.5, kappa = 2.0, rho_min = 0.05, max_norm = 1.8, sigma = 1.0;
  const int r = 2, m = 20, n = 20;
  const long long T = 1000000;
  const long long got = t1_star(L, mu, kappa, r, m, n, rho_min, T, max_norm, sigma);

  const double mn = static_cast<double>(m) * n;
  const double lead = (mu * mu * kappa * kappa * L / max_norm) * std::pow(2.0, 1.25) *
                      std::pow(40.0, 0.75) * std::pow(mn, 0.25) /
                      std::sqrt(m * rho_min * std::min(m, n));
  const double logs = std::pow(std::log1p(mn * static_cast<double>(T)), 1.5) *
                      std::log(static_cast<double>(T) * (m + n) * L * L / (sigma * sigma));
  long long expect = std::llround(lead * std::sqrt(static_cast<double>(T)) * logs);
  const int d = r * (m + n) - r * r;
  expect = std::max<long long>(expect, d);
  expect = std::min<long long>(expect, T / 2);
  CHECK(got == expect);
  CHECK(got >= d);
  CHECK(got <= T / 2);

  // Tiny horizons clamp to T/2; absurd constants also hit the ceiling.
  CHECK(t1_star(L, mu, kappa, r, m, n, rho_min, 100, max_norm, sigma) == 50);
  CHECK(t1_star(L, mu, kappa, r, m, n, rho_min, T, max_norm, sigma, 1e9) == T / 2);
  CHECK_THROWS_AS(t1_star(0.0, mu, kappa, r, m, n, rho_min, T, max_norm, sigma),
                  std::invalid_argument);
}

TEST_CASE("extended-feature baseline wires its regularizer and radius correctly") {
  const BanditEnv env = small_env(5, 5, 1, 0.5, 13);
  const long long T = 700, T1 = 200, T2 = T - T1;
  const double B2 = env.model.entries.norm();
  const double B_ell = 0.1;
  const RegretTrace trace = almost_lowd_baseline(env, 1, T, T1, B2, B_ell, 41);

  const int d_low = 1 * (5 + 5) - 1;
  CHECK(trace.d == 25);
  REQUIRE(trace.lambda_diag.size() == 25);
  const double lambda = 1.0 / (B2 * B2);
  CHECK(trace.lambda_diag(0) == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(trace.lambda_diag(d_low - 1) == doctest::Approx(lambda).epsilon(1e-12));
  const double lambda_perp = tail_regularizer(T2, d_low, lambda);
  CHECK(trace.lambda_diag(d_low) == doctest::Approx(lambda_perp).epsilon(1e-12));
  CHECK(trace.lambda_diag(24) == doctest::Approx(lambda_perp).epsilon(1e-12));

  const double sig = trace.sigma_eff;
  const double delta = 1.0 / static_cast<double>(T);
  const double beta_expect =
      sig * std::sqrt(2.0 * std::log((10.0 * static_cast<double>(T2) * 25 / delta) *
                                     std::log1p(static_cast<double>(T2)))) +
      B2 * std::sqrt(lambda) + B_ell * std::sqrt(lambda_perp);
  CHECK(trace.beta == doctest::Approx(beta_expect).epsilon(1e-12));
  CHECK(trace.rounds.size() == static_cast<std::size_t>(T));
  CHECK_THROWS_AS(almost_lowd_baseline(env, 1, T, T1, 0.0, B_ell, 41), std::invalid_argument);
}

TEST_CASE("per-cell UCB baseline accrues nonnegative, seed-stable regret") {
  const BanditEnv env = small_env(4, 6, 2, 1.0, 17);
  const RegretTrace a = naive_ucb(env, 2000, 7);
  const RegretTrace b = naive_ucb(env, 2000, 7);
  CHECK(a.rounds.size() == 2000);
  CHECK(a.cum_regret == b.cum_regret);
  CHECK(a.cum_regret >= 0.0);
  // All arms of every visited context get initialized once.
  double explored = 0.0;
  for (const RegretRound& rr : a.rounds) explored += rr.inst_regret;
  CHECK(explored == doctest::Approx(a.cum_regret));
}

TEST_CASE("trace CSV: phases, indices, running total") {
  const BanditEnv env = small_env(4, 4, 2, 0.5, 19);
  const RegretTrace trace = rs_rmin(env, 2, 300, 100, 1.0, 23);
  const std::string path = "trace_test_tmp.csv";
  write_trace_csv(trace, path);

  std::ifstream in(path);
  REQUIRE(static_cast<bool>(in));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,phase,i,j,inst_regret,cum_regret");
  long long t = 0;
  double last_cum = 0.0;
  while (std::getline(in, line)) {
    ++t;
    long long tv, phase, i1, j1;
    double inst, cum;
    REQUIRE(std::sscanf(line.c_str(), "%lld,%lld,%lld,%lld,%lf,%lf", &tv, &phase, &i1, &j1,
                        &inst, &cum) == 6);
    CHECK(tv == t);
    CHECK(phase == (t <= 100 ? 1 : 2));
    CHECK(i1 >= 1);
    CHECK(i1 <= 4);
    CHECK(j1 >= 1);
    CHECK(j1 <= 4);
    CHECK(cum >= last_cum - 1e-12);
    last_cum = cum;
  }
  CHECK(t == 300);
  CHECK(last_cum == doctest::Approx(trace.cum_regret).epsilon(1e-9));
  std::remove(path.c_str());

  CHECK(regret_summary_header() == "T,seed,cum_regret,T1");
  const std::string row = regret_summary_row(trace, 300, 5);
  CHECK(row.substr(0, 6) == "300,5,");
}
