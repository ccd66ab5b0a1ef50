#include "lrb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrb/bpi.hpp"
#include "lrb/csv.hpp"
#include "lrb/environment.hpp"
#include "lrb/errors.hpp"
#include "lrb/lowrank_model.hpp"
#include "lrb/parallel.hpp"
#include "lrb/policy_eval.hpp"
#include "lrb/regret.hpp"
#include "lrb/spectral_recovery.hpp"

namespace lrb {

namespace {

const std::vector<std::string> kExperiments = {
    "pe_split", "pe_regularization", "pe_vs_T", "pe_vs_m",
    "maxnorm_vs_m", "bpi_vs_T", "regret_vs_T"};

// Hyperparameter grids swept by the two tuning experiments; the config's
// scalar split_alpha / tau are ignored there (one line per grid value).
const std::vector<double> kSplitGrid = {0.0, 0.2, 0.5, 0.8};
const std::vector<double> kTauGrid = {1e-4, 1e-2, 1e-1};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(int line, const std::string& key) {
  throw ConfigError("line " + std::to_string(line) + ": bad value for key '" + key + "'");
}

long long to_ll(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) bad_value(line, key);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(line, key);
  }
}

int to_int(const std::string& v, int line, const std::string& key) {
  const long long x = to_ll(v, line, key);
  if (x < -2147483648LL || x > 2147483647LL) bad_value(line, key);
  return static_cast<int>(x);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) bad_value(line, key);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(line, key);
  }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(line, key);
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment_id) ==
      kExperiments.end())
    throw ConfigError("unknown experiment_id '" + cfg.experiment_id + "'");
  if (cfg.m < 1 || cfg.n < 1 || cfg.r < 1 || cfg.r > std::min(cfg.m, cfg.n))
    throw ConfigError("need 1 <= r <= min(m, n)");
  if (cfg.sigma_noise < 0.0) throw ConfigError("sigma_noise must be >= 0");
  if (cfg.T_grid.empty()) throw ConfigError("T_grid must be nonempty");
  for (long long T : cfg.T_grid)
    if (T < 1) throw ConfigError("T_grid entries must be >= 1");
  if (cfg.m_grid.empty()) throw ConfigError("m_grid must be nonempty");
  for (int mm : cfg.m_grid)
    if (mm < 1) throw ConfigError("m_grid entries must be >= 1");
  if (cfg.seeds < 1) throw ConfigError("seeds must be >= 1");
  if (!(cfg.tau > 0.0)) throw ConfigError("tau must be > 0");
  if (!(cfg.split_alpha >= 0.0 && cfg.split_alpha < 1.0))
    throw ConfigError("split_alpha must lie in [0, 1)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
}

// ---- shared experiment plumbing -------------------------------------------

struct PEInstance {
  LowRankMatrix model;
  ContextDist ctx;
  Policy behavior;
  JointDist omega;
  Policy target;
  Eigen::MatrixXd W;  // target weights omega^pi
  double v_true = 0.0;
  double overlay_base = 0.0;  // ||psi_pi|| / sqrt(omega_min)
};

PEInstance make_instance(const LowRankMatrix& model) {
  PEInstance inst;
  inst.model = model;
  const int m = model.rows();
  const int n = model.cols();
  inst.ctx = uniform_context(m);
  inst.behavior = uniform_policy(m, n);
  inst.omega = joint_dist(inst.ctx, inst.behavior);
  inst.target = optimal_policy(model.entries, inst.ctx).first;
  inst.W = target_weights(inst.omega, inst.target);
  inst.v_true = policy_value(model.entries, inst.ctx, inst.target);
  const InstanceQuantities iq = instance_quantities(inst.model, inst.omega, inst.target);
  inst.overlay_base = iq.psi_pi_norm2 / std::sqrt(inst.omega.omega_min);
  return inst;
}

PEInstance make_pdq_instance(const ExperimentConfig& cfg) {
  return make_instance(gen_pdq(cfg.m, cfg.n, cfg.r, cfg.base_seed));
}

double weighted_sum(const Eigen::MatrixXd& W, const Eigen::MatrixXd& X) {
  return (W.array() * X.array()).sum();
}

struct Summary3 {
  double median, q05, q95;
};

Summary3 summarize(const std::vector<double>& values) {
  return {nearest_rank(values, 0.5), nearest_rank(values, 0.05), nearest_rank(values, 0.95)};
}

std::string summary_cells(const Summary3& s) {
  return fmt_double(s.median) + "," + fmt_double(s.q05) + "," + fmt_double(s.q95);
}

std::vector<std::string> output_files(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_path);
  const fs::path dir(cfg.output_path);
  return {(dir / (cfg.experiment_id + "_raw.csv")).string(),
          (dir / (cfg.experiment_id + "_summary.csv")).string()};
}

// One RS-PE replicate; v-hat of the fitted two-phase model.
double rspe_value(const PEInstance& inst, const ExperimentConfig& cfg, const Trajectory& traj,
                  long long T1, double tau) {
  const RspeFit fit = fit_rspe(traj, inst.omega, inst.model.rank, T1, tau,
                               cfg.oracle_mode ? &inst.model.entries : nullptr);
  return weighted_sum(inst.W, fit.M_bar);
}

// ---- pe_split --------------------------------------------------------------

std::vector<std::string> run_pe_split(const ExperimentConfig& cfg) {
  const PEInstance inst = make_instance(gen_pdq(cfg.m, cfg.n, cfg.r, cfg.base_seed));
  const auto files = output_files(cfg);

  CsvWriter raw(files[0]);
  raw.line("alpha,T,seed,v_true,v_hat,abs_err");
  CsvWriter sum(files[1]);
  sum.line("alpha,T,median,q05,q95,overlay");

  for (double alpha : kSplitGrid)
    for (long long T : cfg.T_grid) {
      const long long T1 = static_cast<long long>(std::floor(alpha * static_cast<double>(T)));
      std::vector<double> vhat(static_cast<std::size_t>(cfg.seeds));
      parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
        const Trajectory traj =
            sample_trajectory(inst.model, inst.ctx, inst.behavior, cfg.sigma_noise, T, seed);
        vhat[static_cast<std::size_t>(k)] = rspe_value(inst, cfg, traj, T1, cfg.tau);
      });
      std::vector<double> errs(vhat.size());
      for (int k = 0; k < cfg.seeds; ++k) {
        errs[k] = std::abs(inst.v_true - vhat[k]);
        raw.line(fmt_double(alpha) + "," + fmt_ll(T) + "," +
                 std::to_string(cfg.base_seed + static_cast<std::uint64_t>(k)) + "," +
                 fmt_double(inst.v_true) + "," + fmt_double(vhat[k]) + "," + fmt_double(errs[k]));
      }
      const double overlay =
          inst.overlay_base *
          std::sqrt(2.0 * std::log(16.0 / cfg.delta) / ((1.0 - alpha) * static_cast<double>(T)));
      sum.line(fmt_double(alpha) + "," + fmt_ll(T) + "," + summary_cells(summarize(errs)) + "," +
               fmt_double(overlay));
    }
  raw.close();
  sum.close();
  return files;
}

// ---- pe_regularization ------------------------------------------------------

std::vector<std::string> run_pe_regularization(const ExperimentConfig& cfg) {
  const PEInstance inst = make_pdq_instance(cfg);
  const auto files = output_files(cfg);

  CsvWriter raw(files[0]);
  raw.line("tau,T,seed,v_true,v_hat,abs_err");
  CsvWriter sum(files[1]);
  sum.line("tau,T,median,q05,q95");

  for (double tau : kTauGrid)
    for (long long T : cfg.T_grid) {
      std::vector<double> vhat(static_cast<std::size_t>(cfg.seeds));
      parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
        const Trajectory traj =
            sample_trajectory(inst.model, inst.ctx, inst.behavior, cfg.sigma_noise, T, seed);
        vhat[static_cast<std::size_t>(k)] = rspe_value(inst, cfg, traj, 0, tau);
      });
      std::vector<double> errs(vhat.size());
      for (int k = 0; k < cfg.seeds; ++k) {
        errs[k] = std::abs(inst.v_true - vhat[k]);
        raw.line(fmt_double(tau) + "," + fmt_ll(T) + "," +
                 std::to_string(cfg.base_seed + static_cast<std::uint64_t>(k)) + "," +
                 fmt_double(inst.v_true) + "," + fmt_double(vhat[k]) + "," + fmt_double(errs[k]));
      }
      sum.line(fmt_double(tau) + "," + fmt_ll(T) + "," + summary_cells(summarize(errs)));
    }
  raw.close();
  sum.close();
  return files;
}

// ---- pe_vs_T and pe_vs_m ----------------------------------------------------

struct PETriple {
  PEEstimate ips, sips, rspe;
};

PETriple pe_replicate(const PEInstance& inst, const ExperimentConfig& cfg, long long T,
                      std::uint64_t seed) {
  const Trajectory traj =
      sample_trajectory(inst.model, inst.ctx, inst.behavior, cfg.sigma_noise, T, seed);
  const int r = inst.model.rank;
  const long long T1 = static_cast<long long>(std::floor(cfg.split_alpha * static_cast<double>(T)));
  PETriple out;
  if (cfg.oracle_mode) {
    out.ips = {weighted_sum(inst.W, inst.model.entries), Estimator::IPS, T, 0, 0.0, 0};
    const SubspaceEstimate est = truncated_svd(inst.model.entries, r);
    out.sips = {weighted_sum(inst.W, est.M_hat), Estimator::SIPS, T, 0, 0.0, 0};
    const RspeFit fit = fit_rspe(traj, inst.omega, r, T1, cfg.tau, &inst.model.entries);
    out.rspe = {weighted_sum(inst.W, fit.M_bar), Estimator::RSPE, T, T1, cfg.tau, fit.map.d};
  } else {
    out.ips = ips_estimate(traj, inst.omega, inst.target);
    out.sips = sips_estimate(traj, inst.omega, inst.target, r);
    out.rspe = rspe_estimate(traj, inst.omega, inst.target, r, T1, cfg.tau);
  }
  return out;
}

// Shared writer for the two plug-in comparison sweeps; `by_m` switches the
// sweep key between the horizon and the (square, all-ones) matrix size.
std::vector<std::string> run_pe_comparison(const ExperimentConfig& cfg, bool by_m) {
  const auto files = output_files(cfg);
  CsvWriter raw(files[0]);
  raw.line(by_m ? "estimator,m,T,seed,v_true,v_hat,abs_err" : pe_csv_header());
  CsvWriter sum(files[1]);
  sum.line(by_m ? "estimator,m,T,median,q05,q95" : "estimator,T,median,q05,q95,overlay");

  std::vector<PEInstance> instances;
  if (by_m)
    for (int mm : cfg.m_grid) instances.push_back(make_instance(gen_all_ones(mm, mm)));
  else
    instances.push_back(make_pdq_instance(cfg));

  struct Cell {
    std::vector<PETriple> reps;
    const PEInstance* inst;
    long long T;
  };
  std::vector<Cell> cells;
  for (const PEInstance& inst : instances)
    for (long long T : cfg.T_grid) {
      Cell c;
      c.reps.resize(static_cast<std::size_t>(cfg.seeds));
      c.inst = &inst;
      c.T = T;
      parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
        c.reps[static_cast<std::size_t>(k)] =
            pe_replicate(inst, cfg, T, cfg.base_seed + static_cast<std::uint64_t>(k));
      });
      cells.push_back(std::move(c));
    }

  for (int which = 0; which < 3; ++which) {
    const auto pick = [&](const PETriple& t) -> const PEEstimate& {
      return which == 0 ? t.ips : which == 1 ? t.sips : t.rspe;
    };
    for (const Cell& c : cells) {
      std::vector<double> errs(static_cast<std::size_t>(cfg.seeds));
      for (int k = 0; k < cfg.seeds; ++k) {
        const PEEstimate& est = pick(c.reps[static_cast<std::size_t>(k)]);
        errs[k] = std::abs(c.inst->v_true - est.value);
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
        if (by_m)
          raw.line(std::string(estimator_name(est.id)) + "," +
                   std::to_string(c.inst->model.rows()) + "," + fmt_ll(c.T) + "," +
                   std::to_string(seed) + "," + fmt_double(c.inst->v_true) + "," +
                   fmt_double(est.value) + "," + fmt_double(errs[k]));
        else
          raw.line(pe_csv_row(est, seed, c.inst->v_true));
      }
      const Summary3 s = summarize(errs);
      if (by_m) {
        sum.line(std::string(estimator_name(pick(c.reps[0]).id)) + "," +
                 std::to_string(c.inst->model.rows()) + "," + fmt_ll(c.T) + "," +
                 summary_cells(s));
      } else {
        const double overlay =
            c.inst->overlay_base *
            std::sqrt(2.0 * std::log(16.0 / cfg.delta) / static_cast<double>(c.T));
        sum.line(std::string(estimator_name(pick(c.reps[0]).id)) + "," + fmt_ll(c.T) + "," +
                 summary_cells(s) + "," + fmt_double(overlay));
      }
    }
  }
  raw.close();
  sum.close();
  return files;
}

// ---- maxnorm_vs_m -----------------------------------------------------------

std::vector<std::string> run_maxnorm_vs_m(const ExperimentConfig& cfg) {
  const auto files = output_files(cfg);
  CsvWriter raw(files[0]);
  raw.line("estimator,m,T,seed,max_err");
  CsvWriter sum(files[1]);
  sum.line("estimator,m,T,median,q05,q95");

  struct Cell {
    std::vector<std::array<double, 3>> errs;  // mtilde, mhat, mbar
    int m;
    long long T;
  };
  std::vector<Cell> cells;
  for (int mm : cfg.m_grid) {
    const PEInstance inst = make_instance(gen_all_ones(mm, mm));
    for (long long T : cfg.T_grid) {
      Cell c;
      c.errs.resize(static_cast<std::size_t>(cfg.seeds));
      c.m = mm;
      c.T = T;
      parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
        const Trajectory traj =
            sample_trajectory(inst.model, inst.ctx, inst.behavior, cfg.sigma_noise, T, seed);
        const Eigen::MatrixXd M_tilde = cfg.oracle_mode
                                            ? inst.model.entries
                                            : build_m_tilde(traj, inst.omega, mm, mm);
        const SubspaceEstimate est = truncated_svd(M_tilde, inst.model.rank);
        const RspeFit fit = fit_rspe(traj, inst.omega, inst.model.rank, 0, cfg.tau,
                                     cfg.oracle_mode ? &inst.model.entries : nullptr);
        const auto max_err = [&](const Eigen::MatrixXd& X) {
          return (inst.model.entries - X).cwiseAbs().maxCoeff();
        };
        c.errs[static_cast<std::size_t>(k)] = {max_err(M_tilde), max_err(est.M_hat),
                                               max_err(fit.M_bar)};
      });
      cells.push_back(std::move(c));
    }
  }

  const char* names[3] = {"mtilde", "mhat", "mbar"};
  for (int which = 0; which < 3; ++which)
    for (const Cell& c : cells) {
      std::vector<double> errs(static_cast<std::size_t>(cfg.seeds));
      for (int k = 0; k < cfg.seeds; ++k) {
        errs[k] = c.errs[static_cast<std::size_t>(k)][static_cast<std::size_t>(which)];
        raw.line(std::string(names[which]) + "," + std::to_string(c.m) + "," + fmt_ll(c.T) + "," +
                 std::to_string(cfg.base_seed + static_cast<std::uint64_t>(k)) + "," +
                 fmt_double(errs[k]));
      }
      sum.line(std::string(names[which]) + "," + std::to_string(c.m) + "," + fmt_ll(c.T) + "," +
               summary_cells(summarize(errs)));
    }
  raw.close();
  sum.close();
  return files;
}

// ---- bpi_vs_T ---------------------------------------------------------------

std::vector<std::string> run_bpi_vs_T(const ExperimentConfig& cfg) {
  const PEInstance inst = make_pdq_instance(cfg);
  const auto files = output_files(cfg);
  CsvWriter raw(files[0]);
  raw.line(bpi_csv_header());
  CsvWriter sum(files[1]);
  sum.line("algorithm,T,median,q05,q95");

  struct Cell {
    std::vector<std::array<BPIResult, 3>> reps;  // sbpi, rsbpi, tilde_argmax
    long long T;
  };
  std::vector<Cell> cells;
  for (long long T : cfg.T_grid) {
    Cell c;
    c.reps.resize(static_cast<std::size_t>(cfg.seeds));
    c.T = T;
    const long long T1 =
        static_cast<long long>(std::floor(cfg.split_alpha * static_cast<double>(T)));
    parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
      const Trajectory traj =
          sample_trajectory(inst.model, inst.ctx, inst.behavior, cfg.sigma_noise, T, seed);
      auto& rep = c.reps[static_cast<std::size_t>(k)];
      rep[0] = sbpi(traj, inst.omega, cfg.r, inst.model);
      rep[1] = rsbpi(traj, inst.omega, cfg.r, T1, cfg.tau, inst.model);
      rep[2] = tilde_argmax(traj, inst.omega, inst.model);
    });
    cells.push_back(std::move(c));
  }

  for (int which = 0; which < 3; ++which)
    for (const Cell& c : cells) {
      std::vector<double> gaps(static_cast<std::size_t>(cfg.seeds));
      for (int k = 0; k < cfg.seeds; ++k) {
        const BPIResult& res = c.reps[static_cast<std::size_t>(k)][static_cast<std::size_t>(which)];
        gaps[k] = res.gap;
        raw.line(bpi_csv_row(res, c.T, cfg.base_seed + static_cast<std::uint64_t>(k)));
      }
      sum.line(std::string(bpi_algo_name(c.reps[0][static_cast<std::size_t>(which)].id)) + "," +
               fmt_ll(c.T) + "," + summary_cells(summarize(gaps)));
    }
  raw.close();
  sum.close();
  return files;
}

// ---- regret_vs_T ------------------------------------------------------------

std::vector<std::string> run_regret_vs_T(const ExperimentConfig& cfg) {
  const LowRankMatrix model = gen_pdq(cfg.m, cfg.n, cfg.r, cfg.base_seed);
  const BanditEnv env{model, uniform_context(cfg.m), cfg.sigma_noise};
  const SpectralSummary ss = spectral_summary(model, cfg.sigma_noise);
  const double rho_min = env.rho.rho.minCoeff();

  const auto files = output_files(cfg);
  CsvWriter raw(files[0]);
  raw.line(regret_summary_header());
  CsvWriter sum(files[1]);
  sum.line("T,median,q05,q95,T1");

  for (long long T : cfg.T_grid) {
    const long long T1 = t1_star(ss.L, ss.mu, ss.kappa, cfg.r, cfg.m, cfg.n, rho_min, T,
                                 ss.max_norm, cfg.sigma_noise);
    std::vector<RegretTrace> traces(static_cast<std::size_t>(cfg.seeds));
    parallel_for(cfg.seeds, cfg.jobs, [&](int k) {
      traces[static_cast<std::size_t>(k)] =
          rs_rmin(env, cfg.r, T, T1, cfg.tau, cfg.base_seed + static_cast<std::uint64_t>(k));
    });
    std::vector<double> regrets(static_cast<std::size_t>(cfg.seeds));
    for (int k = 0; k < cfg.seeds; ++k) {
      regrets[k] = traces[static_cast<std::size_t>(k)].cum_regret;
      raw.line(regret_summary_row(traces[static_cast<std::size_t>(k)], T,
                                  cfg.base_seed + static_cast<std::uint64_t>(k)));
    }
    sum.line(fmt_ll(T) + "," + summary_cells(summarize(regrets)) + "," + fmt_ll(T1));
  }
  raw.close();
  sum.close();
  return files;
}

}  // namespace

std::vector<std::string> list_experiments() { return kExperiments; }

ExperimentConfig default_config(const std::string& experiment_id) {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment_id) == kExperiments.end())
    throw ConfigError("unknown experiment_id '" + experiment_id + "'");
  ExperimentConfig cfg;
  cfg.experiment_id = experiment_id;
  cfg.T_grid = {2000, 5000, 10000, 20000, 50000};
  cfg.m_grid = {20, 40, 80, 120};
  if (experiment_id == "pe_vs_m" || experiment_id == "maxnorm_vs_m") {
    cfg.r = 1;  // all-ones instances are rank one
    cfg.T_grid = {10000};
  } else if (experiment_id == "regret_vs_T") {
    cfg.m = cfg.n = 20;
    cfg.T_grid = {2000, 5000, 10000, 20000};
    cfg.tau = 1.0;  // ridge scale, not the PE regularizer
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  struct KeyVal {
    int line;
    std::string key, value;
  };
  std::vector<KeyVal> kvs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    KeyVal kv{lineno, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (kv.key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kvs.push_back(std::move(kv));
  }

  std::string id;
  for (const KeyVal& kv : kvs)
    if (kv.key == "experiment_id") id = kv.value;
  if (id.empty()) throw ConfigError("missing required key 'experiment_id'");

  ExperimentConfig cfg = default_config(id);
  for (const KeyVal& kv : kvs) {
    if (kv.key == "experiment_id") {
      continue;
    } else if (kv.key == "m") {
      cfg.m = to_int(kv.value, kv.line, kv.key);
    } else if (kv.key == "n") {
      cfg.n = to_int(kv.value, kv.line, kv.key);
    } else if (kv.key == "r") {
      cfg.r = to_int(kv.value, kv.line, kv.key);
    } else if (kv.key == "sigma_noise") {
      cfg.sigma_noise = to_double(kv.value, kv.line, kv.key);
    } else if (kv.key == "T_grid") {
      cfg.T_grid.clear();
      for (const std::string& tok : split_commas(kv.value))
        cfg.T_grid.push_back(to_ll(tok, kv.line, kv.key));
    } else if (kv.key == "m_grid") {
      cfg.m_grid.clear();
      for (const std::string& tok : split_commas(kv.value))
        cfg.m_grid.push_back(to_int(tok, kv.line, kv.key));
    } else if (kv.key == "seeds") {
      cfg.seeds = to_int(kv.value, kv.line, kv.key);
    } else if (kv.key == "tau") {
      cfg.tau = to_double(kv.value, kv.line, kv.key);
    } else if (kv.key == "split_alpha") {
      cfg.split_alpha = to_double(kv.value, kv.line, kv.key);
    } else if (kv.key == "delta") {
      cfg.delta = to_double(kv.value, kv.line, kv.key);
    } else if (kv.key == "output_path") {
      cfg.output_path = kv.value;
    } else if (kv.key == "base_seed") {
      cfg.base_seed = static_cast<std::uint64_t>(to_ll(kv.value, kv.line, kv.key));
    } else if (kv.key == "oracle_mode") {
      cfg.oracle_mode = to_bool(kv.value, kv.line, kv.key);
    } else if (kv.key == "jobs") {
      cfg.jobs = to_int(kv.value, kv.line, kv.key);
    } else {
      throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.oracle_mode && !cfg.allow_oracle)
    throw ConfigError("oracle_mode is restricted to test drivers");
  if (cfg.oracle_mode &&
      (cfg.experiment_id == "bpi_vs_T" || cfg.experiment_id == "regret_vs_T"))
    throw ConfigError("oracle_mode is not supported for " + cfg.experiment_id);

  if (cfg.experiment_id == "pe_split") return run_pe_split(cfg);
  if (cfg.experiment_id == "pe_regularization") return run_pe_regularization(cfg);
  if (cfg.experiment_id == "pe_vs_T") return run_pe_comparison(cfg, false);
  if (cfg.experiment_id == "pe_vs_m") return run_pe_comparison(cfg, true);
  if (cfg.experiment_id == "maxnorm_vs_m") return run_maxnorm_vs_m(cfg);
  if (cfg.experiment_id == "bpi_vs_T") return run_bpi_vs_T(cfg);
  return run_regret_vs_T(cfg);
}

double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("nearest_rank: empty sample");
  std::sort(values.begin(), values.end());
  const double N = static_cast<double>(values.size());
  long long idx = static_cast<long long>(std::ceil(p * N)) - 1;
  if (idx < 0) idx = 0;
  if (idx >= static_cast<long long>(values.size()))
    idx = static_cast<long long>(values.size()) - 1;
  return values[static_cast<std::size_t>(idx)];
}

}  // namespace lrb
