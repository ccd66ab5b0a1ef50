#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrb {

// Runtime knobs for one experiment sweep, parsed from a flat key=value file.
// Every field has a per-experiment default, so a minimal config needs only
// `experiment_id`.  For regret runs, `tau` is the ridge scale of the
// elimination routine rather than the PE regularizer.
struct ExperimentConfig {
  std::string experiment_id;
  int m = 50;
  int n = 50;
  int r = 2;
  double sigma_noise = 1.0;
  std::vector<long long> T_grid;
  std::vector<int> m_grid;
  int seeds = 50;
  double tau = 1e-4;
  double split_alpha = 0.0;  // phase-1 fraction; 0 = no split
  double delta = 1e-2;       // confidence level used in overlay columns
  std::string output_path = ".";
  std::uint64_t base_seed = 1;
  bool oracle_mode = false;   // substitute the truth for the phase-1 matrix
  bool allow_oracle = false;  // never parseable; set by test drivers only
  int jobs = 1;
};

// The seven runnable experiment ids, in their canonical order.
std::vector<std::string> list_experiments();

// Fully-populated defaults for one experiment id (ConfigError if unknown).
ExperimentConfig default_config(const std::string& experiment_id);

// Flat key=value file; '#' starts a comment; keys match ExperimentConfig
// field names; grids are comma-separated.  Unknown keys and malformed
// values raise ConfigError naming the line and key.
ExperimentConfig parse_config(const std::string& path);

// Runs the sweep and writes <id>_raw.csv plus <id>_summary.csv under
// cfg.output_path (created if missing); returns the paths written.  Output
// bytes are a pure function of the config: replicate k draws its trajectory
// with seed base_seed + k, and workers merge results in seed order.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg);

// Nearest-rank quantile: sorted[max(0, ceil(p*N) - 1)].
double nearest_rank(std::vector<double> values, double p);

}  // namespace lrb
