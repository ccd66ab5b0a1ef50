#include "lrb.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "lrb/errors.hpp"
#include "lrb/harness.hpp"
#include "lrb/lowrank_model.hpp"

struct lrb_model {
  lrb::LowRankMatrix inner;
};

struct lrb_config {
  lrb::ExperimentConfig inner;
};

namespace {

thread_local std::string g_last_error;

lrb_status fail(lrb_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Maps the library's exception taxonomy onto coarse C status codes.
template <class Fn>
lrb_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LRB_OK;
  } catch (const lrb::ConfigError& e) {
    return fail(LRB_ERR_CONFIG, e.what());
  } catch (const lrb::IoError& e) {
    return fail(LRB_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LRB_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(LRB_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(LRB_ERR_RUNTIME, "unknown failure");
  }
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = lrb::list_experiments();
  return names;
}

}  // namespace

extern "C" {

const char* lrb_version(void) { return "0.1.0"; }

const char* lrb_last_error(void) { return g_last_error.c_str(); }

lrb_status lrb_model_gen_pdq(int m, int n, int r, uint64_t seed, lrb_model** out) {
  if (!out) return fail(LRB_ERR_INVALID, "null out pointer");
  return guarded([&] { *out = new lrb_model{lrb::gen_pdq(m, n, r, seed)}; });
}

lrb_status lrb_model_gen_all_ones(int m, int n, lrb_model** out) {
  if (!out) return fail(LRB_ERR_INVALID, "null out pointer");
  return guarded([&] { *out = new lrb_model{lrb::gen_all_ones(m, n)}; });
}

void lrb_model_free(lrb_model* model) { delete model; }

int lrb_model_rows(const lrb_model* model) { return model ? model->inner.rows() : 0; }

int lrb_model_cols(const lrb_model* model) { return model ? model->inner.cols() : 0; }

int lrb_model_rank(const lrb_model* model) { return model ? model->inner.rank : 0; }

lrb_status lrb_model_entry(const lrb_model* model, int i, int j, double* out) {
  if (!model || !out) return fail(LRB_ERR_INVALID, "null argument");
  if (i < 0 || i >= model->inner.rows() || j < 0 || j >= model->inner.cols())
    return fail(LRB_ERR_INVALID, "entry index out of range");
  *out = model->inner.entries(i, j);
  return LRB_OK;
}

lrb_status lrb_model_summary(const lrb_model* model, double sigma_noise, double out[6]) {
  if (!model || !out) return fail(LRB_ERR_INVALID, "null argument");
  return guarded([&] {
    const lrb::SpectralSummary s = lrb::spectral_summary(model->inner, sigma_noise);
    out[0] = s.mu;
    out[1] = s.kappa;
    out[2] = s.max_norm;
    out[3] = s.sigma1;
    out[4] = s.sigma_r;
    out[5] = s.L;
  });
}

lrb_status lrb_config_parse(const char* path, lrb_config** out) {
  if (!path || !out) return fail(LRB_ERR_INVALID, "null argument");
  return guarded([&] { *out = new lrb_config{lrb::parse_config(path)}; });
}

lrb_status lrb_config_default(const char* experiment_id, lrb_config** out) {
  if (!experiment_id || !out) return fail(LRB_ERR_INVALID, "null argument");
  return guarded([&] { *out = new lrb_config{lrb::default_config(experiment_id)}; });
}

void lrb_config_free(lrb_config* cfg) { delete cfg; }

lrb_status lrb_config_set_seeds(lrb_config* cfg, int seeds) {
  if (!cfg) return fail(LRB_ERR_INVALID, "null config");
  if (seeds < 1) return fail(LRB_ERR_CONFIG, "seeds must be >= 1");
  cfg->inner.seeds = seeds;
  return LRB_OK;
}

lrb_status lrb_config_set_output_path(lrb_config* cfg, const char* dir) {
  if (!cfg || !dir) return fail(LRB_ERR_INVALID, "null argument");
  cfg->inner.output_path = dir;
  return LRB_OK;
}

lrb_status lrb_config_set_jobs(lrb_config* cfg, int jobs) {
  if (!cfg) return fail(LRB_ERR_INVALID, "null config");
  if (jobs < 1) return fail(LRB_ERR_CONFIG, "jobs must be >= 1");
  cfg->inner.jobs = jobs;
  return LRB_OK;
}

lrb_status lrb_config_allow_oracle(lrb_config* cfg) {
  if (!cfg) return fail(LRB_ERR_INVALID, "null config");
  cfg->inner.allow_oracle = true;
  return LRB_OK;
}

const char* lrb_config_experiment_id(const lrb_config* cfg) {
  return cfg ? cfg->inner.experiment_id.c_str() : "";
}

lrb_status lrb_run(const lrb_config* cfg, lrb_path_cb cb, void* user) {
  if (!cfg) return fail(LRB_ERR_INVALID, "null config");
  return guarded([&] {
    const std::vector<std::string> files = lrb::run_experiment(cfg->inner);
    if (cb)
      for (const std::string& f : files) cb(f.c_str(), user);
  });
}

int lrb_experiment_count(void) { return static_cast<int>(experiment_names().size()); }

const char* lrb_experiment_name(int index) {
  const auto& names = experiment_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<std::size_t>(index)].c_str();
}

}  // extern "C"
