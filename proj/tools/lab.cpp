// CLI front-end; talks to the library exclusively through the C interface.
#include <cstdio>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "lrb.h"

namespace {

void print_path(const char* path, void* /*user*/) { std::printf("wrote %s\n", path); }

int exit_code_for(lrb_status status) {
  if (status == LRB_OK) return 0;
  if (status == LRB_ERR_CONFIG) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank bandit experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  int seeds = 0;
  std::string out_dir;
  int jobs = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "path to a key=value config file")->required();
  run->add_option("--seeds", seeds, "override the replicate count")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--jobs", jobs, "worker threads for replicates")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));

  CLI::App* list = app.add_subcommand("list-experiments", "print the runnable experiment ids");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (int i = 0; i < lrb_experiment_count(); ++i)
      std::printf("%s\n", lrb_experiment_name(i));
    return 0;
  }

  lrb_config* cfg = nullptr;
  lrb_status status = lrb_config_parse(config_path.c_str(), &cfg);
  if (status == LRB_OK && seeds > 0) status = lrb_config_set_seeds(cfg, seeds);
  if (status == LRB_OK && !out_dir.empty()) status = lrb_config_set_output_path(cfg, out_dir.c_str());
  if (status == LRB_OK && jobs > 0) status = lrb_config_set_jobs(cfg, jobs);
  if (status == LRB_OK) status = lrb_run(cfg, print_path, nullptr);
  if (status != LRB_OK) std::fprintf(stderr, "error: %s\n", lrb_last_error());
  lrb_config_free(cfg);
  return exit_code_for(status);
}
