#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpmk/config.hpp"
#include "dpmk/error.hpp"
#include "dpmk/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Posterior number of clusters under a Dirichlet process mixture with a prior on the concentration"};
  app.require_subcommand(1);

  std::string config_path;
  dpmk::RunOptions options;
  std::string out_dir = options.out_dir.string();
  std::uint64_t seed = 0;
  double tol = 0.0;

  const char* names[] = {"exact", "sample", "verify-bounds", "consistency-curve", "alpha-posterior"};
  const char* help[] = {
      "exact posterior of K_n along the n grid",
      "collapsed Gibbs sampler over partitions and alpha",
      "check the ratio bounds, the partition identity and the range law",
      "pr(K_n = t) and the summed ratio times log n along the grid",
      "posterior CDF of alpha given the data",
  };
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--threads", options.threads, "worker threads for independent chains")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "override the configured relative tolerance")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dpmk::kExitConfig;
  }

  const auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--tol")) options.tol = tol;
  options.out_dir = out_dir;

  dpmk::ExperimentConfig config;
  try {
    config = dpmk::load_config(config_path);
    std::filesystem::create_directories(options.out_dir);
  } catch (const dpmk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dpmk::kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "cannot create output directory: " << e.what() << "\n";
    return dpmk::kExitResource;
  }
  return dpmk::run_command(sub->get_name(), config, options, std::cerr);
}
