#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpmk/gibbs.hpp"
#include "dpmk/kernels.hpp"
#include "dpmk/prior.hpp"

namespace dpmk {

struct DataSpec {
  enum class Kind { Constant, Truth, File };
  Kind kind = Kind::Constant;
  double value = 0.0;
  MixtureTruth truth;
  std::filesystem::path path;
};

struct OriginSpec {
  std::optional<double> epsilon;
  double delta_max = 1e6;
};

struct MomentSpec {
  std::optional<double> rho;
  int s_max = 50;
};

/// Grid and sizes of the bound/identity suite.
struct BoundsSpec {
  std::vector<std::int64_t> n_grid = {100, 10'000, 1'000'000};
  std::vector<int> s_values = {1, 2, 5};
  int t = 1;
  double tol = 1e-8;
  bool tail_constant = true;
  int composition_n_max = 20;
  int composition_s_max = 6;
  std::vector<double> composition_p = {1.5, 2.0};
  int identity_n = 6;
  int identity_s = 2;
  int identity_reps = 100'000;
  std::vector<int> range_sizes = {3, 10, 50};
  int range_samples = 10'000;
  double range_level = 0.01;
};

struct ExperimentConfig {
  std::string experiment;
  KernelModel model = GaussianConjugate{};
  std::optional<AlphaPrior> prior;
  DataSpec data;
  std::vector<std::int64_t> n_grid;
  int s_max = 64;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int t = 1;
  std::vector<double> epsilons = {0.1};
  std::vector<double> alpha_grid;
  SamplerOptions sampler;
  int chains = 1;
  OriginSpec origin;
  MomentSpec moments;
  BoundsSpec bounds;
  nlohmann::json raw;
};

/// Parse and validate a JSON document. Unknown keys and failed model or prior
/// checks raise ConfigError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace dpmk
