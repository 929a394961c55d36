#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "dpmk/config.hpp"

namespace dpmk {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitResource = 2, kExitVerification = 3 };

struct RunOptions {
  std::filesystem::path out_dir = "dpmk_out";
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// Each command writes into options.out_dir and returns an exit code;
/// exceptions escaping a command are mapped by run_command.
int cmd_exact(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);
int cmd_sample(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);
int cmd_verify_bounds(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);
int cmd_consistency_curve(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);
int cmd_alpha_posterior(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

/// Dispatch by subcommand name, translating errors into exit codes.
int run_command(const std::string& name, const ExperimentConfig& config, const RunOptions& options,
                std::ostream& log);

}  // namespace dpmk
