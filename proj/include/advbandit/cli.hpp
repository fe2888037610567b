#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace advbandit {

struct CliOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides experiment.base_seed
  std::optional<int> trials;          // overrides experiment.trials
  bool quiet = false;
};

// Exit codes: 0 success, 1 a check failed or a run/IO error occurred,
// 2 the configuration or the command line is invalid.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_run(const std::filesystem::path& config_path, const CliOptions& options);

/// sweep_key is one of T, epsilon, phi.
int cmd_sweep(const std::filesystem::path& config_path, const std::string& sweep_key,
              const std::vector<double>& values, const CliOptions& options);

/// theorem is one of thm1, thm2, thm3, lemma1, lower_bound, equivalence.
int cmd_verify(const std::filesystem::path& config_path, const std::string& theorem,
               const CliOptions& options);

int run_cli(int argc, char** argv);

}  // namespace advbandit
