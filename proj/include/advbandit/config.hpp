#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "advbandit/harness.hpp"

namespace advbandit {

/// Invalid experiment configuration. field() is the dotted path of the
/// offending key, e.g. "attacker.epsilon".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct VerifyOptions {
  std::optional<double> rho;
  std::optional<double> bound_constant;  // M; absent means "auto"
};

struct RunConfig {
  ExperimentConfig experiment;
  VerifyOptions verify;
  std::string echo;  // the configuration document, compact JSON
};

/// Parses a configuration document with sections environment, player,
/// attacker, experiment and an optional verify. Relative table paths resolve
/// against base_dir.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace advbandit
