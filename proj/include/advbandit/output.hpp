#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advbandit/bounds.hpp"
#include "advbandit/harness.hpp"

namespace advbandit {

/// Extra leading column for sweep output, e.g. {"epsilon", "0.25"}.
struct SweepTag {
  std::string key;
  std::string value;
};

/// `T,metric,mean,stddev,trials`, prefixed by the sweep key when tagged.
void write_aggregate_header(std::ostream& out, const std::optional<std::string>& sweep_key);
void write_aggregate_rows(std::ostream& out, const AggregateSummary& summary,
                          const std::optional<SweepTag>& tag);

/// One JSON object per trial, horizons in order, trials by index.
void write_trials_jsonl(std::ostream& out, const AggregateSummary& summary,
                        const std::optional<SweepTag>& tag);

/// JSON array of {bound, T, direction, lhs, rhs, slack, satisfied,
/// satisfied_raw, trials}.
std::string bounds_to_json(std::span<const BoundReport> reports);

std::string sha256_file(const std::filesystem::path& path);

struct ManifestInput {
  std::string command;
  std::string config_echo;  // JSON text
  std::string overrides;    // JSON text
  std::vector<std::filesystem::path> outputs;
};

/// Writes manifest.json into out_dir; digests are computed from the files
/// as they exist on disk.
void write_manifest(const std::filesystem::path& out_dir, const ManifestInput& input);

}  // namespace advbandit
