#include "advbandit/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <memory>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#ifndef ADVBANDIT_VERSION
#define ADVBANDIT_VERSION "0.0.0"
#endif

namespace advbandit {

namespace {

using nlohmann::json;

void write_row(std::ostream& out, const std::optional<SweepTag>& tag, Round horizon,
               const std::string& metric, const MetricStats& stats, std::size_t trials) {
  if (tag) out << tag->value << ',';
  out << horizon << ',' << metric << ',' << format_real(stats.mean) << ','
      << format_real(stats.stddev) << ',' << trials << '\n';
}

MetricStats scaled(const MetricStats& stats, double factor) {
  return {stats.mean * factor, stats.stddev * factor, stats.min * factor, stats.max * factor};
}

}  // namespace

void write_aggregate_header(std::ostream& out, const std::optional<std::string>& sweep_key) {
  if (sweep_key) out << *sweep_key << ',';
  out << "T,metric,mean,stddev,trials\n";
}

void write_aggregate_rows(std::ostream& out, const AggregateSummary& summary,
                          const std::optional<SweepTag>& tag) {
  for (const auto& h : summary.horizons) {
    const std::size_t n = h.trials.size();
    const double inv_T = 1.0 / static_cast<double>(h.horizon);
    write_row(out, tag, h.horizon, "target_selections", h.target_selections, n);
    write_row(out, tag, h.horizon, "non_target_selections", h.non_target_selections, n);
    write_row(out, tag, h.horizon, "target_fraction", scaled(h.target_selections, inv_T), n);
    write_row(out, tag, h.horizon, "total_cost", h.total_cost, n);
    write_row(out, tag, h.horizon, "per_round_cost", scaled(h.total_cost, inv_T), n);
    write_row(out, tag, h.horizon, "regret_clean", h.regret_clean, n);
    write_row(out, tag, h.horizon, "regret_template", h.regret_template, n);
    for (std::size_t a = 0; a < h.arm_selections.size(); ++a) {
      write_row(out, tag, h.horizon, "selections_arm_" + std::to_string(a), h.arm_selections[a],
                n);
    }
  }
}

void write_trials_jsonl(std::ostream& out, const AggregateSummary& summary,
                        const std::optional<SweepTag>& tag) {
  for (const auto& h : summary.horizons) {
    for (std::size_t i = 0; i < h.trials.size(); ++i) {
      const TrialSummary& trial = h.trials[i];
      json line = json::object();
      if (tag) line[tag->key] = json::parse(tag->value);
      line["T"] = trial.horizon;
      line["trial"] = i;
      line["seed"] = trial.seed;
      line["target_arm"] = summary.target.index;
      line["selections"] = trial.selections;
      line["total_cost"] = trial.total_cost;
      line["regret_template"] = trial.regret_template;
      line["regret_clean"] = trial.regret_clean;
      out << line.dump() << '\n';
    }
  }
}

std::string bounds_to_json(std::span<const BoundReport> reports) {
  json doc = json::array();
  for (const auto& r : reports) {
    json entry = json::object();
    entry["bound"] = r.bound;
    entry["T"] = r.horizon;
    entry["direction"] = r.direction == BoundDirection::at_least ? ">=" : "<=";
    entry["lhs"] = r.lhs;
    entry["rhs"] = r.rhs;
    entry["slack"] = r.slack;
    entry["satisfied"] = r.satisfied;
    entry["satisfied_raw"] = r.satisfied_raw;
    entry["trials"] = r.trials;
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string() + " for digest");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("cannot initialise SHA-256");
  }
  std::array<char, 1 << 16> buffer{};
  while (in.read(buffer.data(), buffer.size()) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

void write_manifest(const std::filesystem::path& out_dir, const ManifestInput& input) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t stamp = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&stamp, &utc);
  std::ostringstream timestamp;
  timestamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");

  json manifest = json::object();
  manifest["tool"] = "advbandit";
  manifest["version"] = ADVBANDIT_VERSION;
  manifest["timestamp"] = timestamp.str();
  manifest["command"] = input.command;
  manifest["config"] = json::parse(input.config_echo);
  manifest["overrides"] = json::parse(input.overrides);
  json outputs = json::array();
  for (const auto& file : input.outputs) {
    outputs.push_back({{"path", file.filename().string()},
                       {"bytes", std::filesystem::file_size(file)},
                       {"sha256", sha256_file(file)}});
  }
  manifest["outputs"] = std::move(outputs);

  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (out_dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

}  // namespace advbandit
