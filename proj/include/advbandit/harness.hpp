#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "advbandit/attackers.hpp"
#include "advbandit/core.hpp"
#include "advbandit/environments.hpp"
#include "advbandit/players.hpp"

namespace advbandit {

// Environment selection. Constant and example1 are rebuilt for every horizon;
// a table is used as-is and must cover the longest horizon.

struct ConstantEnvSpec {
  std::vector<double> losses;
};
struct Example1EnvSpec {};
struct TableEnvSpec {
  LossMatrix matrix;
  std::string source;
};
using EnvSpec = std::variant<ConstantEnvSpec, Example1EnvSpec, TableEnvSpec>;

LossMatrix make_env(const EnvSpec& spec, Round horizon);
std::size_t num_arms(const EnvSpec& spec);

struct ExperimentConfig {
  EnvSpec environment;
  PlayerSpec player;
  AttackerConfig attacker;
  std::vector<Round> horizons;
  int trials = 10;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;  // 0: one per hardware thread
};

/// Throws ParameterError on the first inconsistency found.
void validate(const ExperimentConfig& config);

struct TraceOptions {
  bool record_rounds = false;
  bool record_policy = false;
};

struct TrialResult {
  std::vector<RoundRecord> trace;  // empty unless TraceOptions::record_rounds
  TrialSummary summary;
};

/// Plays T rounds: sample a_t from the policy, read l_t from the environment,
/// let the attacker replace it, and update the player on the replacement.
/// The result is a pure function of the arguments.
TrialResult run_trial(const LossMatrix& env, const PlayerSpec& player,
                      const AttackerConfig& attacker, Round horizon, std::uint64_t seed,
                      TraceOptions options = {});

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single trial
  double min = 0.0;
  double max = 0.0;
};

MetricStats describe(std::span<const double> samples);

struct HorizonAggregate {
  Round horizon = 0;
  ArmId target;
  std::vector<TrialSummary> trials;  // ordered by trial index
  MetricStats target_selections;
  MetricStats non_target_selections;
  MetricStats total_cost;
  MetricStats regret_clean;
  MetricStats regret_template;
  std::vector<MetricStats> arm_selections;

  [[nodiscard]] double target_fraction() const {
    return target_selections.mean / static_cast<double>(horizon);
  }
  [[nodiscard]] double per_round_cost() const {
    return total_cost.mean / static_cast<double>(horizon);
  }
};

HorizonAggregate aggregate_trials(Round horizon, ArmId target, std::vector<TrialSummary> trials);

struct AggregateSummary {
  ArmId target;
  std::size_t num_arms = 0;
  std::vector<HorizonAggregate> horizons;

  /// Throws std::out_of_range when T was not run.
  [[nodiscard]] const HorizonAggregate& at(Round horizon) const;
};

/// Trial i of every horizon uses seed base_seed + i. Trials may run on
/// several threads; results are collected by index so the output does not
/// depend on scheduling.
AggregateSummary run_experiment(const ExperimentConfig& config);

struct LogLogPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Least-squares slope of ln y against ln x. Needs two or more points with
/// distinct positive x and positive y.
double loglog_slope(std::span<const LogLogPoint> points);

/// Attack equivalence: the arm sequence under (env + template attack) equals
/// the arm sequence of the same player run on the materialized template with
/// no attacker. direct_seed defaults to the attacked run's seed; passing a
/// different one gives a negative control.
bool equivalence_check(const LossMatrix& env, const AttackerConfig& attacker,
                       const PlayerSpec& player, Round horizon, std::uint64_t seed);
bool equivalence_check(const LossMatrix& env, const AttackerConfig& attacker,
                       const PlayerSpec& player, Round horizon, std::uint64_t seed,
                       std::uint64_t direct_seed);

}  // namespace advbandit
