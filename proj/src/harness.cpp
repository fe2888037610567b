#include "advbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace advbandit {

LossMatrix make_env(const EnvSpec& spec, Round horizon) {
  if (const auto* constant = std::get_if<ConstantEnvSpec>(&spec)) {
    return make_constant_env(constant->losses, horizon);
  }
  if (std::holds_alternative<Example1EnvSpec>(spec)) {
    return make_example1_env(horizon);
  }
  const auto& table = std::get<TableEnvSpec>(spec);
  if (horizon > table.matrix.horizon()) {
    throw ParameterError("table environment " + table.source + " covers " +
                         std::to_string(table.matrix.horizon()) + " rounds, horizon " +
                         std::to_string(horizon) + " requested");
  }
  return table.matrix;
}

std::size_t num_arms(const EnvSpec& spec) {
  if (const auto* constant = std::get_if<ConstantEnvSpec>(&spec)) {
    return constant->losses.size();
  }
  if (std::holds_alternative<Example1EnvSpec>(spec)) return 2;
  return std::get<TableEnvSpec>(spec).matrix.num_arms();
}

void validate(const ExperimentConfig& config) {
  if (config.horizons.empty()) {
    throw ParameterError("experiment.horizons must not be empty");
  }
  for (std::size_t i = 0; i < config.horizons.size(); ++i) {
    if (config.horizons[i] < 1) {
      throw ParameterError("experiment.horizons entries must be >= 1");
    }
    if (i > 0 && config.horizons[i] <= config.horizons[i - 1]) {
      throw ParameterError("experiment.horizons must be strictly increasing");
    }
  }
  if (config.trials < 1) {
    throw ParameterError("experiment.trials must be >= 1, got " + std::to_string(config.trials));
  }
  const std::size_t k = num_arms(config.environment);
  validate(config.attacker, k);
  for (Round horizon : config.horizons) {
    (void)make_env(config.environment, horizon);
    (void)make_player(config.player, k, horizon);
  }
}

TrialResult run_trial(const LossMatrix& env, const PlayerSpec& player_spec,
                      const AttackerConfig& attacker, Round horizon, std::uint64_t seed,
                      TraceOptions options) {
  if (horizon < 1 || horizon > env.horizon()) {
    throw ParameterError("horizon " + std::to_string(horizon) + " outside [1, " +
                         std::to_string(env.horizon()) + "]");
  }
  const std::size_t k = env.num_arms();
  validate(attacker, k);
  Player player = make_player(player_spec, k, horizon);
  AttackerState attack(attacker);
  Rng rng(seed);

  TrialResult result;
  TrialSummary& summary = result.summary;
  summary.horizon = horizon;
  summary.seed = seed;
  summary.selections.assign(k, 0);
  if (options.record_rounds) result.trace.reserve(static_cast<std::size_t>(horizon));

  std::vector<double> probs(k);
  std::vector<double> clean_totals(k, 0.0);
  std::vector<double> template_totals(k, 0.0);
  double clean_incurred = 0.0;
  double shown_incurred = 0.0;

  for (Round t = 1; t <= horizon; ++t) {
    std::visit([&](const auto& p) { fill_policy(p, probs); }, player);
    const ArmId arm = sample_arm(probs, rng);
    const LossValue clean = env.loss(t, arm);
    const LossValue shown = attack.observe(t, arm, clean);
    std::visit([&](auto& p) { update(p, arm, shown); }, player);

    ++summary.selections[arm.index];
    for (std::size_t a = 0; a < k; ++a) {
      clean_totals[a] += env.loss(t, ArmId{a}).value();
      template_totals[a] += template_loss(attacker, env, t, ArmId{a}).value();
    }
    clean_incurred += clean.value();
    shown_incurred += shown.value();

    if (options.record_rounds) {
      result.trace.push_back(make_round_record(
          t, arm, clean, shown,
          options.record_policy ? probs : std::vector<double>{}));
    }
  }

  summary.total_cost = attack.cumulative_cost();
  summary.regret_clean =
      clean_incurred - *std::min_element(clean_totals.begin(), clean_totals.end());
  summary.regret_template =
      shown_incurred - *std::min_element(template_totals.begin(), template_totals.end());
  return result;
}

MetricStats describe(std::span<const double> samples) {
  if (samples.empty()) throw ParameterError("cannot describe an empty sample");
  MetricStats stats;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  stats.min = *lo;
  stats.max = *hi;
  const double n = static_cast<double>(samples.size());
  stats.mean = std::clamp(std::accumulate(samples.begin(), samples.end(), 0.0) / n, stats.min,
                          stats.max);
  if (samples.size() > 1) {
    double squares = 0.0;
    for (double x : samples) squares += (x - stats.mean) * (x - stats.mean);
    stats.stddev = std::sqrt(squares / (n - 1.0));
  }
  return stats;
}

HorizonAggregate aggregate_trials(Round horizon, ArmId target, std::vector<TrialSummary> trials) {
  if (trials.empty()) throw ParameterError("no trials to aggregate");
  const std::size_t k = trials.front().selections.size();
  if (target.index >= k) throw ParameterError("target arm outside the trial's arm range");

  HorizonAggregate agg;
  agg.horizon = horizon;
  agg.target = target;

  auto collect = [&](auto&& field) {
    std::vector<double> xs;
    xs.reserve(trials.size());
    for (const auto& trial : trials) xs.push_back(field(trial));
    return describe(xs);
  };
  agg.target_selections = collect(
      [&](const TrialSummary& s) { return static_cast<double>(s.selections[target.index]); });
  agg.non_target_selections = collect([&](const TrialSummary& s) {
    return static_cast<double>(s.horizon - s.selections[target.index]);
  });
  agg.total_cost = collect([](const TrialSummary& s) { return s.total_cost; });
  agg.regret_clean = collect([](const TrialSummary& s) { return s.regret_clean; });
  agg.regret_template = collect([](const TrialSummary& s) { return s.regret_template; });
  for (std::size_t a = 0; a < k; ++a) {
    agg.arm_selections.push_back(
        collect([a](const TrialSummary& s) { return static_cast<double>(s.selections[a]); }));
  }
  agg.trials = std::move(trials);
  return agg;
}

const HorizonAggregate& AggregateSummary::at(Round horizon) const {
  for (const auto& h : horizons) {
    if (h.horizon == horizon) return h;
  }
  throw std::out_of_range("horizon " + std::to_string(horizon) + " not in aggregate");
}

AggregateSummary run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t k = num_arms(config.environment);
  const auto trials = static_cast<std::size_t>(config.trials);

  std::vector<LossMatrix> envs;
  envs.reserve(config.horizons.size());
  for (Round horizon : config.horizons) envs.push_back(make_env(config.environment, horizon));

  const std::size_t jobs = config.horizons.size() * trials;
  std::vector<TrialSummary> results(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t h = job / trials;
      const std::size_t i = job % trials;
      try {
        results[job] = run_trial(envs[h], config.player, config.attacker, config.horizons[h],
                                 config.base_seed + i)
                           .summary;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  AggregateSummary summary;
  summary.target = config.attacker.target;
  summary.num_arms = k;
  for (std::size_t h = 0; h < config.horizons.size(); ++h) {
    std::vector<TrialSummary> horizon_trials(results.begin() + static_cast<std::ptrdiff_t>(h * trials),
                                             results.begin() +
                                                 static_cast<std::ptrdiff_t>((h + 1) * trials));
    summary.horizons.push_back(
        aggregate_trials(config.horizons[h], config.attacker.target, std::move(horizon_trials)));
  }
  return summary;
}

bool equivalence_check(const LossMatrix& env, const AttackerConfig& attacker,
                       const PlayerSpec& player, Round horizon, std::uint64_t seed) {
  return equivalence_check(env, attacker, player, horizon, seed, seed);
}

bool equivalence_check(const LossMatrix& env, const AttackerConfig& attacker,
                       const PlayerSpec& player, Round horizon, std::uint64_t seed,
                       std::uint64_t direct_seed) {
  if (attacker.strategy == Strategy::none) {
    throw ParameterError("equivalence check needs a template attack (easy or general)");
  }
  const TraceOptions options{.record_rounds = true};
  const auto attacked = run_trial(env, player, attacker, horizon, seed, options);

  const LossMatrix templated = materialize_template(attacker, env, horizon);
  AttackerConfig passthrough = attacker;
  passthrough.strategy = Strategy::none;
  const auto direct = run_trial(templated, player, passthrough, horizon, direct_seed, options);

  return std::equal(attacked.trace.begin(), attacked.trace.end(), direct.trace.begin(),
                    direct.trace.end(), [](const RoundRecord& lhs, const RoundRecord& rhs) {
                      return lhs.arm == rhs.arm;
                    });
}

}  // namespace advbandit
