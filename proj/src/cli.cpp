#include "advbandit/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "advbandit/bounds.hpp"
#include "advbandit/config.hpp"
#include "advbandit/output.hpp"
#include "json.hpp"

namespace advbandit {

namespace {

namespace fs = std::filesystem;

RunConfig load_with_overrides(const fs::path& config_path, const CliOptions& options) {
  RunConfig config = load_config(config_path);
  if (options.seed) config.experiment.base_seed = *options.seed;
  if (options.trials) {
    if (*options.trials < 1) throw ConfigError("--trials", "must be >= 1");
    config.experiment.trials = *options.trials;
  }
  return config;
}

std::string overrides_json(const CliOptions& options, const nlohmann::json& extra = {}) {
  nlohmann::json doc = extra.is_object() ? extra : nlohmann::json::object();
  if (options.seed) doc["seed"] = *options.seed;
  if (options.trials) doc["trials"] = *options.trials;
  return doc.dump();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

void print_summary(std::ostream& out, const AggregateSummary& summary) {
  out << "T\ttarget_fraction\tper_round_cost\ttrials\n";
  for (const auto& h : summary.horizons) {
    out << h.horizon << '\t' << format_real(h.target_fraction()) << '\t'
        << format_real(h.per_round_cost()) << '\t' << h.trials.size() << '\n';
  }
}

const char* strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::none:
      return "none";
    case Strategy::easy:
      return "easy";
    case Strategy::general:
      return "general";
  }
  return "?";
}

void require_strategy(const AttackerConfig& attacker, Strategy expected, const std::string& what) {
  if (attacker.strategy != expected) {
    throw UsageError(what + " needs attacker.strategy = " + strategy_name(expected) + ", got " +
                     strategy_name(attacker.strategy));
  }
}

template <typename Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int cmd_run(const fs::path& config_path, const CliOptions& options) {
  return guarded([&] {
    const RunConfig config = load_with_overrides(config_path, options);
    const AggregateSummary summary = run_experiment(config.experiment);

    prepare_out_dir(options.out_dir);
    const fs::path aggregate_path = options.out_dir / "aggregate.csv";
    const fs::path trials_path = options.out_dir / "trials.jsonl";
    {
      auto out = open_output(aggregate_path);
      write_aggregate_header(out, std::nullopt);
      write_aggregate_rows(out, summary, std::nullopt);
      auto lines = open_output(trials_path);
      write_trials_jsonl(lines, summary, std::nullopt);
    }
    write_manifest(options.out_dir,
                   {"run", config.echo, overrides_json(options), {aggregate_path, trials_path}});
    if (!options.quiet) print_summary(std::cout, summary);
    return kExitOk;
  });
}

int cmd_sweep(const fs::path& config_path, const std::string& sweep_key,
              const std::vector<double>& values, const CliOptions& options) {
  return guarded([&] {
    if (sweep_key != "T" && sweep_key != "epsilon" && sweep_key != "phi") {
      throw UsageError("sweep key must be one of T, epsilon, phi; got '" + sweep_key + "'");
    }
    if (values.empty()) throw UsageError("sweep needs at least one value");
    const RunConfig config = load_with_overrides(config_path, options);

    if (sweep_key == "epsilon") {
      require_strategy(config.experiment.attacker, Strategy::general, "an epsilon sweep");
    }
    if (sweep_key == "phi" && !std::holds_alternative<ExpRbSpec>(config.experiment.player)) {
      throw UsageError("a phi sweep needs player.name = exprb");
    }

    // Column name; "T" is already the horizon column.
    const std::string column = sweep_key == "T" ? "horizon" : sweep_key;
    std::vector<std::pair<SweepTag, ExperimentConfig>> groups;
    for (double value : values) {
      ExperimentConfig experiment = config.experiment;
      if (sweep_key == "T") {
        if (!(value >= 1.0) || value != std::floor(value)) {
          throw ConfigError("sweep.T", "values must be positive integers, got " + format_real(value));
        }
        experiment.horizons = {static_cast<Round>(value)};
      } else if (sweep_key == "epsilon") {
        experiment.attacker.epsilon = value;
      } else {
        if (!(value >= 0.0 && value <= 1.0)) {
          throw ConfigError("sweep.phi", "exponents must lie in [0, 1], got " + format_real(value));
        }
        experiment.player = ExpRbSpec{value};
      }
      try {
        validate(experiment);
      } catch (const ParameterError& e) {
        throw ConfigError("sweep." + sweep_key, e.what());
      }
      groups.emplace_back(SweepTag{column, format_real(value)}, std::move(experiment));
    }

    std::vector<std::pair<SweepTag, AggregateSummary>> results;
    for (const auto& [tag, experiment] : groups) {
      results.emplace_back(tag, run_experiment(experiment));
    }

    prepare_out_dir(options.out_dir);
    const fs::path aggregate_path = options.out_dir / "aggregate.csv";
    const fs::path trials_path = options.out_dir / "trials.jsonl";
    {
      auto out = open_output(aggregate_path);
      auto lines = open_output(trials_path);
      write_aggregate_header(out, column);
      for (const auto& [tag, summary] : results) {
        write_aggregate_rows(out, summary, tag);
        write_trials_jsonl(lines, summary, tag);
      }
    }
    nlohmann::json sweep = {{"key", sweep_key}, {"values", values}};
    write_manifest(options.out_dir, {"sweep", config.echo,
                                     overrides_json(options, {{"sweep", sweep}}),
                                     {aggregate_path, trials_path}});
    if (!options.quiet) {
      for (const auto& [tag, summary] : results) {
        std::cout << "# " << sweep_key << " = " << tag.value << '\n';
        print_summary(std::cout, summary);
      }
    }
    return kExitOk;
  });
}

int cmd_verify(const fs::path& config_path, const std::string& theorem,
               const CliOptions& options) {
  return guarded([&] {
    const RunConfig config = load_with_overrides(config_path, options);
    const ExperimentConfig& experiment = config.experiment;
    const AttackerConfig& attacker = experiment.attacker;
    const std::size_t k = num_arms(experiment.environment);
    auto bound_constant = [&] {
      return config.verify.bound_constant.value_or(default_bound_constant(experiment.player, k));
    };

    std::vector<BoundReport> reports;
    std::optional<AggregateSummary> summary;

    if (theorem == "thm1") {
      require_strategy(attacker, Strategy::easy, "thm1");
      const double M = bound_constant();
      double rho = 0.0;
      if (config.verify.rho) {
        rho = *config.verify.rho;
      } else {
        // Largest rho with L_t(target) <= 1 - rho on every round.
        const LossMatrix env = make_env(experiment.environment, experiment.horizons.back());
        double worst = 0.0;
        for (Round t = 1; t <= env.horizon(); ++t) {
          worst = std::max(worst, env.loss(t, attacker.target).value());
        }
        rho = 1.0 - worst;
        if (!(rho > 0.0)) {
          throw UsageError("thm1 needs the target's loss bounded away from 1; it reaches " +
                           format_real(worst));
        }
      }
      summary = run_experiment(experiment);
      for (const auto& h : summary->horizons) {
        auto [selections, cost] = check_thm1(h, rho, attacker.alpha, M);
        reports.push_back(selections);
        reports.push_back(cost);
      }
    } else if (theorem == "thm2") {
      require_strategy(attacker, Strategy::general, "thm2");
      const double M = bound_constant();
      summary = run_experiment(experiment);
      for (const auto& h : summary->horizons) {
        auto [selections, cost] = check_thm2(h, attacker.alpha, attacker.epsilon, M);
        reports.push_back(selections);
        reports.push_back(cost);
      }
    } else if (theorem == "thm3") {
      require_strategy(attacker, Strategy::general, "thm3");
      const double M = bound_constant();
      const double rho = config.verify.rho.value_or(0.5);
      summary = run_experiment(experiment);
      for (const auto& h : summary->horizons) {
        const LossMatrix env = make_env(experiment.environment, h.horizon);
        auto [selections, cost] =
            check_thm3(h, env, attacker.target, rho, attacker.alpha, attacker.epsilon, M);
        reports.push_back(selections);
        reports.push_back(cost);
      }
    } else if (theorem == "lemma1") {
      if (!std::holds_alternative<Exp3Spec>(experiment.player)) {
        throw UsageError("lemma1 describes plain Exp3; set player.name = exp3");
      }
      require_strategy(attacker, Strategy::none, "lemma1");
      summary = run_experiment(experiment);
      for (const auto& h : summary->horizons) {
        const LossMatrix env = make_env(experiment.environment, h.horizon);
        for (auto& report : check_lemma1(h, experiment.player, attacker, env)) {
          reports.push_back(std::move(report));
        }
      }
    } else if (theorem == "lower_bound") {
      if (attacker.strategy == Strategy::none) {
        throw UsageError("lower_bound needs an attack; attacker.strategy is none");
      }
      LowerBoundOptions lb;
      if (const auto* exp3 = std::get_if<Exp3Spec>(&experiment.player)) {
        if (const auto* power = std::get_if<PowerEta>(&exp3->eta)) lb.beta = power->beta;
      }
      lb.base_seed = experiment.base_seed;
      lb.strategy = attacker.strategy;
      lb.threads = experiment.threads;
      LowerBoundResult result =
          lower_bound_experiment(attacker.alpha, experiment.horizons, experiment.trials, lb);
      reports.push_back(lower_bound_report(result));
      summary = std::move(result.aggregate);
    } else if (theorem == "equivalence") {
      if (attacker.strategy == Strategy::none) {
        throw UsageError("equivalence needs a template attack; attacker.strategy is none");
      }
      for (Round horizon : experiment.horizons) {
        const LossMatrix env = make_env(experiment.environment, horizon);
        int identical = 0;
        for (int i = 0; i < experiment.trials; ++i) {
          identical += equivalence_check(env, attacker, experiment.player, horizon,
                                         experiment.base_seed + static_cast<std::uint64_t>(i))
                           ? 1
                           : 0;
        }
        BoundReport report;
        report.bound = "equivalence.identical_runs";
        report.horizon = horizon;
        report.lhs = identical;
        report.rhs = experiment.trials;
        report.trials = experiment.trials;
        report.satisfied = report.satisfied_raw = identical == experiment.trials;
        reports.push_back(report);
      }
    } else {
      throw UsageError("theorem must be one of thm1, thm2, thm3, lemma1, lower_bound, "
                       "equivalence; got '" + theorem + "'");
    }

    prepare_out_dir(options.out_dir);
    std::vector<fs::path> outputs;
    const fs::path bounds_path = options.out_dir / "bounds.json";
    {
      auto out = open_output(bounds_path);
      out << bounds_to_json(reports);
    }
    outputs.push_back(bounds_path);
    if (summary) {
      const fs::path aggregate_path = options.out_dir / "aggregate.csv";
      const fs::path trials_path = options.out_dir / "trials.jsonl";
      auto out = open_output(aggregate_path);
      write_aggregate_header(out, std::nullopt);
      write_aggregate_rows(out, *summary, std::nullopt);
      auto lines = open_output(trials_path);
      write_trials_jsonl(lines, *summary, std::nullopt);
      out.close();
      lines.close();
      outputs.push_back(aggregate_path);
      outputs.push_back(trials_path);
    }
    write_manifest(options.out_dir, {"verify", config.echo,
                                     overrides_json(options, {{"theorem", theorem}}), outputs});

    bool all_satisfied = true;
    for (const auto& r : reports) {
      all_satisfied = all_satisfied && r.satisfied;
      if (!options.quiet) {
        std::cout << (r.satisfied ? "PASS " : "FAIL ") << r.bound << " T=" << r.horizon << ' '
                  << format_real(r.lhs)
                  << (r.direction == BoundDirection::at_least ? " >= " : " <= ")
                  << format_real(r.rhs) << " (slack " << format_real(r.slack) << ")\n";
      }
    }
    return all_satisfied ? kExitOk : kExitFailure;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Template-based reward-poisoning attacks on adversarial bandits"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int trials = 0;
  bool quiet = false;
  std::string sweep_key;
  std::vector<double> sweep_values;
  std::string theorem;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Experiment configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override experiment.base_seed");
    sub->add_option("--trials", trials, "Override experiment.trials")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "Suppress the summary on stdout");
  };

  CLI::App* run = app.add_subcommand("run", "Run the configured experiment");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "Run the experiment once per parameter value");
  add_common(sweep);
  sweep->add_option("--key", sweep_key, "Parameter to sweep")
      ->required()
      ->check(CLI::IsMember({"T", "epsilon", "phi"}));
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  CLI::App* verify = app.add_subcommand("verify", "Check a bound against the experiment");
  add_common(verify);
  verify->add_option("--theorem", theorem, "Bound to check")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3", "lemma1", "lower_bound", "equivalence"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CliOptions options;
  options.out_dir = out_dir;
  options.quiet = quiet;
  auto* active = app.get_subcommands().front();
  if (active->count("--seed") > 0) options.seed = seed;
  if (active->count("--trials") > 0) options.trials = trials;

  if (*run) return cmd_run(config_path, options);
  if (*sweep) return cmd_sweep(config_path, sweep_key, sweep_values, options);
  return cmd_verify(config_path, theorem, options);
}

}  // namespace advbandit
