#include "advbandit/bounds.hpp"

#include <cmath>
#include <string>

namespace advbandit {

namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw ParameterError("rho must lie in (0, 1], got " + format_real(rho));
  }
}

void check_alpha_epsilon(double alpha, double epsilon) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in [1/2, 1), got " + format_real(alpha));
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0 - alpha)) {
    throw ParameterError("epsilon must satisfy 0 <= epsilon < 1 - alpha, got " +
                         format_real(epsilon));
  }
}

void check_constant(double bound_constant) {
  if (!(bound_constant > 0.0)) {
    throw ParameterError("bound constant M must be positive, got " + format_real(bound_constant));
  }
}

bool respects(BoundDirection direction, double lhs, double rhs) {
  return direction == BoundDirection::at_least ? lhs >= rhs - kLossTolerance
                                               : lhs <= rhs + kLossTolerance;
}

std::pair<BoundReport, BoundReport> selection_and_cost(const std::string& name,
                                                       const HorizonAggregate& summary,
                                                       double excess) {
  const auto T = static_cast<double>(summary.horizon);
  const std::size_t n = summary.trials.size();
  return {make_report(name + ".target_selections", summary.horizon, BoundDirection::at_least,
                      summary.target_selections, n, T - excess),
          make_report(name + ".attack_cost", summary.horizon, BoundDirection::at_most,
                      summary.total_cost, n, excess)};
}

}  // namespace

double statistical_slack(const MetricStats& stats, std::size_t trials) {
  return 3.0 * stats.stddev / std::sqrt(static_cast<double>(trials));
}

BoundReport make_report(std::string bound, Round horizon, BoundDirection direction,
                        const MetricStats& empirical, std::size_t trials, double threshold) {
  BoundReport report;
  report.bound = std::move(bound);
  report.horizon = horizon;
  report.direction = direction;
  report.lhs = empirical.mean;
  report.rhs = threshold;
  report.slack = statistical_slack(empirical, trials);
  report.trials = static_cast<int>(trials);
  report.satisfied_raw = respects(direction, report.lhs, report.rhs);
  const double adjusted =
      direction == BoundDirection::at_least ? report.lhs + report.slack : report.lhs - report.slack;
  report.satisfied = respects(direction, adjusted, report.rhs);
  return report;
}

std::pair<BoundReport, BoundReport> check_thm1(const HorizonAggregate& summary, double rho,
                                               double alpha, double bound_constant) {
  check_rho(rho);
  check_alpha_epsilon(alpha, 0.0);
  check_constant(bound_constant);
  const auto T = static_cast<double>(summary.horizon);
  return selection_and_cost("thm1", summary, bound_constant * std::pow(T, alpha) / rho);
}

std::pair<BoundReport, BoundReport> check_thm2(const HorizonAggregate& summary, double alpha,
                                               double epsilon, double bound_constant) {
  check_alpha_epsilon(alpha, epsilon);
  check_constant(bound_constant);
  const auto T = static_cast<double>(summary.horizon);
  const double rate = alpha + epsilon;
  const double head = std::pow(T, 1.0 - rate) / rate + bound_constant * std::pow(T, 1.0 - epsilon);
  const double margin_cost = std::pow(T, rate) / rate;

  const std::size_t n = summary.trials.size();
  return {make_report("thm2.target_selections", summary.horizon, BoundDirection::at_least,
                      summary.target_selections, n, T - head),
          make_report("thm2.attack_cost", summary.horizon, BoundDirection::at_most,
                      summary.total_cost, n, head + margin_cost)};
}

Round count_near_max_rounds(const LossMatrix& env, ArmId target, double rho, Round horizon) {
  Round tau = 0;
  for (Round t = 1; t <= horizon; ++t) {
    if (env.loss(t, target).value() > 1.0 - rho) ++tau;
  }
  return tau;
}

std::pair<BoundReport, BoundReport> check_thm3(const HorizonAggregate& summary,
                                               const LossMatrix& env, ArmId target, double rho,
                                               double alpha, double epsilon,
                                               double bound_constant) {
  check_rho(rho);
  check_alpha_epsilon(alpha, epsilon);
  check_constant(bound_constant);
  const auto T = static_cast<double>(summary.horizon);
  const auto tau = static_cast<double>(count_near_max_rounds(env, target, rho, summary.horizon));
  const double warmup = std::pow(rho, 1.0 / (alpha + epsilon - 1.0));
  return selection_and_cost("thm3", summary,
                            warmup + tau + bound_constant * std::pow(T, alpha) / rho);
}

std::vector<BoundReport> check_lemma1(const HorizonAggregate& summary,
                                      std::span<const double> initial_policy, double eta,
                                      const LossMatrix& env) {
  const std::size_t k = env.num_arms();
  if (initial_policy.size() != k || summary.arm_selections.size() != k) {
    throw ParameterError("initial policy, run and environment disagree on K");
  }
  if (!(eta > 0.0)) throw ParameterError("eta must be positive, got " + format_real(eta));

  const auto T = static_cast<double>(summary.horizon);
  std::vector<BoundReport> reports;
  for (std::size_t a = 0; a < k; ++a) {
    double loss_total = 0.0;
    for (Round t = 1; t <= summary.horizon; ++t) loss_total += env.loss(t, ArmId{a}).value();
    reports.push_back(make_report("lemma1.arm_" + std::to_string(a), summary.horizon,
                                  BoundDirection::at_least, summary.arm_selections[a],
                                  summary.trials.size(),
                                  T * initial_policy[a] - eta * T * loss_total));
  }
  return reports;
}

std::vector<BoundReport> check_lemma1(const HorizonAggregate& summary, const PlayerSpec& player,
                                      const AttackerConfig& attacker, const LossMatrix& env) {
  const auto* exp3 = std::get_if<Exp3Spec>(&player);
  if (exp3 == nullptr) {
    throw UsageError("lemma1 describes plain Exp3; the configured player is not exp3");
  }
  if (attacker.strategy != Strategy::none) {
    throw UsageError("lemma1 describes an unattacked run; set attacker.strategy to none");
  }
  const std::size_t k = env.num_arms();
  const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
  return check_lemma1(summary, uniform, resolve_eta(exp3->eta, k, summary.horizon), env);
}

double default_bound_constant(const PlayerSpec& player, std::size_t num_arms) {
  if (const auto* exp3 = std::get_if<Exp3Spec>(&player)) {
    return exp3_regret_constant(exp3->eta, num_arms);
  }
  const double k = static_cast<double>(num_arms);
  return std::sqrt(2.0 * k * std::log(k));
}

LowerBoundResult lower_bound_experiment(double alpha, std::vector<Round> horizons, int trials,
                                        LowerBoundOptions options) {
  check_alpha_epsilon(alpha, 0.0);
  if (options.strategy == Strategy::none) {
    throw ParameterError("lower-bound experiment needs an attack; strategy none has zero cost");
  }
  ExperimentConfig config;
  config.environment = ConstantEnvSpec{{0.0, 0.5}};
  config.player = Exp3Spec{PowerEta{options.beta, alpha}};
  config.attacker.target = ArmId{1};
  config.attacker.alpha = alpha;
  config.attacker.strategy = options.strategy;
  if (options.strategy == Strategy::general) {
    config.attacker.epsilon = optimal_epsilon(alpha);
  }
  config.horizons = std::move(horizons);
  config.trials = trials;
  config.base_seed = options.base_seed;
  config.threads = options.threads;

  LowerBoundResult result;
  result.alpha = alpha;
  result.aggregate = run_experiment(config);

  std::vector<LogLogPoint> points;
  for (const auto& h : result.aggregate.horizons) {
    points.push_back({static_cast<double>(h.horizon), h.total_cost.mean});
  }
  result.cost_exponent = loglog_slope(points);
  return result;
}

BoundReport lower_bound_report(const LowerBoundResult& result) {
  BoundReport report;
  report.bound = "lower_bound.cost_exponent";
  report.horizon = result.aggregate.horizons.back().horizon;
  report.direction = BoundDirection::at_least;
  report.lhs = result.cost_exponent;
  report.rhs = result.alpha - kLowerBoundExponentTolerance;
  report.trials = static_cast<int>(result.aggregate.horizons.back().trials.size());
  report.satisfied_raw = report.lhs >= report.rhs;
  report.satisfied = report.satisfied_raw;
  return report;
}

}  // namespace advbandit
