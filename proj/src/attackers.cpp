#include "advbandit/attackers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace advbandit {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in [1/2, 1), got " + format_real(alpha));
  }
}

}  // namespace

void validate(const AttackerConfig& config, std::size_t num_arms) {
  if (config.target.index >= num_arms) {
    throw ParameterError("target_arm " + std::to_string(config.target.index) +
                         " outside [0, " + std::to_string(num_arms) + ")");
  }
  if (config.strategy != Strategy::general) return;
  check_alpha(config.alpha);
  if (!(config.epsilon >= 0.0 && config.epsilon < 1.0 - config.alpha)) {
    throw ParameterError("epsilon must satisfy 0 <= epsilon < 1 - alpha (alpha = " +
                         format_real(config.alpha) + "), got " + format_real(config.epsilon));
  }
}

double optimal_epsilon(double alpha) {
  check_alpha(alpha);
  return (1.0 - alpha) / 2.0;
}

double target_margin(const AttackerConfig& config, Round t) {
  if (t < 1) {
    throw DomainError("the general template is defined for t >= 1, got " + std::to_string(t));
  }
  return std::exp((config.alpha + config.epsilon - 1.0) * std::log(static_cast<double>(t)));
}

LossValue no_attack_perturb(Round, ArmId, LossValue loss) { return loss; }

LossValue easy_template_perturb(const AttackerConfig& config, Round, ArmId arm,
                                LossValue loss) {
  return arm == config.target ? loss : LossValue(1.0);
}

LossValue general_template_perturb(const AttackerConfig& config, Round t, ArmId arm,
                                   LossValue loss) {
  const double margin = target_margin(config, t);
  if (arm != config.target) return LossValue(1.0);
  return LossValue(std::min(1.0 - margin, loss.value()));
}

LossValue perturb(const AttackerConfig& config, Round t, ArmId arm, LossValue loss) {
  switch (config.strategy) {
    case Strategy::none:
      return no_attack_perturb(t, arm, loss);
    case Strategy::easy:
      return easy_template_perturb(config, t, arm, loss);
    case Strategy::general:
      return general_template_perturb(config, t, arm, loss);
  }
  return loss;
}

LossValue template_loss(const AttackerConfig& config, const LossMatrix& env, Round t,
                        ArmId arm) {
  // Non-target entries never read the environment; only L_t(a_t) is needed.
  return perturb(config, t, arm, env.loss(t, arm));
}

LossMatrix materialize_template(const AttackerConfig& config, const LossMatrix& env,
                                Round horizon) {
  const std::size_t k = env.num_arms();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(horizon) * k);
  for (Round t = 1; t <= horizon; ++t) {
    for (std::size_t a = 0; a < k; ++a) {
      values.push_back(template_loss(config, env, t, ArmId{a}).value());
    }
  }
  return make_table_env(horizon, k, std::move(values));
}

LossValue AttackerState::observe(Round t, ArmId arm, LossValue loss) {
  const LossValue shown = perturb(config_, t, arm, loss);
  cumulative_cost_ += std::abs(shown.value() - loss.value());
  return shown;
}

}  // namespace advbandit
