#pragma once

#include <cstddef>

#include "advbandit/core.hpp"
#include "advbandit/environments.hpp"

namespace advbandit {

enum class Strategy { none, easy, general };

struct AttackerConfig {
  ArmId target;
  double alpha = 0.5;    // victim regret rate, in [1/2, 1)
  double epsilon = 0.0;  // general strategy only, in [0, 1 - alpha)
  Strategy strategy = Strategy::none;
};

/// Throws ParameterError for an out-of-range target, alpha or epsilon.
void validate(const AttackerConfig& config, std::size_t num_arms);

/// (1 - alpha) / 2: the epsilon minimizing the general attack's cost bound.
double optimal_epsilon(double alpha);

/// t^(alpha + epsilon - 1): the margin by which the general template keeps
/// the target below every other arm at round t.
double target_margin(const AttackerConfig& config, Round t);

// Per-round perturbations. They see only (t, a_t, l_t), never the
// environment itself.

LossValue no_attack_perturb(Round t, ArmId arm, LossValue loss);

/// Target keeps its loss; every other arm is pushed to 1.
LossValue easy_template_perturb(const AttackerConfig& config, Round t, ArmId arm,
                                LossValue loss);

/// Target is capped at 1 - t^(alpha + epsilon - 1); every other arm is
/// pushed to 1. Throws DomainError for t < 1.
LossValue general_template_perturb(const AttackerConfig& config, Round t, ArmId arm,
                                   LossValue loss);

LossValue perturb(const AttackerConfig& config, Round t, ArmId arm, LossValue loss);

/// The template loss at (t, a), i.e. what the player would be shown if it
/// pulled a at round t. Strategy none returns the environment's loss.
LossValue template_loss(const AttackerConfig& config, const LossMatrix& env, Round t, ArmId arm);

/// Table environment holding the full template for rounds 1..T.
LossMatrix materialize_template(const AttackerConfig& config, const LossMatrix& env,
                                Round horizon);

/// Per-trial attacker: applies the configured perturbation and accumulates
/// C_t = sum of |perturbed - clean|.
class AttackerState {
 public:
  explicit AttackerState(AttackerConfig config) : config_(config) {}

  LossValue observe(Round t, ArmId arm, LossValue loss);

  [[nodiscard]] const AttackerConfig& config() const noexcept { return config_; }
  [[nodiscard]] double cumulative_cost() const noexcept { return cumulative_cost_; }

 private:
  AttackerConfig config_;
  double cumulative_cost_ = 0.0;
};

}  // namespace advbandit
