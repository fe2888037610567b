#include "advbandit/players.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace advbandit {

namespace {

// Rescale when the largest weight drops below this; the smallest positive
// normal double is the floor for any single weight.
constexpr double kRescaleBelow = 0x1p-512;
constexpr double kWeightFloor = std::numeric_limits<double>::min();

void check_arms(std::size_t num_arms) {
  if (num_arms < 2) {
    throw ParameterError("player needs K >= 2 arms, got " + std::to_string(num_arms));
  }
}

double arm_probability(const PlayerState& state, std::size_t arm, double weight_sum) {
  const double exploit = state.weights[arm] / weight_sum;
  if (state.gamma == 0.0) return exploit;
  return (1.0 - state.gamma) * exploit +
         state.gamma / static_cast<double>(state.weights.size());
}

double weight_sum(const PlayerState& state) {
  return std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
}

}  // namespace

PlayerState exp3_init(std::size_t num_arms, double eta) {
  check_arms(num_arms);
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("learning rate must be positive and finite, got " + format_real(eta));
  }
  PlayerState state;
  state.weights.assign(num_arms, 1.0);
  state.eta = eta;
  return state;
}

double exp3_default_eta(std::size_t num_arms, double horizon) {
  const double k = static_cast<double>(num_arms);
  return std::sqrt(2.0 * std::log(k) / (horizon * k));
}

double exp3_lower_bound_eta(Round horizon, double alpha, double beta) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in [1/2, 1), got " + format_real(alpha));
  }
  if (!(beta > 0.0)) {
    throw ParameterError("beta must be positive, got " + format_real(beta));
  }
  if (horizon < 1) {
    throw ParameterError("horizon must be >= 1, got " + std::to_string(horizon));
  }
  return beta * std::pow(static_cast<double>(horizon), -alpha);
}

PlayerState exprb_init(std::size_t num_arms, Round horizon, double phi) {
  check_arms(num_arms);
  if (horizon < 1) {
    throw ParameterError("horizon must be >= 1, got " + std::to_string(horizon));
  }
  if (!(phi >= 0.0)) {
    throw ParameterError("attack budget phi must be >= 0, got " + format_real(phi));
  }
  const double k = static_cast<double>(num_arms);
  const double T = static_cast<double>(horizon);
  PlayerState state = exp3_init(num_arms, std::sqrt(std::log(k) / (T * k)));
  state.phi = phi;
  state.gamma = std::min(0.5, std::sqrt(k * std::log(k) / T) + k * phi * std::log(T) / T);
  return state;
}

void fill_policy(const PlayerState& state, std::span<double> out) {
  const double sum = weight_sum(state);
  for (std::size_t a = 0; a < state.weights.size(); ++a) {
    out[a] = arm_probability(state, a, sum);
  }
}

PolicyDistribution policy(const PlayerState& state) {
  PolicyDistribution dist;
  dist.probs.resize(state.weights.size());
  fill_policy(state, dist.probs);
  return dist;
}

void update(PlayerState& state, ArmId chosen, LossValue observed_loss) {
  if (chosen.index >= state.weights.size()) {
    throw DomainError("arm " + std::to_string(chosen.index) + " outside [0, " +
                      std::to_string(state.weights.size()) + ")");
  }
  const double p = arm_probability(state, chosen.index, weight_sum(state));
  double& w = state.weights[chosen.index];
  w = std::max(w * std::exp(-state.eta * observed_loss.value() / p), kWeightFloor);
  ++state.round;

  const double top = *std::max_element(state.weights.begin(), state.weights.end());
  if (top < kRescaleBelow) {
    const int exponent = std::ilogb(top);
    for (double& x : state.weights) x = std::ldexp(x, -exponent);
  }
}

void fill_policy(const FixedPolicy& player, std::span<double> out) {
  std::copy(player.probs.begin(), player.probs.end(), out.begin());
}

ArmId select_arm(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (!(probs[a] > 0.0)) continue;
    last_positive = a;
    cumulative += probs[a];
    if (u <= cumulative) return ArmId{a};
  }
  // Rounding left the total just under u.
  return ArmId{last_positive};
}

ArmId sample_arm(std::span<const double> probs, Rng& rng) {
  return select_arm(probs, rng.uniform());
}

double resolve_eta(const EtaSchedule& schedule, std::size_t num_arms, Round horizon) {
  if (std::holds_alternative<AutoEta>(schedule)) {
    return exp3_default_eta(num_arms, static_cast<double>(horizon));
  }
  if (const auto* fixed = std::get_if<FixedEta>(&schedule)) {
    if (!(fixed->eta > 0.0)) {
      throw ParameterError("learning rate must be positive, got " + format_real(fixed->eta));
    }
    return fixed->eta;
  }
  const auto& power = std::get<PowerEta>(schedule);
  return exp3_lower_bound_eta(horizon, power.alpha, power.beta);
}

Player make_player(const PlayerSpec& spec, std::size_t num_arms, Round horizon) {
  if (const auto* exp3 = std::get_if<Exp3Spec>(&spec)) {
    return exp3_init(num_arms, resolve_eta(exp3->eta, num_arms, horizon));
  }
  if (const auto* robust = std::get_if<ExpRbSpec>(&spec)) {
    const double phi = std::pow(static_cast<double>(horizon), robust->phi_exponent);
    return exprb_init(num_arms, horizon, phi);
  }
  const auto& fixed = std::get<FixedPolicySpec>(spec);
  if (fixed.probs.size() != num_arms) {
    throw ParameterError("fixed policy has " + std::to_string(fixed.probs.size()) +
                         " entries for K = " + std::to_string(num_arms));
  }
  double total = 0.0;
  for (double p : fixed.probs) {
    if (!(p >= 0.0)) throw ParameterError("fixed policy has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kLossTolerance) {
    throw ParameterError("fixed policy sums to " + format_real(total) + ", not 1");
  }
  return FixedPolicy{fixed.probs};
}

double exp3_regret_constant(const EtaSchedule& schedule, std::size_t num_arms) {
  const double k = static_cast<double>(num_arms);
  if (std::holds_alternative<AutoEta>(schedule)) {
    return std::sqrt(2.0 * k * std::log(k));
  }
  if (const auto* power = std::get_if<PowerEta>(&schedule)) {
    return std::log(k) / power->beta + power->beta * k / 2.0;
  }
  throw UsageError("a fixed learning rate has no horizon-free regret constant; supply M");
}

}  // namespace advbandit
