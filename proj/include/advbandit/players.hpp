#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "advbandit/core.hpp"

namespace advbandit {

/// Exponential-weights internals shared by Exp3 (gamma == 0) and the robust
/// variant (gamma > 0, phi = assumed corruption budget).
struct PlayerState {
  std::vector<double> weights;
  double eta = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  Round round = 1;
};

struct PolicyDistribution {
  std::vector<double> probs;
};

/// A player that ignores feedback and always samples from the same
/// distribution. Useful as a control in harness tests.
struct FixedPolicy {
  std::vector<double> probs;
};

PlayerState exp3_init(std::size_t num_arms, double eta);

/// sqrt(2 ln K / (T K)): minimizer of (1/eta) ln K + (eta/2) T K, giving
/// R_T <= sqrt(2 T K ln K). T is real-valued so the formula can be probed
/// off the integers.
double exp3_default_eta(std::size_t num_arms, double horizon);

/// beta * T^-alpha with alpha in [1/2, 1).
double exp3_lower_bound_eta(Round horizon, double alpha, double beta);

/// Robust variant: eta = sqrt(ln K / (T K)) and uniform exploration
///   gamma = min(1/2, sqrt(K ln K / T) + K phi ln T / T),
/// so the exploration floor grows linearly with the assumed budget.
PlayerState exprb_init(std::size_t num_arms, Round horizon, double phi);

/// pi = (1 - gamma) w / |w|_1 + gamma / K.
PolicyDistribution policy(const PlayerState& state);
void fill_policy(const PlayerState& state, std::span<double> out);

/// Importance-weighted exponential update of the chosen arm:
///   w[chosen] *= exp(-eta * loss / pi_t(chosen)),
/// with pi_t recomputed from the state exactly as policy() does. Other
/// weights are untouched unless the whole vector is rescaled by a power of
/// two to keep it away from underflow, which leaves policy() bit-identical.
void update(PlayerState& state, ArmId chosen, LossValue observed_loss);

void fill_policy(const FixedPolicy& player, std::span<double> out);
inline void update(FixedPolicy&, ArmId, LossValue) {}

/// Deterministic generator: mt19937_64 with 53-bit uniform doubles, so draws
/// do not depend on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Arm at quantile u of probs, scanning in index order. u equal to a cumulative sum
/// selects the lower-indexed arm; zero-probability arms are never returned.
ArmId select_arm(std::span<const double> probs, double u);
ArmId sample_arm(std::span<const double> probs, Rng& rng);
inline ArmId sample_arm(const PolicyDistribution& dist, Rng& rng) {
  return sample_arm(dist.probs, rng);
}

// Player selection as it appears in experiment configs.

struct AutoEta {};
struct FixedEta {
  double eta = 0.0;
};
/// eta = beta * T^-alpha.
struct PowerEta {
  double beta = 1.0;
  double alpha = 0.5;
};
using EtaSchedule = std::variant<AutoEta, FixedEta, PowerEta>;

struct Exp3Spec {
  EtaSchedule eta;
};
/// phi = T^phi_exponent.
struct ExpRbSpec {
  double phi_exponent = 0.5;
};
struct FixedPolicySpec {
  std::vector<double> probs;
};
using PlayerSpec = std::variant<Exp3Spec, ExpRbSpec, FixedPolicySpec>;

using Player = std::variant<PlayerState, FixedPolicy>;

double resolve_eta(const EtaSchedule& schedule, std::size_t num_arms, Round horizon);

/// Constructs a fresh player for a K-arm, T-round run.
Player make_player(const PlayerSpec& spec, std::size_t num_arms, Round horizon);

/// Constant M in R_T <= M T^alpha for an Exp3 schedule: ln K / beta + beta K / 2
/// for eta = beta T^-alpha (sqrt(2 K ln K) for the default eta).
double exp3_regret_constant(const EtaSchedule& schedule, std::size_t num_arms);

}  // namespace advbandit
