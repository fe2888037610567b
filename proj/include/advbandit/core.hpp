#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace advbandit {

// Error taxonomy shared by every module.

/// A value lies outside its mathematical domain (losses outside [0, 1],
/// rounds outside [1, T], arms outside [0, K)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tunable (learning rate, regret exponent, budget...) is out of range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MalformedTraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checker was applied to a run it does not describe.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rounds are 1-based: t = 1, ..., T.
using Round = std::int64_t;

struct ArmId {
  std::size_t index = 0;

  friend constexpr auto operator<=>(const ArmId&, const ArmId&) = default;
};

inline constexpr double kLossTolerance = 1e-9;

/// A loss in [0, 1]. Construction validates the bound.
class LossValue {
 public:
  constexpr LossValue() = default;
  explicit LossValue(double value);

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(const LossValue&, const LossValue&) = default;

 private:
  double value_ = 0.0;
};

LossValue validate_loss(double x);

/// One round of play: which arm was pulled, what the environment produced,
/// what the player was shown, and the perturbation magnitude.
struct RoundRecord {
  Round t = 0;
  ArmId arm;
  double clean_loss = 0.0;
  double perturbed_loss = 0.0;
  double cost = 0.0;
  std::vector<double> policy;  // empty unless policy recording was requested
};

RoundRecord make_round_record(Round t, ArmId arm, LossValue clean, LossValue perturbed,
                              std::vector<double> policy = {});

struct TrialSummary {
  Round horizon = 0;
  std::vector<std::int64_t> selections;
  double total_cost = 0.0;
  double regret_template = 0.0;
  double regret_clean = 0.0;
  std::uint64_t seed = 0;
};

/// Counts selections and sums per-round costs. Regrets are left at zero;
/// fill them with compute_regret.
TrialSummary summarize_trace(std::span<const RoundRecord> records, std::size_t num_arms);

/// Loss oracle used for regret evaluation: (t, arm) -> loss.
using LossFunction = std::function<double(Round, ArmId)>;

enum class RegretMode { clean, template_losses };

/// Realized regret of a trace against the matrix M:
///   sum_t M_t(arm_t) - min_a sum_t M_t(a).
/// The mode selects which recorded loss (clean or perturbed) must agree with
/// M on the chosen arm; a disagreement beyond kLossTolerance means the trace
/// was not produced against this matrix and raises MalformedTraceError.
double compute_regret(std::span<const RoundRecord> records, std::size_t num_arms,
                      const LossFunction& losses, RegretMode mode);

/// Shortest decimal string that round-trips to the same double.
std::string format_real(double value);

/// Header `t,arm,clean_loss,perturbed_loss,cost` plus `pi_0..pi_{K-1}` when
/// include_policy is set. LF line endings.
void write_trace_csv(std::ostream& out, std::span<const RoundRecord> records,
                     std::size_t num_arms, bool include_policy);

}  // namespace advbandit
