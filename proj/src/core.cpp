#include "advbandit/core.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace advbandit {

LossValue::LossValue(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg.precision(std::numeric_limits<double>::max_digits10);
    msg << "loss value " << value << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

LossValue validate_loss(double x) { return LossValue(x); }

RoundRecord make_round_record(Round t, ArmId arm, LossValue clean, LossValue perturbed,
                              std::vector<double> policy) {
  RoundRecord record;
  record.t = t;
  record.arm = arm;
  record.clean_loss = clean.value();
  record.perturbed_loss = perturbed.value();
  record.cost = std::abs(perturbed.value() - clean.value());
  record.policy = std::move(policy);
  return record;
}

namespace {

void check_contiguous(std::span<const RoundRecord> records, std::size_t num_arms) {
  if (records.empty()) {
    throw MalformedTraceError("trace is empty");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto expected = static_cast<Round>(i + 1);
    if (records[i].t != expected) {
      throw MalformedTraceError("trace round at position " + std::to_string(i) + " is " +
                                std::to_string(records[i].t) + ", expected " +
                                std::to_string(expected));
    }
    if (records[i].arm.index >= num_arms) {
      throw MalformedTraceError("trace round " + std::to_string(expected) + " selects arm " +
                                std::to_string(records[i].arm.index) + " but K = " +
                                std::to_string(num_arms));
    }
  }
}

}  // namespace

TrialSummary summarize_trace(std::span<const RoundRecord> records, std::size_t num_arms) {
  check_contiguous(records, num_arms);
  TrialSummary summary;
  summary.horizon = static_cast<Round>(records.size());
  summary.selections.assign(num_arms, 0);
  for (const auto& record : records) {
    ++summary.selections[record.arm.index];
    summary.total_cost += record.cost;
  }
  return summary;
}

double compute_regret(std::span<const RoundRecord> records, std::size_t num_arms,
                      const LossFunction& losses, RegretMode mode) {
  check_contiguous(records, num_arms);
  std::vector<double> totals(num_arms, 0.0);
  double incurred = 0.0;
  for (const auto& record : records) {
    for (std::size_t a = 0; a < num_arms; ++a) {
      totals[a] += losses(record.t, ArmId{a});
    }
    const double chosen = losses(record.t, record.arm);
    const double recorded =
        mode == RegretMode::clean ? record.clean_loss : record.perturbed_loss;
    if (std::abs(chosen - recorded) > kLossTolerance) {
      throw MalformedTraceError("round " + std::to_string(record.t) + ": recorded loss " +
                                format_real(recorded) + " disagrees with matrix value " +
                                format_real(chosen));
    }
    incurred += chosen;
  }
  return incurred - *std::min_element(totals.begin(), totals.end());
}

std::string format_real(double value) {
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> records,
                     std::size_t num_arms, bool include_policy) {
  out << "t,arm,clean_loss,perturbed_loss,cost";
  if (include_policy) {
    for (std::size_t a = 0; a < num_arms; ++a) out << ",pi_" << a;
  }
  out << '\n';
  for (const auto& record : records) {
    out << record.t << ',' << record.arm.index << ',' << format_real(record.clean_loss) << ','
        << format_real(record.perturbed_loss) << ',' << format_real(record.cost);
    if (include_policy) {
      if (record.policy.size() != num_arms) {
        throw MalformedTraceError("round " + std::to_string(record.t) +
                                  " has no recorded policy");
      }
      for (double p : record.policy) out << ',' << format_real(p);
    }
    out << '\n';
  }
}

}  // namespace advbandit
