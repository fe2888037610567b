#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "advbandit/core.hpp"

namespace advbandit {

/// Malformed environment file. Row and column are 1-based; 0 means the whole
/// file (e.g. empty input).
class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}

  [[nodiscard]] std::size_t row() const noexcept { return row_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

enum class EnvKind { constant, example1, table };

/// A non-adaptive loss sequence L_1..L_T over K arms. The value at (t, a)
/// never depends on what the player did; lookups are pure.
class LossMatrix {
 public:
  [[nodiscard]] std::size_t num_arms() const noexcept { return num_arms_; }
  [[nodiscard]] Round horizon() const noexcept { return horizon_; }
  [[nodiscard]] EnvKind kind() const noexcept { return kind_; }

  /// Throws DomainError when t is outside [1, T] or a is outside [0, K).
  [[nodiscard]] LossValue loss(Round t, ArmId a) const;

  /// Adapter for compute_regret.
  [[nodiscard]] LossFunction as_function() const;

 private:
  friend LossMatrix make_constant_env(std::span<const double>, Round);
  friend LossMatrix make_example1_env(Round);
  friend LossMatrix make_table_env(Round, std::size_t, std::vector<double>);

  LossMatrix(EnvKind kind, std::size_t num_arms, Round horizon, std::vector<double> values)
      : kind_(kind), num_arms_(num_arms), horizon_(horizon), values_(std::move(values)) {}

  EnvKind kind_;
  std::size_t num_arms_;
  Round horizon_;
  // constant / example1: one value per arm. table: row-major T x K.
  std::vector<double> values_;
};

/// L_t(a) = losses[a] for every t.
LossMatrix make_constant_env(std::span<const double> losses, Round horizon);

/// Two arms: L_t(0) = 1 - sqrt(T)/T and L_t(1) = 1. Arm 0 is best in
/// hindsight, yet always playing arm 1 costs only sqrt(T) regret.
LossMatrix make_example1_env(Round horizon);

/// Dense table, row-major (row t-1 holds L_t).
LossMatrix make_table_env(Round horizon, std::size_t num_arms, std::vector<double> values);

inline LossValue env_loss(const LossMatrix& env, Round t, ArmId a) { return env.loss(t, a); }

/// Regret of a trace against an environment (clean mode) or against a
/// materialized template (template mode).
double compute_regret(std::span<const RoundRecord> records, const LossMatrix& losses,
                      RegretMode mode);

/// T rows by K comma-separated columns, one row per round.
LossMatrix parse_env_csv(std::istream& in, const std::string& source_name = "<stream>");
LossMatrix load_env_csv(const std::filesystem::path& path);

}  // namespace advbandit
