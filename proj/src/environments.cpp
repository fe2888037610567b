#include "advbandit/environments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace advbandit {

LossValue LossMatrix::loss(Round t, ArmId a) const {
  if (t < 1 || t > horizon_) {
    throw DomainError("round " + std::to_string(t) + " outside [1, " + std::to_string(horizon_) +
                      "]");
  }
  if (a.index >= num_arms_) {
    throw DomainError("arm " + std::to_string(a.index) + " outside [0, " +
                      std::to_string(num_arms_) + ")");
  }
  if (kind_ == EnvKind::table) {
    return LossValue(values_[static_cast<std::size_t>(t - 1) * num_arms_ + a.index]);
  }
  return LossValue(values_[a.index]);
}

LossFunction LossMatrix::as_function() const {
  return [this](Round t, ArmId a) { return loss(t, a).value(); };
}

LossMatrix make_constant_env(std::span<const double> losses, Round horizon) {
  if (losses.size() < 2) {
    throw ParameterError("environment needs at least 2 arms, got " +
                         std::to_string(losses.size()));
  }
  if (horizon < 1) {
    throw DomainError("horizon must be >= 1, got " + std::to_string(horizon));
  }
  std::vector<double> values;
  values.reserve(losses.size());
  for (double x : losses) values.push_back(validate_loss(x).value());
  const std::size_t num_arms = values.size();
  return LossMatrix(EnvKind::constant, num_arms, horizon, std::move(values));
}

LossMatrix make_example1_env(Round horizon) {
  if (horizon < 1) {
    throw DomainError("horizon must be >= 1, got " + std::to_string(horizon));
  }
  const double T = static_cast<double>(horizon);
  std::vector<double> values{1.0 - std::sqrt(T) / T, 1.0};
  return LossMatrix(EnvKind::example1, 2, horizon, std::move(values));
}

LossMatrix make_table_env(Round horizon, std::size_t num_arms, std::vector<double> values) {
  if (horizon < 1) {
    throw DomainError("horizon must be >= 1, got " + std::to_string(horizon));
  }
  if (num_arms < 2) {
    throw ParameterError("environment needs at least 2 arms, got " + std::to_string(num_arms));
  }
  if (values.size() != static_cast<std::size_t>(horizon) * num_arms) {
    throw ParameterError("table has " + std::to_string(values.size()) + " entries, expected " +
                         std::to_string(horizon) + " x " + std::to_string(num_arms));
  }
  for (double x : values) validate_loss(x);
  return LossMatrix(EnvKind::table, num_arms, horizon, std::move(values));
}

double compute_regret(std::span<const RoundRecord> records, const LossMatrix& losses,
                      RegretMode mode) {
  return compute_regret(records, losses.num_arms(), losses.as_function(), mode);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string location(const std::string& source, std::size_t row, std::size_t column) {
  return source + ":" + std::to_string(row) + ":" + std::to_string(column);
}

}  // namespace

LossMatrix parse_env_csv(std::istream& in, const std::string& source_name) {
  std::vector<double> values;
  std::size_t num_arms = 0;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view content = trim(line);
    if (content.empty()) {
      throw IngestionError(location(source_name, row, 0) + ": blank row", row, 0);
    }
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
      ++column;
      const auto comma = content.find(',', start);
      const std::string_view cell =
          trim(content.substr(start, comma == std::string_view::npos ? comma : comma - start));
      double parsed = 0.0;
      const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
      if (cell.empty() || result.ec != std::errc{} || result.ptr != cell.data() + cell.size()) {
        throw IngestionError(location(source_name, row, column) + ": cannot parse '" +
                                 std::string(cell) + "' as a number",
                             row, column);
      }
      if (!(parsed >= 0.0 && parsed <= 1.0)) {
        throw IngestionError(location(source_name, row, column) + ": loss " +
                                 std::string(cell) + " outside [0, 1]",
                             row, column);
      }
      values.push_back(parsed);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row == 1) {
      num_arms = column;
      if (num_arms < 2) {
        throw IngestionError(location(source_name, row, column) +
                                 ": environment needs at least 2 columns",
                             row, column);
      }
    } else if (column != num_arms) {
      throw IngestionError(location(source_name, row, column) + ": row has " +
                               std::to_string(column) + " columns, expected " +
                               std::to_string(num_arms),
                           row, column);
    }
  }
  if (row == 0) {
    throw IngestionError(source_name + ": empty environment file", 0, 0);
  }
  return make_table_env(static_cast<Round>(row), num_arms, std::move(values));
}

LossMatrix load_env_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IngestionError(path.string() + ": cannot open environment file", 0, 0);
  }
  return parse_env_csv(in, path.string());
}

}  // namespace advbandit
