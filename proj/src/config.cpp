#include "advbandit/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace advbandit {

namespace {

using nlohmann::json;

void reject_unknown(const json& section, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : section.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(path + "." + item.key(), "unknown key");
  }
}

const json& require(const json& section, const std::string& path, const char* key) {
  if (!section.contains(key)) throw ConfigError(path + "." + key, "required key is missing");
  return section.at(key);
}

const json& require_object(const json& doc, const char* key) {
  const json& section = require(doc, "config", key);
  if (!section.is_object()) throw ConfigError(key, "must be an object");
  return section;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "must be a number");
  return value.get<double>();
}

std::int64_t as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigError(path, "must be an integer");
  return value.get<std::int64_t>();
}

std::vector<double> as_number_list(const json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigError(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

EnvSpec parse_environment(const json& section, const std::filesystem::path& base_dir) {
  const json& kind = require(section, "environment", "kind");
  if (kind == "constant") {
    reject_unknown(section, "environment", {"kind", "losses"});
    auto losses = as_number_list(require(section, "environment", "losses"), "environment.losses");
    if (losses.size() < 2) throw ConfigError("environment.losses", "needs at least 2 arms");
    for (std::size_t a = 0; a < losses.size(); ++a) {
      if (!(losses[a] >= 0.0 && losses[a] <= 1.0)) {
        throw ConfigError("environment.losses[" + std::to_string(a) + "]",
                          "loss " + format_real(losses[a]) + " outside [0, 1]");
      }
    }
    return ConstantEnvSpec{std::move(losses)};
  }
  if (kind == "example1") {
    reject_unknown(section, "environment", {"kind"});
    return Example1EnvSpec{};
  }
  if (kind == "table") {
    reject_unknown(section, "environment", {"kind", "path"});
    const json& path = require(section, "environment", "path");
    if (!path.is_string()) throw ConfigError("environment.path", "must be a string");
    std::filesystem::path file = path.get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    try {
      return TableEnvSpec{load_env_csv(file), file.string()};
    } catch (const IngestionError& e) {
      throw ConfigError("environment.path", e.what());
    }
  }
  throw ConfigError("environment.kind", "must be one of constant, example1, table");
}

PlayerSpec parse_player(const json& section) {
  const json& name = require(section, "player", "name");
  if (name == "exp3") {
    reject_unknown(section, "player", {"name", "eta"});
    if (!section.contains("eta") || section.at("eta") == "auto") return Exp3Spec{AutoEta{}};
    const json& eta = section.at("eta");
    if (eta.is_number()) {
      const double value = eta.get<double>();
      if (!(value > 0.0)) throw ConfigError("player.eta", "must be positive");
      return Exp3Spec{FixedEta{value}};
    }
    if (eta.is_object()) {
      reject_unknown(eta, "player.eta", {"beta", "alpha"});
      PowerEta power;
      power.beta = as_number(require(eta, "player.eta", "beta"), "player.eta.beta");
      if (eta.contains("alpha")) power.alpha = as_number(eta.at("alpha"), "player.eta.alpha");
      if (!(power.beta > 0.0)) throw ConfigError("player.eta.beta", "must be positive");
      if (!(power.alpha >= 0.5 && power.alpha < 1.0)) {
        throw ConfigError("player.eta.alpha", "must lie in [1/2, 1)");
      }
      return Exp3Spec{power};
    }
    throw ConfigError("player.eta", "must be \"auto\", a number, or {beta, alpha}");
  }
  if (name == "exprb") {
    reject_unknown(section, "player", {"name", "phi_exponent"});
    const double exponent =
        as_number(require(section, "player", "phi_exponent"), "player.phi_exponent");
    if (!(exponent >= 0.0 && exponent <= 1.0)) {
      throw ConfigError("player.phi_exponent", "must lie in [0, 1]");
    }
    return ExpRbSpec{exponent};
  }
  if (name == "fixed") {
    reject_unknown(section, "player", {"name", "probs"});
    return FixedPolicySpec{as_number_list(require(section, "player", "probs"), "player.probs")};
  }
  throw ConfigError("player.name", "must be one of exp3, exprb, fixed");
}

AttackerConfig parse_attacker(const json& section) {
  reject_unknown(section, "attacker", {"strategy", "target_arm", "alpha", "epsilon"});
  AttackerConfig config;
  const json& strategy = require(section, "attacker", "strategy");
  if (strategy == "none") {
    config.strategy = Strategy::none;
  } else if (strategy == "easy") {
    config.strategy = Strategy::easy;
  } else if (strategy == "general") {
    config.strategy = Strategy::general;
  } else {
    throw ConfigError("attacker.strategy", "must be one of none, easy, general");
  }
  const std::int64_t target =
      as_integer(require(section, "attacker", "target_arm"), "attacker.target_arm");
  if (target < 0) throw ConfigError("attacker.target_arm", "must be >= 0");
  config.target = ArmId{static_cast<std::size_t>(target)};

  if (section.contains("alpha")) config.alpha = as_number(section.at("alpha"), "attacker.alpha");
  if (!(config.alpha >= 0.5 && config.alpha < 1.0)) {
    throw ConfigError("attacker.alpha", "must lie in [1/2, 1), got " + format_real(config.alpha));
  }

  if (section.contains("epsilon")) {
    const json& eps = section.at("epsilon");
    config.epsilon = eps == "optimal" ? optimal_epsilon(config.alpha)
                                      : as_number(eps, "attacker.epsilon");
  } else if (config.strategy == Strategy::general) {
    throw ConfigError("attacker.epsilon", "required for the general strategy");
  }
  if (config.strategy == Strategy::general &&
      !(config.epsilon >= 0.0 && config.epsilon < 1.0 - config.alpha)) {
    throw ConfigError("attacker.epsilon", "must satisfy 0 <= epsilon < 1 - alpha (alpha = " +
                                              format_real(config.alpha) + "), got " +
                                              format_real(config.epsilon));
  }
  return config;
}

void parse_experiment(const json& section, ExperimentConfig& config) {
  reject_unknown(section, "experiment", {"horizons", "trials", "base_seed", "threads"});
  const json& horizons = require(section, "experiment", "horizons");
  if (!horizons.is_array() || horizons.empty()) {
    throw ConfigError("experiment.horizons", "must be a non-empty array of integers");
  }
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const std::string path = "experiment.horizons[" + std::to_string(i) + "]";
    const std::int64_t T = as_integer(horizons[i], path);
    if (T < 1) throw ConfigError(path, "must be >= 1");
    if (!config.horizons.empty() && T <= config.horizons.back()) {
      throw ConfigError(path, "horizons must be strictly increasing");
    }
    config.horizons.push_back(T);
  }
  if (section.contains("trials")) {
    const std::int64_t trials = as_integer(section.at("trials"), "experiment.trials");
    if (trials < 1) throw ConfigError("experiment.trials", "must be >= 1");
    config.trials = static_cast<int>(trials);
  }
  if (section.contains("base_seed")) {
    const std::int64_t seed = as_integer(section.at("base_seed"), "experiment.base_seed");
    if (seed < 0) throw ConfigError("experiment.base_seed", "must be >= 0");
    config.base_seed = static_cast<std::uint64_t>(seed);
  }
  if (section.contains("threads")) {
    const std::int64_t threads = as_integer(section.at("threads"), "experiment.threads");
    if (threads < 0) throw ConfigError("experiment.threads", "must be >= 0");
    config.threads = static_cast<unsigned>(threads);
  }
}

VerifyOptions parse_verify(const json& section) {
  reject_unknown(section, "verify", {"rho", "M"});
  VerifyOptions options;
  if (section.contains("rho")) {
    options.rho = as_number(section.at("rho"), "verify.rho");
    if (!(*options.rho > 0.0 && *options.rho <= 1.0)) {
      throw ConfigError("verify.rho", "must lie in (0, 1]");
    }
  }
  if (section.contains("M") && section.at("M") != "auto") {
    options.bound_constant = as_number(section.at("M"), "verify.M");
    if (!(*options.bound_constant > 0.0)) throw ConfigError("verify.M", "must be positive");
  }
  return options;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(doc, "config", {"environment", "player", "attacker", "experiment", "verify"});

  RunConfig config;
  config.experiment.environment = parse_environment(require_object(doc, "environment"), base_dir);
  config.experiment.player = parse_player(require_object(doc, "player"));
  config.experiment.attacker = parse_attacker(require_object(doc, "attacker"));
  parse_experiment(require_object(doc, "experiment"), config.experiment);
  if (doc.contains("verify")) config.verify = parse_verify(require_object(doc, "verify"));
  config.echo = doc.dump();

  // Cross-section consistency.
  const std::size_t k = num_arms(config.experiment.environment);
  if (config.experiment.attacker.target.index >= k) {
    throw ConfigError("attacker.target_arm",
                      "must be < K = " + std::to_string(k) + " (environment arm count)");
  }
  if (const auto* fixed = std::get_if<FixedPolicySpec>(&config.experiment.player);
      fixed != nullptr && fixed->probs.size() != k) {
    throw ConfigError("player.probs", "needs one entry per arm (K = " + std::to_string(k) + ")");
  }
  try {
    validate(config.experiment);
  } catch (const ParameterError& e) {
    throw ConfigError("config", e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace advbandit
