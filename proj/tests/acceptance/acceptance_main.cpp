// Acceptance suite: reproduces the headline experiments and prints one
// PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "advbandit/bounds.hpp"
#include "advbandit/harness.hpp"

using namespace advbandit;

namespace {

// Tolerances.
constexpr int kTrials = 10;
constexpr double kEasyFractionTolerance = 0.05;
constexpr double kEasyCostTolerance = 0.05;
constexpr double kSublinearSlope = 0.95;
constexpr double kGeneralVsEasyTolerance = 0.02;
constexpr double kSweepCostTarget = 0.11;
constexpr double kSweepCostTolerance = 0.05;
constexpr double kNoAttackFractionCeiling = 0.05;
constexpr int kEquivalenceConfigs = 120;
constexpr double kLowerBoundExponentFloor = 0.4;
constexpr double kExpRbFractionFloor = 0.60;
constexpr double kRuntimeBudgetSeconds = 60.0;

// Reference values.
const std::vector<Round> kHorizons{1000, 10000, 100000, 1000000};
const std::vector<double> kEasyFractions{0.815, 0.913, 0.963, 0.985};
const std::vector<double> kEasyCosts{0.19, 0.09, 0.04, 0.01};

// Victim used for every Exp3 experiment: eta = 0.25 / sqrt(T).
const PlayerSpec kVictim = Exp3Spec{PowerEta{0.25, 0.5}};
const std::vector<double> kEasyEnv{0.5, 0.0};
const std::vector<double> kHardEnv{1.0, 0.0};

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

AggregateSummary run(const std::vector<double>& env, const PlayerSpec& player, Strategy strategy,
                     double epsilon, std::vector<Round> horizons, std::size_t target = 0) {
  ExperimentConfig cfg;
  cfg.environment = ConstantEnvSpec{env};
  cfg.player = player;
  cfg.attacker = AttackerConfig{ArmId{target}, 0.5, epsilon, strategy};
  cfg.horizons = std::move(horizons);
  cfg.trials = kTrials;
  return run_experiment(cfg);
}

double slope_of(const AggregateSummary& s, bool cost) {
  std::vector<LogLogPoint> points;
  for (const auto& h : s.horizons) {
    points.push_back({static_cast<double>(h.horizon),
                      cost ? h.total_cost.mean : h.non_target_selections.mean});
  }
  return loglog_slope(points);
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();

  // Easy attack against Exp3 on losses (0.5, 0), target arm 0.
  const auto easy_started = std::chrono::steady_clock::now();
  const auto easy = run(kEasyEnv, kVictim, Strategy::easy, 0.0, kHorizons);
  const double easy_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - easy_started).count();
  {
    bool pass = easy_seconds < kRuntimeBudgetSeconds;
    std::string detail;
    for (std::size_t i = 0; i < kHorizons.size(); ++i) {
      const double f = easy.horizons[i].target_fraction();
      pass = pass && std::abs(f - kEasyFractions[i]) <= kEasyFractionTolerance;
      detail += "T=" + std::to_string(kHorizons[i]) + " " + fixed(f) + " (ref " +
                fixed(kEasyFractions[i], 3) + ") ";
    }
    detail += "| tol " + fixed(kEasyFractionTolerance, 2) + ", runtime " + fixed(easy_seconds, 1) +
              "s < " + fixed(kRuntimeBudgetSeconds, 0) + "s";
    report(1, "easy attack target fraction", pass, detail);
  }
  {
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < kHorizons.size(); ++i) {
      const double c = easy.horizons[i].per_round_cost();
      pass = pass && std::abs(c - kEasyCosts[i]) <= kEasyCostTolerance;
      if (i > 0) pass = pass && c < easy.horizons[i - 1].per_round_cost();
      detail += "T=" + std::to_string(kHorizons[i]) + " " + fixed(c) + " (ref " +
                fixed(kEasyCosts[i], 2) + ") ";
    }
    detail += "| tol " + fixed(kEasyCostTolerance, 2) + ", strictly decreasing";
    report(2, "easy attack per-round cost", pass, detail);
  }

  // General attack, epsilon = 0.25, on losses (1, 0).
  const auto hard_general = run(kHardEnv, kVictim, Strategy::general, 0.25, kHorizons);
  {
    const double easy_miss = slope_of(easy, false);
    const double easy_cost = slope_of(easy, true);
    const double general_miss = slope_of(hard_general, false);
    const double general_cost = slope_of(hard_general, true);
    const bool pass = easy_miss < kSublinearSlope && easy_cost < kSublinearSlope &&
                      general_miss < kSublinearSlope && general_cost < kSublinearSlope;
    report(3, "sublinear non-target count and cost", pass,
           "easy " + fixed(easy_miss, 3) + "/" + fixed(easy_cost, 3) + ", general " +
               fixed(general_miss, 3) + "/" + fixed(general_cost, 3) + " (slopes < " +
               fixed(kSublinearSlope, 2) + ")");
  }

  {
    const auto mild_general = run(kEasyEnv, kVictim, Strategy::general, 0.25, kHorizons);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < kHorizons.size(); ++i) {
      const double gap =
          mild_general.horizons[i].target_fraction() - easy.horizons[i].target_fraction();
      pass = pass && std::abs(gap) <= kGeneralVsEasyTolerance;
      detail += "T=" + std::to_string(kHorizons[i]) + " " +
                fixed(mild_general.horizons[i].target_fraction()) + " (gap " + fixed(gap) + ") ";
    }
    detail += "| tol " + fixed(kGeneralVsEasyTolerance, 2);
    report(4, "general attack matches easy attack", pass, detail);
  }

  {
    const Round T = 1000000;
    const auto low = run(kHardEnv, kVictim, Strategy::general, 0.1, {T});
    const auto& mid = hard_general.at(T);
    const auto high = run(kHardEnv, kVictim, Strategy::general, 0.4, {T});
    const double f1 = low.at(T).target_fraction();
    const double f2 = mid.target_fraction();
    const double f3 = high.at(T).target_fraction();
    const double c1 = low.at(T).total_cost.mean;
    const double c2 = mid.total_cost.mean;
    const double c3 = high.at(T).total_cost.mean;
    const bool pass = f1 < f2 && f2 < f3 && c2 < c1 && c2 < c3 &&
                      std::abs(mid.per_round_cost() - kSweepCostTarget) <= kSweepCostTolerance;
    report(5, "epsilon sweep at T=1e6", pass,
           "fraction " + fixed(f1) + " < " + fixed(f2) + " < " + fixed(f3) +
               "; per-round cost " + fixed(c1 / T) + ", " + fixed(c2 / T) + ", " +
               fixed(c3 / T) + " (min at 0.25, ref " + fixed(kSweepCostTarget, 2) + " tol " +
               fixed(kSweepCostTolerance, 2) + ")");
  }

  {
    const Round T = 1000000;
    const double mild = run(kEasyEnv, kVictim, Strategy::none, 0.0, {T}).at(T).target_fraction();
    const double hard = run(kHardEnv, kVictim, Strategy::none, 0.0, {T}).at(T).target_fraction();
    report(6, "no-attack baselines", mild <= kNoAttackFractionCeiling &&
                                         hard <= kNoAttackFractionCeiling,
           "target fraction " + fixed(mild) + " and " + fixed(hard) + " (<= " +
               fixed(kNoAttackFractionCeiling, 2) + ")");
  }

  {
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int identical = 0;
    int general_runs = 0;
    for (int i = 0; i < kEquivalenceConfigs; ++i) {
      const std::size_t k = 2 + gen() % 3;
      const Round T = 1 + static_cast<Round>(gen() % 500);
      std::vector<double> values(static_cast<std::size_t>(T) * k);
      for (double& v : values) v = unit(gen);
      const auto env = make_table_env(T, k, std::move(values));
      AttackerConfig cfg{ArmId{gen() % k}, 0.5 + 0.45 * unit(gen), 0.0, Strategy::easy};
      if (i % 2 == 1) {
        cfg.strategy = Strategy::general;
        cfg.epsilon = (1.0 - cfg.alpha) * 0.95 * unit(gen);
        ++general_runs;
      }
      PlayerSpec player = kVictim;
      if (i % 3 == 1) player = Exp3Spec{FixedEta{0.01 + unit(gen)}};
      if (i % 3 == 2) player = ExpRbSpec{unit(gen)};
      identical += equivalence_check(env, cfg, player, T, gen()) ? 1 : 0;
    }
    report(7, "attack equivalence", identical == kEquivalenceConfigs,
           std::to_string(identical) + "/" + std::to_string(kEquivalenceConfigs) +
               " identical arm sequences (" + std::to_string(general_runs) +
               " general, K <= 4, T <= 500)");
  }

  {
    // Arm 1 has zero loss, so the floor is T * 1/2 with the statistical slack.
    const Round T = 10000;
    const auto summary = run(kEasyEnv, kVictim, Strategy::none, 0.0, {T}, 1);
    const AttackerConfig none{ArmId{1}, 0.5, 0.0, Strategy::none};
    const auto reports = check_lemma1(summary.at(T), kVictim, none, make_constant_env(kEasyEnv, T));
    const BoundReport& r = reports.at(1);
    report(8, "selection floor without attack", r.satisfied,
           "mean N(arm 1) " + fixed(r.lhs, 1) + " + slack " + fixed(r.slack, 1) + " >= " +
               fixed(r.rhs, 1) + " at T=" + std::to_string(T));
  }

  {
    LowerBoundOptions options;
    options.beta = 1.0;
    const auto result = lower_bound_experiment(0.5, kHorizons, kTrials, options);
    std::string costs;
    for (const auto& h : result.aggregate.horizons) {
      costs += (costs.empty() ? "" : ", ") + fixed(h.total_cost.mean, 1);
    }
    report(9, "attack cost lower bound", result.cost_exponent >= kLowerBoundExponentFloor,
           "fitted exponent " + fixed(result.cost_exponent, 3) + " >= " +
               fixed(kLowerBoundExponentFloor, 2) + " (eta = T^-0.5; mean cost " + costs + ")");
  }

  {
    const Round T = 1000000;
    std::vector<double> fractions;
    std::vector<double> costs;
    std::string detail;
    for (double exponent : {0.5, 0.7, 0.9}) {
      const auto s = run(kEasyEnv, ExpRbSpec{exponent}, Strategy::easy, 0.0, {T});
      fractions.push_back(s.at(T).target_fraction());
      costs.push_back(s.at(T).total_cost.mean);
      detail += "phi=T^" + fixed(exponent, 1) + " fraction " + fixed(fractions.back()) +
                " cost " + fixed(costs.back(), 0) + "; ";
    }
    const bool pass = fractions[0] > fractions[1] && fractions[1] > fractions[2] &&
                      costs[0] < costs[1] && costs[1] < costs[2] &&
                      fractions[0] > kExpRbFractionFloor;
    report(10, "robust player qualitative suite", pass,
           detail + "floor " + fixed(kExpRbFractionFloor, 2) + " at phi=T^0.5");
  }

  std::printf("%d criteria failed; total %.1fs\n", failures,
              std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
  return failures == 0 ? 0 : 1;
}
