#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "advbandit/attackers.hpp"

using namespace advbandit;

namespace {

AttackerConfig easy(std::size_t target) {
  return AttackerConfig{ArmId{target}, 0.5, 0.0, Strategy::easy};
}

AttackerConfig general(std::size_t target, double alpha, double epsilon) {
  return AttackerConfig{ArmId{target}, alpha, epsilon, Strategy::general};
}

}  // namespace

TEST(NoAttack, ReturnsTheObservedLoss) {
  EXPECT_EQ(no_attack_perturb(3, ArmId{1}, LossValue(0.42)).value(), 0.42);
}

TEST(EasyTemplate, Examples) {
  const auto cfg = easy(0);
  EXPECT_EQ(easy_template_perturb(cfg, 5, ArmId{0}, LossValue(0.5)).value(), 0.5);
  EXPECT_EQ(easy_template_perturb(cfg, 5, ArmId{1}, LossValue(0.0)).value(), 1.0);
  EXPECT_EQ(easy_template_perturb(cfg, 5, ArmId{1}, LossValue(1.0)).value(), 1.0);
}

TEST(GeneralTemplate, Examples) {
  const auto cfg = general(0, 0.5, 0.25);
  EXPECT_EQ(general_template_perturb(cfg, 16, ArmId{0}, LossValue(0.9)).value(), 0.5);
  EXPECT_EQ(general_template_perturb(cfg, 16, ArmId{0}, LossValue(0.3)).value(), 0.3);
  EXPECT_EQ(general_template_perturb(cfg, 1, ArmId{0}, LossValue(0.9)).value(), 0.0);
  EXPECT_EQ(general_template_perturb(cfg, 16, ArmId{1}, LossValue(0.0)).value(), 1.0);
  EXPECT_THROW(general_template_perturb(cfg, 0, ArmId{0}, LossValue(0.5)), DomainError);
  EXPECT_EQ(target_margin(cfg, 16), 0.5);
}

TEST(GeneralTemplate, CostOfTheCappedRound) {
  AttackerState attacker(general(0, 0.5, 0.25));
  EXPECT_EQ(attacker.observe(16, ArmId{0}, LossValue(0.9)).value(), 0.5);
  EXPECT_NEAR(attacker.cumulative_cost(), 0.4, 1e-15);
  attacker.observe(17, ArmId{1}, LossValue(0.25));
  EXPECT_NEAR(attacker.cumulative_cost(), 1.15, 1e-15);
}

TEST(OptimalEpsilon, Values) {
  EXPECT_EQ(optimal_epsilon(0.5), 0.25);
  EXPECT_NEAR(optimal_epsilon(0.9), 0.05, 1e-15);
  EXPECT_NEAR(optimal_epsilon(0.999999), 5e-7, 1e-15);
  EXPECT_THROW(optimal_epsilon(1.0), ParameterError);
  EXPECT_THROW(optimal_epsilon(0.3), ParameterError);
}

TEST(Validate, RejectsBadConfigs) {
  EXPECT_NO_THROW(validate(general(1, 0.5, 0.25), 2));
  EXPECT_THROW(validate(general(0, 0.5, 0.5), 2), ParameterError);
  EXPECT_THROW(validate(general(0, 0.5, -0.1), 2), ParameterError);
  EXPECT_THROW(validate(general(0, 1.0, 0.0), 2), ParameterError);
  EXPECT_THROW(validate(easy(2), 2), ParameterError);
  // alpha and epsilon are irrelevant to the easy template.
  AttackerConfig loose = easy(0);
  loose.epsilon = 0.9;
  EXPECT_NO_THROW(validate(loose, 2));
}

TEST(TemplateLoss, ConstantEnvironments) {
  const std::vector<double> mild{0.5, 0.0};
  const auto env = make_constant_env(mild, 100);
  EXPECT_EQ(template_loss(easy(0), env, 7, ArmId{0}).value(), 0.5);
  EXPECT_EQ(template_loss(easy(0), env, 7, ArmId{1}).value(), 1.0);

  const std::vector<double> harsh{1.0, 0.0};
  const auto hard = make_constant_env(harsh, 100);
  EXPECT_EQ(template_loss(general(0, 0.5, 0.25), hard, 16, ArmId{0}).value(), 0.5);

  AttackerConfig none = easy(0);
  none.strategy = Strategy::none;
  EXPECT_EQ(template_loss(none, env, 3, ArmId{1}).value(), 0.0);
}

TEST(TemplateLoss, MaterializedTemplateMatchesPointwise) {
  const auto env = make_example1_env(64);
  const auto cfg = general(0, 0.5, 0.25);
  const auto table = materialize_template(cfg, env, 64);
  EXPECT_EQ(table.horizon(), 64);
  for (Round t = 1; t <= 64; ++t) {
    for (std::size_t a = 0; a < 2; ++a) {
      ASSERT_EQ(table.loss(t, ArmId{a}).value(), template_loss(cfg, env, t, ArmId{a}).value());
    }
  }
}

namespace {

struct RandomCase {
  LossMatrix env;
  AttackerConfig config;
};

RandomCase random_case(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = 2 + gen() % 4;
  const Round T = 1 + static_cast<Round>(gen() % 300);
  std::vector<double> values(static_cast<std::size_t>(T) * k);
  for (double& v : values) v = unit(gen);
  AttackerConfig cfg;
  cfg.target = ArmId{gen() % k};
  if (gen() % 2 == 0) {
    cfg.strategy = Strategy::easy;
  } else {
    cfg.strategy = Strategy::general;
    cfg.alpha = 0.5 + 0.49 * unit(gen);
    cfg.epsilon = (1.0 - cfg.alpha) * 0.99 * unit(gen);
  }
  return {make_table_env(T, k, std::move(values)), cfg};
}

}  // namespace

TEST(AttackerProperties, PerturbationsStayInRangeAndCostMatches) {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_case(gen);
    AttackerState state(c.config);
    double expected = 0.0;
    for (Round t = 1; t <= c.env.horizon(); ++t) {
      const ArmId arm{gen() % c.env.num_arms()};
      const LossValue clean = c.env.loss(t, arm);
      const LossValue shown = state.observe(t, arm, clean);
      ASSERT_GE(shown.value(), 0.0);
      ASSERT_LE(shown.value(), 1.0);
      expected += std::abs(shown.value() - clean.value());
    }
    ASSERT_NEAR(state.cumulative_cost(), expected, 1e-9);
  }
}

TEST(AttackerProperties, TargetIsBestInHindsightUnderTheTemplate) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_case(gen);
    const std::size_t k = c.env.num_arms();
    std::vector<double> totals(k, 0.0);
    for (Round t = 1; t <= c.env.horizon(); ++t) {
      const double target = template_loss(c.config, c.env, t, c.config.target).value();
      for (std::size_t a = 0; a < k; ++a) {
        const double shown = template_loss(c.config, c.env, t, ArmId{a}).value();
        totals[a] += shown;
        if (a != c.config.target.index && c.config.strategy == Strategy::general) {
          ASSERT_GE(shown - target, target_margin(c.config, t) - 1e-12);
        }
      }
    }
    for (std::size_t a = 0; a < k; ++a) ASSERT_LE(totals[c.config.target.index], totals[a]);
  }
}

TEST(AttackerProperties, NonTargetEntriesIgnoreTheEnvironment) {
  std::mt19937_64 gen(29);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_case(gen);
    const std::size_t k = a.env.num_arms();
    std::vector<double> other(static_cast<std::size_t>(a.env.horizon()) * k, 0.0);
    const auto zeros = make_table_env(a.env.horizon(), k, std::move(other));
    for (Round t = 1; t <= a.env.horizon(); ++t) {
      for (std::size_t arm = 0; arm < k; ++arm) {
        if (arm == a.config.target.index) continue;
        ASSERT_EQ(template_loss(a.config, a.env, t, ArmId{arm}).value(),
                  template_loss(a.config, zeros, t, ArmId{arm}).value());
      }
    }
  }
}
