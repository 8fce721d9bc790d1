// Copyright 2026 The gridgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "gridgame/gridgame.hpp"
#include "test_common.hpp"

namespace gridgame {
namespace {

using gridgame_test::irrational_user_config;
using gridgame_test::table_config;

// Leaderless equilibrium of the reference market, solved independently.
const double kNe1 = 14.549397052255472;
const double kNe2 = 15.23497096918267;
const double kNe3 = 14.186288521661455;

TEST(NashSystemTest, ReferenceCoefficientsAreExact) {
  const NashSystem system = build_nash_system(table_config());
  ASSERT_EQ(system.dim(), 3);
  Eigen::MatrixXd expected(3, 3);
  expected << 320, -85, -85, -95, 340, -95, -80, -80, 310;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_DOUBLE_EQ(system.A(k, j), expected(k, j)) << k << "," << j;
    }
  }
  EXPECT_DOUBLE_EQ(system.q[0], 2155.0);
  EXPECT_DOUBLE_EQ(system.q[1], 2450.0);
  EXPECT_DOUBLE_EQ(system.q[2], 2015.0);
}

TEST(NashSystemTest, RowDominanceMarginIsUniform) {
  // Every row dominates its off-diagonal mass by exactly M N beta (N-1).
  const NashSystem system = build_nash_system(table_config());
  for (int k = 0; k < 3; ++k) {
    const double off =
        system.A.row(k).cwiseAbs().sum() - system.A(k, k);
    EXPECT_DOUBLE_EQ(system.A(k, k) - off, 150.0);
  }
}

TEST(NashSystemTest, FollowerBlocksForEachLeaderChoice) {
  const NashSystem lead0 = build_nash_system(table_config(), 0);
  EXPECT_DOUBLE_EQ(lead0.follower_block(0, 0), 340.0);
  EXPECT_DOUBLE_EQ(lead0.follower_block(0, 1), -95.0);
  EXPECT_DOUBLE_EQ(lead0.follower_block(1, 0), -80.0);
  EXPECT_DOUBLE_EQ(lead0.follower_block(1, 1), 310.0);
  EXPECT_DOUBLE_EQ(lead0.sigma_tilde[0], -95.0);
  EXPECT_DOUBLE_EQ(lead0.sigma_tilde[1], -80.0);
  EXPECT_DOUBLE_EQ(lead0.q_tilde[0], 2450.0);
  EXPECT_DOUBLE_EQ(lead0.q_tilde[1], 2015.0);
  EXPECT_EQ(lead0.follower_index(0), 1);
  EXPECT_EQ(lead0.follower_index(1), 2);

  const NashSystem lead1 = build_nash_system(table_config(), 1);
  EXPECT_DOUBLE_EQ(lead1.follower_block(0, 0), 320.0);
  EXPECT_DOUBLE_EQ(lead1.follower_block(0, 1), -85.0);
  EXPECT_DOUBLE_EQ(lead1.follower_block(1, 1), 310.0);
  EXPECT_DOUBLE_EQ(lead1.sigma_tilde[0], -85.0);
  EXPECT_DOUBLE_EQ(lead1.sigma_tilde[1], -80.0);
  EXPECT_EQ(lead1.follower_index(0), 0);
  EXPECT_EQ(lead1.follower_index(1), 2);

  EXPECT_THROW(build_nash_system(table_config(), 3), ConfigError);
  EXPECT_THROW(build_nash_system(table_config(), -1), ConfigError);
}

TEST(FullNeTest, ReferenceEquilibrium) {
  const PriceVector p = solve_full_ne(build_nash_system(table_config()));
  EXPECT_NEAR(p[0], kNe1, 1e-12);
  EXPECT_NEAR(p[1], kNe2, 1e-12);
  EXPECT_NEAR(p[2], kNe3, 1e-12);
}

TEST(FullNeTest, EquilibriumIsLeaderChoiceInvariant) {
  const PriceVector base = solve_full_ne(build_nash_system(table_config()));
  for (int leader = 1; leader < 3; ++leader) {
    const PriceVector p =
        solve_full_ne(build_nash_system(table_config(), leader));
    EXPECT_NEAR((p - base).lpNorm<Eigen::Infinity>(), 0.0, 1e-12);
  }
}

TEST(FullNeTest, EveryUtilitySitsOnItsBestResponse) {
  const MarketConfig config = table_config();
  const PriceVector p = solve_full_ne(build_nash_system(config));
  for (int k = 0; k < 3; ++k) {
    const UcQuadratic quad = uc_profit_coefficients(config, p, k);
    EXPECT_NEAR(quad.best_response(), p[k], 1e-9);
  }
}

TEST(FullNeTest, SymmetricMarketHasUniformPriceSix) {
  // All-identical utilities; the equilibrium price reduces to q / (sigma_kk
  // + (N-1) sigma_off) = 288 / 48 by hand.
  MarketConfig config;
  config.num_users = 4;
  config.num_ucs = 3;
  config.alpha = 20.0;
  config.beta = 2.0;
  config.demands = (Eigen::VectorXd(4) << 3.0, 4.0, 5.0, 6.0).finished();
  config.cost_quad = Eigen::VectorXd::Constant(3, 0.1);
  config.cost_lin = Eigen::VectorXd::Constant(3, 0.3);
  config.cost_const = Eigen::VectorXd::Constant(3, 0.1);
  const PriceVector p = solve_full_ne(build_nash_system(config));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(p[k], 6.0, 1e-10);
  }
}

TEST(FullNeTest, CostlierFuelRaisesTheQuotedPrice) {
  MarketConfig dearer = table_config();
  dearer.cost_lin[0] *= 2.0;
  const PriceVector base = solve_full_ne(build_nash_system(table_config()));
  const PriceVector moved = solve_full_ne(build_nash_system(dearer));
  EXPECT_GT(moved[0], base[0]);
}

TEST(FollowerNeTest, ReferenceReactionAtLeaderTwelve) {
  const NashSystem system = build_nash_system(table_config());
  const PriceVector f = follower_ne_given_leader(system, 12.0);
  ASSERT_EQ(f.size(), 2);
  EXPECT_NEAR(f[0], 14.269171779141104, 1e-12);
  EXPECT_NEAR(f[1], 13.279141104294478, 1e-12);
  const PriceVector full = leader_extended_prices(system, 12.0);
  ASSERT_EQ(full.size(), 3);
  EXPECT_DOUBLE_EQ(full[0], 12.0);
  EXPECT_NEAR(full[1], f[0], 1e-15);
  EXPECT_NEAR(full[2], f[1], 1e-15);
}

TEST(FollowerNeTest, ReactionCurveIsAffine) {
  const NashSystem system = build_nash_system(table_config());
  const double h = 0.5;
  for (double w1 = 10.0; w1 <= 14.0; w1 += 1.0) {
    const PriceVector second = follower_ne_given_leader(system, w1 + 2 * h) -
                               2.0 * follower_ne_given_leader(system, w1 + h) +
                               follower_ne_given_leader(system, w1);
    EXPECT_LT(second.lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(FollowerNeTest, LeaderAtOwnEquilibriumReproducesTheFullNe) {
  const NashSystem system = build_nash_system(table_config());
  const PriceVector p = solve_full_ne(system);
  const PriceVector full = leader_extended_prices(system, p[0]);
  EXPECT_NEAR((full - p).lpNorm<Eigen::Infinity>(), 0.0, 1e-9);
}

TEST(BestResponseDynamicsTest, SweepsConvergeToTheDirectSolve) {
  const NashSystem system = build_nash_system(table_config());
  const PriceVector direct = solve_full_ne(system);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> price(0.0, 30.0);
  for (int trial = 0; trial < 5; ++trial) {
    PriceVector start(3);
    for (int k = 0; k < 3; ++k) start[k] = price(rng);
    const PriceVector swept = best_response_dynamics(system, start);
    EXPECT_LT((swept - direct).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(BestResponseDynamicsTest, ExactEquilibriumReturnsImmediately) {
  const NashSystem system = build_nash_system(table_config());
  const PriceVector p = solve_full_ne(system);
  const PriceVector swept =
      best_response_dynamics(system, p, std::nullopt, 1e-10, 1);
  EXPECT_LT((swept - p).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(BestResponseDynamicsTest, PinnedLeaderReachesTheReactionCurve) {
  const NashSystem system = build_nash_system(table_config());
  const PriceVector target = follower_ne_given_leader(system, 12.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> price(0.0, 30.0);
  for (int trial = 0; trial < 5; ++trial) {
    PriceVector start(2);
    start << price(rng), price(rng);
    const PriceVector swept = best_response_dynamics(system, start, 12.0);
    ASSERT_EQ(swept.size(), 2);
    EXPECT_LT((swept - target).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(BestResponseDynamicsTest, ReportsTheLastSweepOnIterationCap) {
  const NashSystem system = build_nash_system(table_config());
  PriceVector start = PriceVector::Zero(3);
  try {
    best_response_dynamics(system, start, std::nullopt, 1e-10, 2);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.last_iterate.size(), 3);
  }
}

TEST(BestResponseDynamicsTest, RejectsBadArguments) {
  const NashSystem system = build_nash_system(table_config());
  EXPECT_THROW(best_response_dynamics(system, PriceVector::Zero(2)),
               ConfigError);
  EXPECT_THROW(best_response_dynamics(system, PriceVector::Zero(3), 12.0),
               ConfigError);
  EXPECT_THROW(
      best_response_dynamics(system, PriceVector::Zero(3), std::nullopt, 0.0),
      ConfigError);
}

TEST(NashProfitTest, ReferenceProfitsMatchBothRoutes) {
  const MarketConfig config = table_config();
  const NashSystem system = build_nash_system(config);
  const PriceVector p = solve_full_ne(system);
  const double expected[3] = {113.99595613191862, 102.14457841731729,
                              119.9392432378951};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(nash_profit(config, system, k), expected[k], 1e-9);
    EXPECT_NEAR(uc_profit(config, p, k), expected[k], 1e-9);
  }
}

TEST(RationalityTest, ReferenceMarketKeepsEveryUserOnBoard) {
  const MarketConfig config = table_config();
  const NashSystem system = build_nash_system(config);
  const RationalityCertificate cert = rationality_check(config, system);
  EXPECT_TRUE(cert.all_ok);
  for (int i = 0; i < config.num_users; ++i) {
    EXPECT_TRUE(cert.user_ok[i]);
  }
  // The slack operator evaluates to beta N times the demand split.
  const DemandProfile d =
      user_optimal_demand(config, solve_full_ne(system));
  const double scale = config.beta * config.num_ucs;
  for (int i = 0; i < config.num_users; ++i) {
    EXPECT_LT((cert.slack.row(i) - scale * d.row(i)).cwiseAbs().maxCoeff(),
              1e-9);
  }
}

TEST(RationalityTest, PricedOutUserIsFlagged) {
  const MarketConfig config = irrational_user_config();
  const NashSystem system = build_nash_system(config);
  const PriceVector p = solve_full_ne(system);
  EXPECT_NEAR(p[0], 14.961755485893416, 1e-10);
  EXPECT_NEAR(p[1], 20.084350132625993, 1e-10);
  EXPECT_NEAR(p[2], 14.589317578972752, 1e-10);

  const RationalityCertificate cert = rationality_check(config, system);
  EXPECT_FALSE(cert.all_ok);
  EXPECT_FALSE(cert.user_ok[0]);
  for (int i = 1; i < config.num_users; ++i) {
    EXPECT_TRUE(cert.user_ok[i]);
  }
  EXPECT_NEAR(cert.slack(0, 0), 6.250156739811912, 1e-9);
  EXPECT_NEAR(cert.slack(0, 1), -9.117627200385817, 1e-9);
  EXPECT_NEAR(cert.slack(0, 2), 7.367470460573902, 1e-9);

  // The verdict must agree with the sign of the demand plan itself.
  const DemandProfile d = user_optimal_demand(config, p);
  EXPECT_NEAR(d.minCoeff(), -0.6078418133590546, 1e-10);
  for (int i = 0; i < config.num_users; ++i) {
    EXPECT_EQ(cert.user_ok[i], d.row(i).minCoeff() > -1e-8);
  }
}

}  // namespace
}  // namespace gridgame
