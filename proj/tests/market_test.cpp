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
#include <stdexcept>

#include <gtest/gtest.h>

#include "gridgame/gridgame.hpp"
#include "test_common.hpp"

namespace gridgame {
namespace {

using gridgame_test::contains;
using gridgame_test::message_of;
using gridgame_test::table_config;

PriceVector prices3(double a, double b, double c) {
  return (PriceVector(3) << a, b, c).finished();
}

TEST(MarketConfigTest, TableConfigValidatesAndSumsDemand) {
  const MarketConfig config = table_config();
  EXPECT_NO_THROW(config.validate());
  EXPECT_DOUBLE_EQ(config.total_demand(), 25.0);
}

TEST(MarketConfigTest, RejectsDegenerateCounts) {
  MarketConfig config = table_config();
  config.num_users = 1;
  config.demands = Eigen::VectorXd::Constant(1, 4.0);
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "num_users"));

  config = table_config();
  config.num_ucs = 1;
  config.cost_quad = Eigen::VectorXd::Constant(1, 0.1);
  config.cost_lin = Eigen::VectorXd::Constant(1, 0.1);
  config.cost_const = Eigen::VectorXd::Constant(1, 0.0);
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "num_ucs"));
}

TEST(MarketConfigTest, RejectsBadScalars) {
  MarketConfig config = table_config();
  config.alpha = 0.0;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "alpha"));

  config = table_config();
  config.beta = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "beta"));

  config = table_config();
  config.beta = -2.0;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "beta"));
}

TEST(MarketConfigTest, RejectsBadVectors) {
  // A demand above alpha/beta would force a negative price to clear.
  MarketConfig config = table_config();
  config.demands[2] = 6.5;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "demands"));

  config = table_config();
  config.demands = Eigen::VectorXd::Constant(4, 4.0);
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "demands"));

  config = table_config();
  config.cost_quad[1] = 0.0;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "cost_quad"));

  config = table_config();
  config.cost_lin[0] = -0.1;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "cost_lin"));

  config = table_config();
  config.cost_const[2] = -1.0;
  EXPECT_TRUE(contains(
      message_of<ConfigError>([&] { config.validate(); }), "cost_const"));
}

TEST(MarketConfigTest, EqualityComparesAllFields) {
  EXPECT_TRUE(table_config() == table_config());
  MarketConfig other = table_config();
  other.cost_lin[1] += 1e-12;
  EXPECT_FALSE(table_config() == other);
}

TEST(UserDemandTest, EqualPricesSplitEvenly) {
  const MarketConfig config = table_config();
  const DemandProfile d = user_optimal_demand(config, prices3(10, 10, 10));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(d(1, k), 1.5, 1e-12);  // 4.5 / 3
  }
}

TEST(UserDemandTest, WorkedSplitAtUnevenPrices) {
  const MarketConfig config = table_config();
  const DemandProfile d =
      user_optimal_demand(config, prices3(12.0, 13.75, 14.40));
  EXPECT_NEAR(d(0, 0), 1.61, 1e-12);
  EXPECT_NEAR(d(0, 1), 1.26, 1e-12);
  EXPECT_NEAR(d(0, 2), 1.13, 1e-12);
}

TEST(UserDemandTest, RowsAlwaysSumToTheDemandTarget) {
  const MarketConfig config = table_config();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> price(0.0, 30.0);
  for (int trial = 0; trial < 50; ++trial) {
    const PriceVector p = prices3(price(rng), price(rng), price(rng));
    const DemandProfile d = user_optimal_demand(config, p);
    for (int i = 0; i < config.num_users; ++i) {
      EXPECT_NEAR(d.row(i).sum(), config.demands[i], 1e-10);
    }
  }
}

TEST(UserDemandTest, RejectsBadPricesAndIndices) {
  const MarketConfig config = table_config();
  EXPECT_THROW(user_optimal_demand(config, PriceVector::Zero(2)),
               ConfigError);
  PriceVector p = prices3(1, 2, 3);
  p[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(user_optimal_demand(config, p), ConfigError);
  EXPECT_THROW(user_profit(config, prices3(1, 2, 3), 5), std::out_of_range);
  EXPECT_THROW(uc_sales(config, prices3(1, 2, 3), -1), std::out_of_range);
}

TEST(UserProfitTest, WorkedValues) {
  const MarketConfig config = table_config();
  EXPECT_NEAR(user_profit(config, prices3(10, 10, 10), 1), 73.125, 1e-12);
  EXPECT_NEAR(user_profit(config, prices3(12.0, 13.75, 14.40), 0), 53.4415,
              1e-10);
}

TEST(UserProfitTest, MatchesDirectSummation) {
  const MarketConfig config = table_config();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> price(5.0, 25.0);
  for (int trial = 0; trial < 25; ++trial) {
    const PriceVector p = prices3(price(rng), price(rng), price(rng));
    const DemandProfile d = user_optimal_demand(config, p);
    for (int i = 0; i < config.num_users; ++i) {
      double direct = 0.0;
      for (int k = 0; k < config.num_ucs; ++k) {
        direct += config.alpha * d(i, k) -
                  config.beta / 2.0 * d(i, k) * d(i, k) - p[k] * d(i, k);
      }
      EXPECT_NEAR(user_profit(config, p, i), direct, 1e-9);
    }
  }
}

TEST(UserProfitTest, OptimalSplitBeatsPerturbedSplits) {
  // The closed-form split must dominate any feasible reallocation of the
  // same total quantity.
  const MarketConfig config = table_config();
  const PriceVector p = prices3(11.0, 14.0, 13.0);
  const DemandProfile d = user_optimal_demand(config, p);
  const int i = 3;
  const double best = user_profit(config, p, i);
  auto value_of = [&](const Eigen::VectorXd& row) {
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      total += config.alpha * row[k] - config.beta / 2.0 * row[k] * row[k] -
               p[k] * row[k];
    }
    return total;
  };
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      if (j == k) continue;
      Eigen::VectorXd row = d.row(i);
      row[k] += 0.05;
      row[j] -= 0.05;
      EXPECT_LE(value_of(row), best + 1e-12);
    }
  }
}

TEST(UcSalesTest, WorkedValueAndMarketClearing) {
  const MarketConfig config = table_config();
  const PriceVector p = prices3(12.0, 13.75, 14.40);
  EXPECT_NEAR(uc_sales(config, p, 0), 9.716666666666667, 1e-12);
  double total = 0.0;
  for (int k = 0; k < 3; ++k) total += uc_sales(config, p, k);
  EXPECT_NEAR(total, config.total_demand(), 1e-10);
  // Sales aggregate the per-user splits.
  const DemandProfile d = user_optimal_demand(config, p);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(uc_sales(config, p, k), d.col(k).sum(), 1e-10);
  }
}

TEST(UcProfitTest, WorkedValue) {
  const MarketConfig config = table_config();
  EXPECT_NEAR(uc_profit(config, prices3(12.0, 13.75, 14.40), 0),
              105.21530555555555, 1e-10);
}

TEST(UcProfitTest, QuadraticFormMatchesCashFlowRoute) {
  const MarketConfig config = table_config();
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> price(5.0, 25.0);
  for (int trial = 0; trial < 25; ++trial) {
    PriceVector p = prices3(price(rng), price(rng), price(rng));
    for (int k = 0; k < 3; ++k) {
      const UcQuadratic quad = uc_profit_coefficients(config, p, k);
      EXPECT_LT(quad.A, 0.0);
      for (const double own : {6.0, 12.0, 18.0}) {
        PriceVector moved = p;
        moved[k] = own;
        EXPECT_NEAR(quad.value(own), uc_profit(config, moved, k), 1e-8);
      }
    }
  }
}

TEST(UcProfitTest, BestResponseIsTheParabolaVertex) {
  const MarketConfig config = table_config();
  const PriceVector p = prices3(11.0, 16.0, 13.5);
  for (int k = 0; k < 3; ++k) {
    const UcQuadratic quad = uc_profit_coefficients(config, p, k);
    const double br = quad.best_response();
    EXPECT_GE(quad.value(br), quad.value(br + 1e-3));
    EXPECT_GE(quad.value(br), quad.value(br - 1e-3));
  }
}

}  // namespace
}  // namespace gridgame
