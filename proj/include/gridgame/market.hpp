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

#ifndef GRIDGAME_MARKET_HPP_
#define GRIDGAME_MARKET_HPP_

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "gridgame/errors.hpp"

// Market primitives for a multi-seller retail electricity market.
//
// M users buy energy from N utility companies (UCs). User i must procure a
// fixed total quantity y_i per period and splits it across the UCs; the split
// responds to the posted prices p_1..p_N. UC k sells its aggregate demand d_k
// at price p_k and pays a quadratic generation cost a_k d^2 + b_k d + c_k.
//
// Units are conventions, not enforced at runtime: prices in currency per unit
// energy, quantities in energy, profits in currency. Negative prices and
// negative demand splits are representable on purpose; whether a demand
// profile is "rational" (elementwise non-negative) is a separate certificate
// issued by the equilibrium layer.

namespace gridgame {

// Prices indexed by UC. When a leader is designated it sits at a configured
// index (default 0); nothing in this module depends on leadership.
using PriceVector = Eigen::VectorXd;

// Purchase quantities, one row per user and one column per UC. Each row sums
// to that user's fixed total y_i.
using DemandProfile = Eigen::MatrixXd;

// Exogenous market parameters.
//
// `alpha` and `beta` describe the common user benefit of consumption: buying
// an amount d from one UC is worth alpha*d - (beta/2)*d^2 to any user. They
// are scalars because all users share the same benefit shape; only the totals
// y_i differ across users.
struct MarketConfig {
  int num_users = 0;  // M >= 2
  int num_ucs = 0;    // N >= 2
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::VectorXd demands;     // y_i, length M, each y_i <= alpha/beta
  Eigen::VectorXd cost_quad;   // a_k > 0, length N
  Eigen::VectorXd cost_lin;    // b_k >= 0, length N
  Eigen::VectorXd cost_const;  // c_k >= 0, length N

  // Y, the market-wide per-period quantity. Always derived, never stored.
  double total_demand() const { return demands.sum(); }

  void validate() const;

  friend bool operator==(const MarketConfig& a, const MarketConfig& b) {
    auto same = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
      return u.size() == v.size() && (u.array() == v.array()).all();
    };
    return a.num_users == b.num_users && a.num_ucs == b.num_ucs &&
           a.alpha == b.alpha && a.beta == b.beta &&
           same(a.demands, b.demands) && same(a.cost_quad, b.cost_quad) &&
           same(a.cost_lin, b.cost_lin) && same(a.cost_const, b.cost_const);
  }
};

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

inline void MarketConfig::validate() const {
  using detail::fmt_double;
  using detail::require;
  require(num_users >= 2, "num_users: must be >= 2, got " +
                              std::to_string(num_users));
  require(num_ucs >= 2, "num_ucs: must be >= 2, got " +
                            std::to_string(num_ucs));
  require(std::isfinite(alpha) && alpha > 0.0,
          "alpha: must be finite and > 0, got " + fmt_double(alpha));
  require(std::isfinite(beta) && beta > 0.0,
          "beta: must be finite and > 0, got " + fmt_double(beta));
  require(demands.size() == num_users,
          "demands: expected length num_users=" + std::to_string(num_users) +
              ", got " + std::to_string(demands.size()));
  require(cost_quad.size() == num_ucs,
          "cost_quad: expected length num_ucs=" + std::to_string(num_ucs) +
              ", got " + std::to_string(cost_quad.size()));
  require(cost_lin.size() == num_ucs,
          "cost_lin: expected length num_ucs=" + std::to_string(num_ucs) +
              ", got " + std::to_string(cost_lin.size()));
  require(cost_const.size() == num_ucs,
          "cost_const: expected length num_ucs=" + std::to_string(num_ucs) +
              ", got " + std::to_string(cost_const.size()));
  const double cap = alpha / beta;
  for (int i = 0; i < num_users; ++i) {
    require(std::isfinite(demands[i]),
            "demands: y[" + std::to_string(i + 1) + "] is not finite");
    // Keeps every optimal split on the unsaturated branch of the user
    // benefit, where marginal value alpha - beta*d stays positive.
    require(demands[i] <= cap, "demands: y[" + std::to_string(i + 1) + "] = " +
                                   fmt_double(demands[i]) +
                                   " violates y_i <= alpha/beta = " +
                                   fmt_double(cap));
  }
  for (int k = 0; k < num_ucs; ++k) {
    const std::string id = "[" + std::to_string(k + 1) + "]";
    require(std::isfinite(cost_quad[k]) && cost_quad[k] > 0.0,
            "cost_quad: a" + id + " must be finite and > 0, got " +
                fmt_double(cost_quad[k]));
    require(std::isfinite(cost_lin[k]) && cost_lin[k] >= 0.0,
            "cost_lin: b" + id + " must be finite and >= 0, got " +
                fmt_double(cost_lin[k]));
    require(std::isfinite(cost_const[k]) && cost_const[k] >= 0.0,
            "cost_const: c" + id + " must be finite and >= 0, got " +
                fmt_double(cost_const[k]));
  }
}

namespace detail {

inline void check_prices(const MarketConfig& config,
                         const PriceVector& prices) {
  if (prices.size() != config.num_ucs) {
    throw ConfigError("prices: expected length num_ucs=" +
                      std::to_string(config.num_ucs) + ", got " +
                      std::to_string(prices.size()));
  }
  if (!prices.allFinite()) {
    throw ConfigError("prices: entries must be finite");
  }
}

inline void check_user_index(const MarketConfig& config, int i) {
  if (i < 0 || i >= config.num_users) {
    throw std::out_of_range("user index " + std::to_string(i) +
                            " outside [0, " +
                            std::to_string(config.num_users) + ")");
  }
}

inline void check_uc_index(const MarketConfig& config, int k) {
  if (k < 0 || k >= config.num_ucs) {
    throw std::out_of_range("uc index " + std::to_string(k) + " outside [0, " +
                            std::to_string(config.num_ucs) + ")");
  }
}

}  // namespace detail

// The profit-maximizing split of every user's fixed total across the UCs:
//
//   d_{i,k} = (1/beta) * (mean(p) - p_k) + y_i / N.
//
// Each row sums to y_i by construction, and the split depends on prices only
// through their deviations from the mean, so a uniform price shift leaves the
// profile unchanged. Entries may go negative under extreme price spreads;
// they are reported as-is.
inline DemandProfile user_optimal_demand(const MarketConfig& config,
                                         const PriceVector& prices) {
  config.validate();
  detail::check_prices(config, prices);
  const int n = config.num_ucs;
  const double mean = prices.mean();
  DemandProfile d(config.num_users, n);
  for (int i = 0; i < config.num_users; ++i) {
    const double base = config.demands[i] / n;
    for (int k = 0; k < n; ++k) {
      d(i, k) = (mean - prices[k]) / config.beta + base;
    }
  }
  return d;
}

// User i's profit at the optimal split: sum over UCs of
// (alpha - p_k) d_{i,k} - (beta/2) d_{i,k}^2.
inline double user_profit(const MarketConfig& config, const PriceVector& prices,
                          int i) {
  config.validate();
  detail::check_prices(config, prices);
  detail::check_user_index(config, i);
  const int n = config.num_ucs;
  const double mean = prices.mean();
  const double base = config.demands[i] / n;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = (mean - prices[k]) / config.beta + base;
    total += (config.alpha - prices[k]) * d - 0.5 * config.beta * d * d;
  }
  return total;
}

// Aggregate quantity sold by UC k, the column-k sum of the optimal splits:
//
//   d_k = (M/beta) * (mean(p) - p_k) + Y / N.
inline double uc_sales(const MarketConfig& config, const PriceVector& prices,
                       int k) {
  config.validate();
  detail::check_prices(config, prices);
  detail::check_uc_index(config, k);
  return config.num_users * (prices.mean() - prices[k]) / config.beta +
         config.total_demand() / config.num_ucs;
}

// UC k's profit, viewed as a quadratic in its own price with rivals' prices
// folded into the coefficients:  W_k(p_k) = A p_k^2 + B p_k + C.  A is always
// negative, so each UC's one-shot problem is a concave parabola and its best
// response is the vertex -B/(2A).
struct UcQuadratic {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  double value(double own_price) const {
    return (A * own_price + B) * own_price + C;
  }
  double best_response() const { return -B / (2.0 * A); }
};

inline UcQuadratic uc_profit_coefficients(const MarketConfig& config,
                                          const PriceVector& prices, int k) {
  config.validate();
  detail::check_prices(config, prices);
  detail::check_uc_index(config, k);
  const double m = config.num_users;
  const double n = config.num_ucs;
  const double beta = config.beta;
  const double a = config.cost_quad[k];
  const double b = config.cost_lin[k];
  // v = M * (sum of rival prices) / beta + Y; the rival-dependent aggregate.
  const double v =
      m * (prices.sum() - prices[k]) / beta + config.total_demand();
  UcQuadratic u;
  u.A = -a * m * m * (n - 1.0) * (n - 1.0) / (n * n * beta * beta) -
        m * (n - 1.0) / (n * beta);
  u.B = 2.0 * a * m * (n - 1.0) * v / (n * n * beta) +
        b * m * (n - 1.0) / (n * beta) + v / n;
  u.C = -a * v * v / (n * n) - b * v / n - config.cost_const[k];
  return u;
}

// UC k's profit at the posted prices: revenue p_k d_k minus generation cost
// a_k d_k^2 + b_k d_k + c_k. Agrees with the quadratic-coefficient route
// above; the direct form is kept primary because it reads off the cash flows.
inline double uc_profit(const MarketConfig& config, const PriceVector& prices,
                        int k) {
  const double d = uc_sales(config, prices, k);
  return prices[k] * d - (config.cost_quad[k] * d * d +
                          config.cost_lin[k] * d + config.cost_const[k]);
}

}  // namespace gridgame

#endif  // GRIDGAME_MARKET_HPP_
