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

#ifndef GRIDGAME_EQUILIBRIUM_HPP_
#define GRIDGAME_EQUILIBRIUM_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridgame/errors.hpp"
#include "gridgame/market.hpp"

// The price competition between UCs, assembled as a linear system.
//
// Setting each UC's marginal profit to zero and collecting terms yields one
// linear equation per UC; stacked, A p = q. A is strictly diagonally dominant
// (margin exactly M*N*beta*(N-1) in every row), so the Nash equilibrium
// exists, is unique, and a direct solve is safe.
//
// One UC may be designated as the leader. The system then also carries the
// follower-only view: `follower_block` (rows and column of the leader
// removed), `q_tilde`, and `sigma_tilde`, the coupling column that feeds the
// leader's price into the follower equations.

namespace gridgame {

struct NashSystem {
  Eigen::MatrixXd A;  // N x N
  Eigen::VectorXd q;  // length N
  int leader = 0;     // uc index of the designated leader

  Eigen::MatrixXd follower_block;  // (N-1) x (N-1)
  Eigen::VectorXd q_tilde;         // length N-1
  Eigen::VectorXd sigma_tilde;     // length N-1, leader column over followers

  int dim() const { return static_cast<int>(A.rows()); }

  // uc index of the j-th follower, in increasing uc order.
  int follower_index(int j) const { return j < leader ? j : j + 1; }
};

inline NashSystem build_nash_system(const MarketConfig& config,
                                    int leader = 0) {
  config.validate();
  const int n = config.num_ucs;
  if (leader < 0 || leader >= n) {
    throw ConfigError("leader: uc index " + std::to_string(leader) +
                      " outside [0, " + std::to_string(n) + ")");
  }
  const double m = config.num_users;
  const double beta = config.beta;
  const double y_total = config.total_demand();
  NashSystem sys;
  sys.leader = leader;
  sys.A.resize(n, n);
  sys.q.resize(n);
  for (int k = 0; k < n; ++k) {
    const double a = config.cost_quad[k];
    for (int j = 0; j < n; ++j) {
      sys.A(k, j) = (j == k)
                        ? 2.0 * a * m * m * (n - 1.0) * (n - 1.0) +
                              2.0 * m * n * beta * (n - 1.0)
                        : -(2.0 * a * m * m * (n - 1.0) + m * n * beta);
    }
    sys.q[k] = beta * y_total * (n * beta + 2.0 * a * m * (n - 1.0)) +
               n * beta * m * config.cost_lin[k] * (n - 1.0);
  }
  sys.follower_block.resize(n - 1, n - 1);
  sys.q_tilde.resize(n - 1);
  sys.sigma_tilde.resize(n - 1);
  for (int r = 0; r < n - 1; ++r) {
    const int k = sys.follower_index(r);
    for (int s = 0; s < n - 1; ++s) {
      sys.follower_block(r, s) = sys.A(k, sys.follower_index(s));
    }
    sys.q_tilde[r] = sys.q[k];
    sys.sigma_tilde[r] = sys.A(k, leader);
  }
  return sys;
}

// The unique full Nash equilibrium A^{-1} q.
inline PriceVector solve_full_ne(const NashSystem& system) {
  const PriceVector p = system.A.partialPivLu().solve(system.q);
  const double residual = (system.A * p - system.q).lpNorm<Eigen::Infinity>();
  const double scale = system.q.lpNorm<Eigen::Infinity>();
  if (!p.allFinite() || residual >= 1e-8 * scale) {
    throw NumericalError("nash solve residual " + std::to_string(residual) +
                         " exceeds 1e-8 * " + std::to_string(scale));
  }
  return p;
}

// Follower equilibrium with the leader's price pinned; affine in p1.
// Returns the N-1 follower prices in increasing uc order.
inline PriceVector follower_ne_given_leader(const NashSystem& system,
                                            double p1) {
  return system.follower_block.partialPivLu().solve(
      system.q_tilde - system.sigma_tilde * p1);
}

// Assembles a full price vector from the leader's price and the follower
// equilibrium it induces.
inline PriceVector leader_extended_prices(const NashSystem& system,
                                          double p1) {
  const PriceVector f = follower_ne_given_leader(system, p1);
  PriceVector p(system.dim());
  p[system.leader] = p1;
  for (int r = 0; r < system.dim() - 1; ++r) {
    p[system.follower_index(r)] = f[r];
  }
  return p;
}

// Decentralized price adjustment: every UC simultaneously moves to the vertex
// of its one-shot profit parabola, p_k <- (q_k - sum_{j != k} sigma_kj p_j)
// / sigma_kk, until the sweep moves no price by tol or more.
//
// With `fixed_leader` set, the leader's price is held and only followers
// sweep; `start` and the result are then follower vectors (length N-1).
// Otherwise all N prices sweep and `start` and the result are full vectors.
inline PriceVector best_response_dynamics(
    const NashSystem& system, const PriceVector& start,
    std::optional<double> fixed_leader = std::nullopt, double tol = 1e-10,
    int max_iters = 10000) {
  if (!(tol > 0.0)) {
    throw ConfigError("tol: must be > 0, got " + std::to_string(tol));
  }
  const int n = system.dim();
  const bool pinned = fixed_leader.has_value();
  const auto expected = static_cast<Eigen::Index>(pinned ? n - 1 : n);
  if (start.size() != expected) {
    throw ConfigError("start: expected length " + std::to_string(expected) +
                      ", got " + std::to_string(start.size()));
  }
  PriceVector p(n);
  if (pinned) {
    p[system.leader] = *fixed_leader;
    for (int r = 0; r < n - 1; ++r) p[system.follower_index(r)] = start[r];
  } else {
    p = start;
  }
  auto result_view = [&]() -> PriceVector {
    if (!pinned) return p;
    PriceVector f(n - 1);
    for (int r = 0; r < n - 1; ++r) f[r] = p[system.follower_index(r)];
    return f;
  };
  for (int iter = 0; iter < max_iters; ++iter) {
    PriceVector next = p;
    double delta = 0.0;
    for (int k = 0; k < n; ++k) {
      if (pinned && k == system.leader) continue;
      const double off = system.A.row(k).dot(p) - system.A(k, k) * p[k];
      next[k] = (system.q[k] - off) / system.A(k, k);
      delta = std::max(delta, std::abs(next[k] - p[k]));
    }
    p = next;
    if (delta < tol) return result_view();
  }
  throw NonConvergenceError(
      "best-response dynamics: no fixed point after " +
          std::to_string(max_iters) + " sweeps",
      result_view());
}

// UC k's equilibrium profit in closed form, bypassing the demand layer:
// the vertex value of its profit parabola at the rivals' equilibrium prices.
// Matches uc_profit at the full NE to machine accuracy.
inline double nash_profit(const MarketConfig& config, const NashSystem& system,
                          int k) {
  detail::check_uc_index(config, k);
  const PriceVector p = solve_full_ne(system);
  const double m = config.num_users;
  const double n = config.num_ucs;
  const double beta = config.beta;
  const double quad = -config.cost_quad[k] * m * m / (n * n) *
                          ((n - 1.0) / beta) * ((n - 1.0) / beta) -
                      m * (n - 1.0) / (n * beta);
  const double rivals = p.sum() - p[k];
  const double num = (m * rivals + beta * config.total_demand()) -
                     config.cost_lin[k] * m * (n - 1.0);
  return num * num / (-4.0 * quad * n * n * beta * beta) -
         config.cost_const[k];
}

// Whether every user's equilibrium purchase plan stays non-negative, decided
// from prices alone: slack_i = beta*y_i*1 + B p^NE with B = -N*I + 1 1^T.
// slack_i equals beta*N times user i's demand row, so the sign test is
// equivalent to checking the demand profile itself.
struct RationalityCertificate {
  Eigen::MatrixXd slack;      // M x N, row per user
  std::vector<bool> user_ok;  // slack row >= -1e-9 elementwise
  bool all_ok = false;
};

inline RationalityCertificate rationality_check(const MarketConfig& config,
                                                const NashSystem& system) {
  const PriceVector p = solve_full_ne(system);
  const int n = config.num_ucs;
  const Eigen::MatrixXd b_op = -double(n) * Eigen::MatrixXd::Identity(n, n) +
                               Eigen::MatrixXd::Ones(n, n);
  const Eigen::VectorXd coupled = b_op * p;
  RationalityCertificate cert;
  cert.slack.resize(config.num_users, n);
  cert.user_ok.resize(config.num_users);
  cert.all_ok = true;
  for (int i = 0; i < config.num_users; ++i) {
    cert.slack.row(i) =
        (coupled.array() + config.beta * config.demands[i]).transpose();
    cert.user_ok[i] = (cert.slack.row(i).array() >= -1e-9).all();
    if (!cert.user_ok[i]) cert.all_ok = false;
  }
  return cert;
}

}  // namespace gridgame

#endif  // GRIDGAME_EQUILIBRIUM_HPP_
