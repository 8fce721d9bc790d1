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

#ifndef GRIDGAME_LEADER_HPP_
#define GRIDGAME_LEADER_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gridgame/equilibrium.hpp"
#include "gridgame/errors.hpp"
#include "gridgame/market.hpp"
#include "gridgame/social.hpp"
#include "gridgame/trace.hpp"

// Leader-following outer loops.
//
// One UC (the leader) adjusts its price to raise social profit; the others
// re-equilibrate between the leader's moves. The leader's signal each round
// is the SPI xi: the directional derivative of S along the follow direction
// eta, scaled by a step size. Two schemes are provided:
//
//  * run_basic: the followers' reaction to the leader is the fixed affine
//    slope theta of the follower equilibrium, so eta is constant. The leader
//    climbs the scalar restriction of S to the reaction line.
//
//  * run_dfa: the coordinator rewrites the leader-price coefficient of the
//    demand functions each round (the lambda bookkeeping below), which makes
//    the realized follow direction the gradient-ratio theta_bar. The joint
//    update then equals plain gradient ascent w + (1/L) grad S, which reaches
//    the global optimum of S rather than a restricted one.

namespace gridgame {

// Follow direction at one round. theta holds the per-follower price step per
// unit leader step (increasing uc order); eta is the same data as a
// full-length vector in price order with 1 at the leader, so that
// grad(S) . eta is the derivative of S along the joint move.
struct SensitivitySnapshot {
  Eigen::VectorXd theta;
  Eigen::VectorXd eta;
  int round = 0;
};

// The fixed scheme's sensitivities: theta = -(follower block)^{-1} sigma,
// the slope of the affine follower equilibrium. Constant across rounds.
inline SensitivitySnapshot fixed_sensitivities(const NashSystem& system) {
  SensitivitySnapshot snap;
  snap.theta =
      -system.follower_block.partialPivLu().solve(system.sigma_tilde);
  if (!snap.theta.allFinite()) {
    throw NumericalError("follower block is numerically singular");
  }
  const int n = system.dim();
  snap.eta = Eigen::VectorXd::Zero(n);
  snap.eta[system.leader] = 1.0;
  for (int r = 0; r < n - 1; ++r) {
    snap.eta[system.follower_index(r)] = snap.theta[r];
  }
  return snap;
}

// Gradient-ratio sensitivities theta_bar_k = grad_k S / grad_leader S.
// Refuses to divide by a vanishing leader partial: below the guard the state
// is near-stationary (all partials vanish together there), and the caller is
// expected to have checked termination first.
inline SensitivitySnapshot sensitivities_from_gradient(
    const Eigen::VectorXd& gradient, int leader = 0, int round = 0) {
  const int n = static_cast<int>(gradient.size());
  if (leader < 0 || leader >= n) {
    throw ConfigError("leader: uc index " + std::to_string(leader) +
                      " outside [0, " + std::to_string(n) + ")");
  }
  const double guard = 1e-9 * (1.0 + gradient.norm());
  if (std::abs(gradient[leader]) < guard) {
    throw NumericalError(
        "leader partial " + std::to_string(gradient[leader]) +
        " is below the sensitivity guard; the state is near-stationary");
  }
  SensitivitySnapshot snap;
  snap.round = round;
  snap.theta.resize(n - 1);
  snap.eta.resize(n);
  snap.eta[leader] = 1.0;
  for (int k = 0, r = 0; k < n; ++k) {
    if (k == leader) continue;
    snap.theta[r] = gradient[k] / gradient[leader];
    snap.eta[k] = snap.theta[r];
    ++r;
  }
  return snap;
}

inline SensitivitySnapshot dfa_sensitivities(const MarketConfig& config,
                                             const PriceVector& prices,
                                             int leader = 0, int round = 0) {
  return sensitivities_from_gradient(social_gradient(config, prices), leader,
                                     round);
}

// The social profit indicator: xi = mu1 * grad(S)^T eta, the leader's next
// price increment.
inline double spi_basic(const MarketConfig& config, const PriceVector& prices,
                        const SensitivitySnapshot& snapshot, double mu1) {
  if (!std::isfinite(mu1)) {
    throw ConfigError("mu1: must be finite");
  }
  return mu1 * social_gradient(config, prices).dot(snapshot.eta);
}

// Step size for the fixed scheme: mu1 = -1/(eta'H eta). The admissible range
// is mu1 * eta'H eta in (-2, 0); this choice is its midpoint, where the
// contraction factor |1 + mu1 eta'H eta| is zero and the leader lands on the
// restricted optimum in essentially one move.
inline double curvature_step(const MarketConfig& config,
                            const SensitivitySnapshot& snapshot) {
  const double curvature =
      snapshot.eta.dot(social_hessian(config) * snapshot.eta);
  if (std::abs(curvature) < 1e-12) {
    throw NumericalError(
        "eta'H eta is numerically zero; the leader's moves would not change "
        "the social profit");
  }
  return -1.0 / curvature;
}

// Step size for the varying scheme: mu1_t = 1/(L ||eta_bar||^2), so the
// effective full-vector step mu1_t ||eta_bar||^2 is always exactly 1/L.
inline double lipschitz_step(const SensitivitySnapshot& snapshot,
                            double lipschitz) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw ConfigError("lipschitz: must be finite and > 0");
  }
  return 1.0 / (lipschitz * snapshot.eta.squaredNorm());
}

// Demand functions with the leader-price coefficient of each follower's
// demand rescaled by lambda_k. lambda = 1 reproduces the true demand split;
// the leader's column absorbs the difference so every row still sums to y_i.
inline DemandProfile ameliorated_demand(const MarketConfig& config,
                                        const PriceVector& prices,
                                        const Eigen::VectorXd& lambda,
                                        int leader = 0) {
  config.validate();
  detail::check_prices(config, prices);
  const int n = config.num_ucs;
  if (leader < 0 || leader >= n) {
    throw ConfigError("leader: uc index " + std::to_string(leader) +
                      " outside [0, " + std::to_string(n) + ")");
  }
  if (lambda.size() != n - 1) {
    throw ConfigError("lambda: expected length " + std::to_string(n - 1) +
                      ", got " + std::to_string(lambda.size()));
  }
  const double follower_sum = prices.sum() - prices[leader];
  DemandProfile d(config.num_users, n);
  for (int i = 0; i < config.num_users; ++i) {
    double followers_total = 0.0;
    for (int r = 0; r < n - 1; ++r) {
      const int k = r < leader ? r : r + 1;
      d(i, k) = ((follower_sum + lambda[r] * prices[leader]) / n -
                 prices[k]) /
                    config.beta +
                config.demands[i] / n;
      followers_total += d(i, k);
    }
    d(i, leader) = config.demands[i] - followers_total;
  }
  return d;
}

// Coordinator-side bookkeeping for the varying scheme. lambda is the vector
// of demand-coefficient rescalings announced for the current round;
// psi_sigma accumulates the sensitivity-weighted leader moves that lambda is
// reconstructed from; phi_diag is the diagonal normalizer 1/(sigma_k w1).
struct DfaState {
  Eigen::VectorXd lambda;
  Eigen::VectorXd psi_sigma;
  Eigen::VectorXd phi_diag;
  bool lambda_valid = true;
};

// Advances lambda for the round that moves the leader from w1_prev to
// w1_next. The reconstruction needs the initial leader price as an offset:
// the accumulated sums measure follower movement relative to the round-0
// equilibrium, which itself was produced by lambda = 1 at w1_initial.
//
// phi is undefined when w1_next is (numerically) zero; lambda is then
// flagged invalid for this round and recovers on the next one, since the
// reconstruction depends only on running sums, not on the previous lambda.
inline void dfa_advance(DfaState& state, const NashSystem& system,
                        const Eigen::VectorXd& theta_bar, double w1_prev,
                        double w1_next, double w1_initial) {
  const int followers = static_cast<int>(system.sigma_tilde.size());
  if (theta_bar.size() != followers || state.psi_sigma.size() != followers) {
    throw ConfigError("dfa state/sensitivity size mismatch");
  }
  state.psi_sigma += theta_bar * (w1_prev - w1_next);
  if (std::abs(w1_next) < 1e-9) {
    state.lambda_valid = false;
    return;
  }
  state.phi_diag = (system.sigma_tilde * w1_next).cwiseInverse();
  state.lambda = state.phi_diag.cwiseProduct(
      system.follower_block * state.psi_sigma +
      system.sigma_tilde * w1_initial);
  state.lambda_valid = true;
}

namespace detail {

// Fills the per-round bookkeeping shared by every optimizer: profits,
// demands, social profit, and the running PoA against a precomputed optimum.
struct RecordBuilder {
  const MarketConfig& config;
  double optimum_value = 0.0;

  TraceRecord build(int round, const PriceVector& w, double xi,
                    double mu1) const {
    TraceRecord record;
    record.round = round;
    record.prices = w;
    record.xi = xi;
    record.mu1 = mu1;
    record.social = social_profit(config, w);
    record.poa = record.social > 0.0
                     ? optimum_value / record.social
                     : std::numeric_limits<double>::quiet_NaN();
    record.uc_profits.resize(config.num_ucs);
    for (int k = 0; k < config.num_ucs; ++k) {
      record.uc_profits[k] = uc_profit(config, w, k);
    }
    record.user_profits.resize(config.num_users);
    for (int i = 0; i < config.num_users; ++i) {
      record.user_profits[i] = user_profit(config, w, i);
    }
    record.demands = user_optimal_demand(config, w);
    return record;
  }
};

inline void check_run_args(const MarketConfig& config, const PriceVector& w0,
                           double eps, int max_rounds,
                           const char* eps_name = "eps") {
  config.validate();
  if (w0.size() != config.num_ucs) {
    throw ConfigError("w0: expected length num_ucs=" +
                      std::to_string(config.num_ucs) + ", got " +
                      std::to_string(w0.size()));
  }
  if (!w0.allFinite()) {
    throw ConfigError("w0: entries must be finite");
  }
  if (!(eps > 0.0)) {
    throw ConfigError(std::string(eps_name) + ": must be > 0, got " +
                      std::to_string(eps));
  }
  if (max_rounds < 1) {
    throw ConfigError("max_rounds: must be >= 1, got " +
                      std::to_string(max_rounds));
  }
}

// Direct follower re-solve, optionally double-checked by decentralized
// best-response sweeps (the inner loop run to its own fixed point).
inline void verify_follower_solve(const NashSystem& system, double p1,
                                  const PriceVector& followers) {
  const PriceVector swept =
      best_response_dynamics(system, followers, p1, 1e-10, 10000);
  const double gap = (swept - followers).lpNorm<Eigen::Infinity>();
  if (gap > 1e-8) {
    throw NumericalError(
        "inner best-response fixed point deviates from the direct follower "
        "solve by " +
        std::to_string(gap));
  }
}

}  // namespace detail

// Fixed-sensitivity leader-following. The leader starts from w0's leader
// component; follower components of w0 are recomputed as the equilibrium
// reaction to that price, never trusted. Each round the leader moves by xi
// and the followers re-equilibrate. Terminates when |xi| < eps; the terminal
// record's sensitivities are left empty since no further move is computed.
//
// mu1_override replaces the curvature step for step-size experiments.
inline Trace run_basic(const MarketConfig& config, const PriceVector& w0,
                       double eps = 1e-8, int max_rounds = 10000,
                       std::optional<double> mu1_override = std::nullopt,
                       bool verify_inner = false, int leader = 0) {
  detail::check_run_args(config, w0, eps, max_rounds);
  const NashSystem system = build_nash_system(config, leader);
  const SocialQuadratic quad = assemble_social_quadratic(config);
  const SocialOptimum optimum = global_social_optimum(config);
  const SensitivitySnapshot sens = fixed_sensitivities(system);
  const double mu1 =
      mu1_override ? *mu1_override : curvature_step(config, sens);
  if (!std::isfinite(mu1)) {
    throw ConfigError("mu1: must be finite");
  }
  const detail::RecordBuilder builder{config, optimum.value};
  Trace trace;
  PriceVector w = leader_extended_prices(system, w0[leader]);
  for (int round = 0;; ++round) {
    const double xi = mu1 * quad.gradient(w).dot(sens.eta);
    if (!std::isfinite(xi)) {
      throw NonConvergenceError(
          "leader-following diverged at round " + std::to_string(round), w,
          std::move(trace));
    }
    TraceRecord record = builder.build(round, w, xi, mu1);
    if (std::abs(xi) < eps) {
      trace.push_back(std::move(record));
      return trace;
    }
    record.sensitivities = sens.eta;
    trace.push_back(std::move(record));
    if (round == max_rounds) {
      throw NonConvergenceError("no steady state within " +
                                    std::to_string(max_rounds) + " rounds",
                                w, std::move(trace));
    }
    const double p1 = w[leader] + xi;
    const PriceVector followers = follower_ne_given_leader(system, p1);
    if (verify_inner) detail::verify_follower_solve(system, p1, followers);
    w[leader] = p1;
    for (int r = 0; r < system.dim() - 1; ++r) {
      w[system.follower_index(r)] = followers[r];
    }
  }
}

// Varying-sensitivity leader-following. The joint move equals gradient
// ascent with step 1/L, computed both ways every round: the authoritative
// gradient form, and the coordinator's lambda-mediated follower equilibrium,
// which must reproduce it to 1e-8. Reaches the global optimum of S.
inline Trace run_dfa(const MarketConfig& config, const PriceVector& w0,
                     double eps = 1e-8, int max_rounds = 10000,
                     bool verify_inner = false, int leader = 0) {
  detail::check_run_args(config, w0, eps, max_rounds);
  const NashSystem system = build_nash_system(config, leader);
  const SocialQuadratic quad = assemble_social_quadratic(config);
  const SocialOptimum optimum = global_social_optimum(config);
  const double lipschitz = gradient_lipschitz(quad);
  const detail::RecordBuilder builder{config, optimum.value};
  Trace trace;
  PriceVector w = leader_extended_prices(system, w0[leader]);
  const double w1_initial = w[leader];
  const int followers = system.dim() - 1;
  DfaState state;
  state.lambda = Eigen::VectorXd::Ones(followers);
  state.psi_sigma = Eigen::VectorXd::Zero(followers);
  state.phi_diag = Eigen::VectorXd::Zero(followers);
  for (int round = 0;; ++round) {
    const Eigen::VectorXd gradient = quad.gradient(w);
    const double xi_bar = gradient[leader] / lipschitz;
    if (!std::isfinite(xi_bar)) {
      throw NonConvergenceError(
          "dfa leader-following diverged at round " + std::to_string(round),
          w, std::move(trace));
    }
    const double grad_norm2 = gradient.squaredNorm();
    const double mu1 =
        grad_norm2 > 0.0 ? gradient[leader] * gradient[leader] /
                               (lipschitz * grad_norm2)
                         : 0.0;
    TraceRecord record = builder.build(round, w, xi_bar, mu1);
    record.lambda = state.lambda;
    record.lambda_valid = state.lambda_valid;
    if (std::abs(xi_bar) < eps) {
      trace.push_back(std::move(record));
      return trace;
    }
    const SensitivitySnapshot sens =
        sensitivities_from_gradient(gradient, leader, round);
    record.sensitivities = sens.eta;
    trace.push_back(std::move(record));
    if (round == max_rounds) {
      throw NonConvergenceError("no steady state within " +
                                    std::to_string(max_rounds) + " rounds",
                                w, std::move(trace));
    }
    const PriceVector w_next = w + gradient / lipschitz;
    // Same move via the follow direction; an identity, kept as a live check.
    const PriceVector via_eta =
        w + sens.eta * (lipschitz_step(sens, lipschitz) * gradient.dot(sens.eta));
    if ((via_eta - w_next).lpNorm<Eigen::Infinity>() > 1e-8) {
      throw NumericalError("gradient and follow-direction updates disagree");
    }
    dfa_advance(state, system, sens.theta, w[leader], w_next[leader],
                w1_initial);
    if (state.lambda_valid) {
      const PriceVector mle = system.follower_block.partialPivLu().solve(
          system.q_tilde -
          system.sigma_tilde.cwiseProduct(state.lambda) * w_next[leader]);
      double gap = 0.0;
      for (int r = 0; r < followers; ++r) {
        gap = std::max(gap,
                       std::abs(mle[r] - w_next[system.follower_index(r)]));
      }
      if (gap > 1e-8) {
        throw NumericalError(
            "lambda-mediated follower equilibrium deviates from the gradient "
            "route by " +
            std::to_string(gap));
      }
      if (verify_inner) {
        // The followers' revised game: their equations keep every
        // coefficient except the leader coupling, which is scaled by lambda.
        NashSystem revised = system;
        for (int r = 0; r < followers; ++r) {
          revised.A(system.follower_index(r), leader) *= state.lambda[r];
        }
        revised.sigma_tilde = system.sigma_tilde.cwiseProduct(state.lambda);
        detail::verify_follower_solve(revised, w_next[leader], mle);
      }
    }
    w = w_next;
  }
}

}  // namespace gridgame

#endif  // GRIDGAME_LEADER_HPP_
