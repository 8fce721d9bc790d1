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

#ifndef GRIDGAME_CONSTRAINED_HPP_
#define GRIDGAME_CONSTRAINED_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gridgame/equilibrium.hpp"
#include "gridgame/errors.hpp"
#include "gridgame/leader.hpp"
#include "gridgame/market.hpp"
#include "gridgame/social.hpp"
#include "gridgame/trace.hpp"

// Box-constrained price spaces and the projected variants of the two
// leader-following optimizers. With constraints active the bilevel problem
// stops being convex; these runs promise only a fixed point of the projected
// update, checked afterwards by a local perturbation probe.

namespace gridgame {

// Per-UC closed price intervals; either side may be infinite.
struct BoxConstraints {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static BoxConstraints unbounded(int n) {
    BoxConstraints box;
    box.lo = Eigen::VectorXd::Constant(
        n, -std::numeric_limits<double>::infinity());
    box.hi = Eigen::VectorXd::Constant(
        n, std::numeric_limits<double>::infinity());
    return box;
  }

  void validate(int n) const {
    if (lo.size() != n || hi.size() != n) {
      throw ConfigError("box: expected " + std::to_string(n) +
                        " intervals, got lo=" + std::to_string(lo.size()) +
                        " hi=" + std::to_string(hi.size()));
    }
    for (int k = 0; k < n; ++k) {
      if (std::isnan(lo[k]) || std::isnan(hi[k]) || !(lo[k] <= hi[k])) {
        throw ConfigError("box: interval " + std::to_string(k + 1) +
                          " is empty or not a number");
      }
    }
  }

  bool contains(const PriceVector& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }

  friend bool operator==(const BoxConstraints& a, const BoxConstraints& b) {
    return a.lo.size() == b.lo.size() && a.hi.size() == b.hi.size() &&
           (a.lo.array() == b.lo.array()).all() &&
           (a.hi.array() == b.hi.array()).all();
  }
};

// Euclidean projection onto the box: a coordinatewise clamp.
inline PriceVector project_box(const PriceVector& prices,
                               const BoxConstraints& box) {
  box.validate(static_cast<int>(prices.size()));
  return prices.cwiseMax(box.lo).cwiseMin(box.hi);
}

// Follower equilibrium under per-follower boxes: projected simultaneous best
// response, seeded by the unconstrained affine solve (which is exact when no
// follower bound binds). The box is the full N-interval set; the leader's
// interval is ignored here.
inline PriceVector constrained_follower_ne(const NashSystem& system,
                                           const BoxConstraints& box,
                                           double p1, double tol = 1e-10,
                                           int max_iters = 10000) {
  const int n = system.dim();
  box.validate(n);
  PriceVector p(n);
  p[system.leader] = p1;
  const PriceVector seed = follower_ne_given_leader(system, p1);
  for (int r = 0; r < n - 1; ++r) {
    const int k = system.follower_index(r);
    p[k] = std::clamp(seed[r], box.lo[k], box.hi[k]);
  }
  for (int iter = 0; iter < max_iters; ++iter) {
    double delta = 0.0;
    PriceVector next = p;
    for (int r = 0; r < n - 1; ++r) {
      const int k = system.follower_index(r);
      const double off = system.A.row(k).dot(p) - system.A(k, k) * p[k];
      const double vertex = (system.q[k] - off) / system.A(k, k);
      next[k] = std::clamp(vertex, box.lo[k], box.hi[k]);
      delta = std::max(delta, std::abs(next[k] - p[k]));
    }
    p = next;
    if (delta < tol) {
      PriceVector out(n - 1);
      for (int r = 0; r < n - 1; ++r) out[r] = p[system.follower_index(r)];
      return out;
    }
  }
  throw NonConvergenceError(
      "constrained follower equilibrium: no fixed point after " +
          std::to_string(max_iters) + " sweeps",
      p);
}

// Projected fixed-sensitivity leader-following. The leader does projected
// scalar ascent on the restriction of S to the follower-reaction curve, with
// the tight step 1/|eta'H eta|; followers re-equilibrate each round, under
// their own boxes when follower_boxes_active (the default) and unboxed
// otherwise. Terminates at a fixed point of the projected map: the full
// price vector moves less than tol in one round.
//
// Records carry the leader's pre-projection increment in xi.
inline Trace run_projected_basic(const MarketConfig& config,
                                 const BoxConstraints& box,
                                 const PriceVector& w0, int max_rounds = 10000,
                                 double tol = 1e-8,
                                 bool follower_boxes_active = true,
                                 int leader = 0) {
  detail::check_run_args(config, w0, tol, max_rounds, "tol");
  const int n = config.num_ucs;
  box.validate(n);
  const NashSystem system = build_nash_system(config, leader);
  const SocialQuadratic quad = assemble_social_quadratic(config);
  const SocialOptimum optimum = global_social_optimum(config);
  const SensitivitySnapshot sens = fixed_sensitivities(system);
  const double mu1 = 1.0 / std::abs(sens.eta.dot(quad.H * sens.eta));
  if (!std::isfinite(mu1)) {
    throw NumericalError(
        "eta'H eta is numerically zero; no usable ascent step");
  }
  const detail::RecordBuilder builder{config, optimum.value};
  Trace trace;
  auto assemble = [&](double p1) {
    PriceVector w(n);
    w[leader] = p1;
    const PriceVector followers =
        follower_boxes_active ? constrained_follower_ne(system, box, p1)
                              : follower_ne_given_leader(system, p1);
    for (int r = 0; r < n - 1; ++r) {
      w[system.follower_index(r)] = followers[r];
    }
    return w;
  };
  PriceVector w = assemble(std::clamp(w0[leader], box.lo[leader],
                                      box.hi[leader]));
  for (int round = 0;; ++round) {
    const double xi = mu1 * quad.gradient(w).dot(sens.eta);
    if (!std::isfinite(xi)) {
      throw NonConvergenceError(
          "projected leader-following diverged at round " +
              std::to_string(round),
          w, std::move(trace));
    }
    TraceRecord record = builder.build(round, w, xi, mu1);
    const double p1_next =
        std::clamp(w[leader] + xi, box.lo[leader], box.hi[leader]);
    const PriceVector w_next = assemble(p1_next);
    if ((w_next - w).lpNorm<Eigen::Infinity>() < tol) {
      trace.push_back(std::move(record));
      return trace;
    }
    record.sensitivities = sens.eta;
    trace.push_back(std::move(record));
    if (round == max_rounds) {
      throw NonConvergenceError("no projected fixed point within " +
                                    std::to_string(max_rounds) + " rounds",
                                w, std::move(trace));
    }
    w = w_next;
  }
}

// Projected gradient ascent on S over the full box with the fixed step 1/L.
// The whole price vector is the decision variable; followers are initialized
// from the leader's reaction curve, then evolve by the projected update like
// everyone else. Terminates at a fixed point of the projected map.
inline Trace run_projected_dfa(const MarketConfig& config,
                               const BoxConstraints& box,
                               const PriceVector& w0, int max_rounds = 10000,
                               double tol = 1e-8, int leader = 0) {
  detail::check_run_args(config, w0, tol, max_rounds, "tol");
  const int n = config.num_ucs;
  box.validate(n);
  const NashSystem system = build_nash_system(config, leader);
  const SocialQuadratic quad = assemble_social_quadratic(config);
  const SocialOptimum optimum = global_social_optimum(config);
  const double lipschitz = gradient_lipschitz(quad);
  const detail::RecordBuilder builder{config, optimum.value};
  Trace trace;
  PriceVector w =
      project_box(leader_extended_prices(system, w0[leader]), box);
  for (int round = 0;; ++round) {
    const Eigen::VectorXd gradient = quad.gradient(w);
    const double xi_bar = gradient[leader] / lipschitz;
    if (!std::isfinite(xi_bar)) {
      throw NonConvergenceError(
          "projected ascent diverged at round " + std::to_string(round), w,
          std::move(trace));
    }
    const double grad_norm2 = gradient.squaredNorm();
    const double mu1 =
        grad_norm2 > 0.0 ? gradient[leader] * gradient[leader] /
                               (lipschitz * grad_norm2)
                         : 0.0;
    TraceRecord record = builder.build(round, w, xi_bar, mu1);
    const PriceVector w_next = project_box(w + gradient / lipschitz, box);
    if ((w_next - w).lpNorm<Eigen::Infinity>() < tol) {
      trace.push_back(std::move(record));
      return trace;
    }
    const double guard = 1e-9 * (1.0 + gradient.norm());
    if (std::abs(gradient[leader]) >= guard) {
      record.sensitivities =
          sensitivities_from_gradient(gradient, leader, round).eta;
    }
    trace.push_back(std::move(record));
    if (round == max_rounds) {
      throw NonConvergenceError("no projected fixed point within " +
                                    std::to_string(max_rounds) + " rounds",
                                w, std::move(trace));
    }
    w = w_next;
  }
}

// Local optimality probe: no single-coordinate feasible move of size delta
// improves S beyond rounding. The check a projected terminal point is
// expected to pass in lieu of a global claim.
inline bool perturbation_probe(const MarketConfig& config,
                               const BoxConstraints& box,
                               const PriceVector& prices,
                               double delta = 1e-3) {
  detail::check_prices(config, prices);
  box.validate(static_cast<int>(prices.size()));
  const double base = social_profit(config, prices);
  for (int k = 0; k < prices.size(); ++k) {
    for (const double sign : {1.0, -1.0}) {
      PriceVector probe = prices;
      probe[k] += sign * delta;
      if (!box.contains(probe)) continue;
      if (social_profit(config, probe) > base + 1e-12) return false;
    }
  }
  return true;
}

}  // namespace gridgame

#endif  // GRIDGAME_CONSTRAINED_HPP_
