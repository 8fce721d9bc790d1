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

#ifndef GRIDGAME_SOCIAL_HPP_
#define GRIDGAME_SOCIAL_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gridgame/equilibrium.hpp"
#include "gridgame/errors.hpp"
#include "gridgame/market.hpp"

// Social profit S(p): the sum of all user profits and all UC profits at the
// posted prices. Payments cancel between the two sides, so S is invariant
// under uniform price shifts; as a function of p it is an exact quadratic
// with a singular Hessian whose null space contains the all-ones direction.

namespace gridgame {

// S in closed quadratic form: S(p) = (1/2) p'Hp + g'p + s0.
struct SocialQuadratic {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  double s0 = 0.0;

  double value(const PriceVector& p) const {
    return 0.5 * p.dot(H * p) + g.dot(p) + s0;
  }
  Eigen::VectorXd gradient(const PriceVector& p) const { return H * p + g; }
};

// S by direct summation over market participants. The reference route; the
// quadratic form is reconciled against it in tests and in the optimum guard.
inline double social_profit(const MarketConfig& config,
                            const PriceVector& prices) {
  double total = 0.0;
  for (int i = 0; i < config.num_users; ++i) {
    total += user_profit(config, prices, i);
  }
  for (int k = 0; k < config.num_ucs; ++k) {
    total += uc_profit(config, prices, k);
  }
  return total;
}

// The constant Hessian of S.
inline Eigen::MatrixXd social_hessian(const MarketConfig& config) {
  config.validate();
  const int n = config.num_ucs;
  const double m = config.num_users;
  const double beta = config.beta;
  const double nb = n * beta;
  const double m2 = 2.0 * m * m / (nb * nb);  // common 2 M^2 / (N beta)^2
  const Eigen::VectorXd& a = config.cost_quad;
  const double a_sum = a.sum();
  Eigen::MatrixXd h(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == k) {
        h(k, k) = -a[k] * m2 * (n - 1.0) * (n - 1.0) - m * (n - 1.0) / nb -
                  (a_sum - a[k]) * m2;
      } else {
        h(k, j) = (a[k] + a[j]) * m2 * (n - 1.0) + m / nb -
                  (a_sum - a[k] - a[j]) * m2;
      }
    }
  }
  return h;
}

// Assembles (H, g, s0) by exact evaluation: S is a quadratic, so the
// symmetric difference (S(e_k) - S(-e_k)) / 2 recovers g_k with no
// truncation error, and s0 is just S(0).
inline SocialQuadratic assemble_social_quadratic(const MarketConfig& config) {
  SocialQuadratic quad;
  quad.H = social_hessian(config);
  const int n = config.num_ucs;
  quad.g.resize(n);
  PriceVector axis = PriceVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    axis[k] = 1.0;
    const double up = social_profit(config, axis);
    axis[k] = -1.0;
    const double down = social_profit(config, axis);
    axis[k] = 0.0;
    quad.g[k] = (up - down) / 2.0;
  }
  quad.s0 = social_profit(config, axis);
  return quad;
}

inline Eigen::VectorXd social_gradient(const MarketConfig& config,
                                       const PriceVector& prices) {
  detail::check_prices(config, prices);
  return assemble_social_quadratic(config).gradient(prices);
}

// Tight Lipschitz constant of the gradient of S: the spectral radius of H.
inline double gradient_lipschitz(const SocialQuadratic& quad) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(quad.H);
  if (eigs.info() != Eigen::Success) {
    throw NumericalError("hessian eigendecomposition failed");
  }
  return eigs.eigenvalues().cwiseAbs().maxCoeff();
}

inline double gradient_lipschitz(const MarketConfig& config) {
  return gradient_lipschitz(assemble_social_quadratic(config));
}

// Sufficient condition for concavity of S: for every UC pair (k, j),
//
//   2 (a_k + a_j) M (N-1) + N beta - 2 M sum_{h not in {k,j}} a_h > 0.
//
// It asks the quadratic cost curvatures to be close to each other; one
// outsized a_h breaks it. Sufficient only: H can be negative semidefinite
// with the margin below zero.
struct Assumption1Report {
  bool holds = false;
  double worst_margin = 0.0;  // minimum over ordered pairs
};

inline Assumption1Report check_assumption1(const MarketConfig& config) {
  config.validate();
  const int n = config.num_ucs;
  const double m = config.num_users;
  const Eigen::VectorXd& a = config.cost_quad;
  const double a_sum = a.sum();
  Assumption1Report report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double margin = 2.0 * (a[k] + a[j]) * m * (n - 1.0) +
                            n * config.beta -
                            2.0 * m * (a_sum - a[k] - a[j]);
      report.worst_margin = std::min(report.worst_margin, margin);
    }
  }
  report.holds = report.worst_margin > 0.0;
  return report;
}

struct SocialOptimum {
  PriceVector prices;  // minimum-norm representative of the optimal line
  double value = 0.0;
};

// The social optimum: the minimum-norm solution of Hp = -g. The solution set
// is a line along the all-ones direction, and minimum norm pins the
// representative that is orthogonal to it.
//
// A seeded random search then tries to beat the returned value inside a +-50
// box around it, projected onto the same orthogonal slice. Finding a better
// point means either the quadratic assembly disagrees with the summation
// route or S is not concave; both are reported as numerical errors.
inline SocialOptimum global_social_optimum(const MarketConfig& config) {
  const SocialQuadratic quad = assemble_social_quadratic(config);
  const int n = config.num_ucs;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(quad.H);
  SocialOptimum opt;
  opt.prices = cod.solve(-quad.g);
  const double residual =
      (quad.H * opt.prices + quad.g).lpNorm<Eigen::Infinity>();
  if (!opt.prices.allFinite() ||
      residual >= 1e-8 * (1.0 + quad.g.lpNorm<Eigen::Infinity>())) {
    throw NumericalError(
        "stationarity system Hp = -g is inconsistent; residual " +
        std::to_string(residual));
  }
  opt.value = social_profit(config, opt.prices);

  std::mt19937 rng(0x5eed5U);
  std::uniform_real_distribution<double> box(-50.0, 50.0);
  const double tolerance = 1e-6 * std::max(1.0, std::abs(opt.value));
  for (int sample = 0; sample < 10000; ++sample) {
    PriceVector step(n);
    for (int k = 0; k < n; ++k) step[k] = box(rng);
    step.array() -= step.mean();  // stay orthogonal to the flat direction
    const double s = social_profit(config, opt.prices + step);
    if (s > opt.value + tolerance) {
      throw NumericalError(
          "random search found social profit " + std::to_string(s) +
          " above the stationary value " + std::to_string(opt.value));
    }
  }
  return opt;
}

// S at the social optimum over S at the unique leaderless Nash equilibrium.
// At least 1; equal to 1 exactly when the market self-organizes optimally.
inline double price_of_anarchy(const MarketConfig& config) {
  const NashSystem system = build_nash_system(config);
  const double at_ne = social_profit(config, solve_full_ne(system));
  if (!(at_ne > 0.0)) {
    throw std::domain_error(
        "social profit at the Nash equilibrium is not positive (" +
        std::to_string(at_ne) + "); the ratio is meaningless");
  }
  return global_social_optimum(config).value / at_ne;
}

}  // namespace gridgame

#endif  // GRIDGAME_SOCIAL_HPP_
