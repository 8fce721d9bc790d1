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

#ifndef GRIDGAME_TRACE_HPP_
#define GRIDGAME_TRACE_HPP_

#include <vector>

#include <Eigen/Dense>

namespace gridgame {

// One recorded round of an outer-loop run. Every run kind (leaderless
// baseline, basic, DFA, projected variants) fills the common fields; `lambda`
// is populated only by DFA runs.
struct TraceRecord {
  int round = 0;
  Eigen::VectorXd prices;  // full price vector w at this round

  // Leader update signal computed at this state (the social profit indicator)
  // and the leader step size in effect. For projected runs `xi` is the
  // pre-projection signal, so it need not vanish at an active bound.
  double xi = 0.0;
  double mu1 = 0.0;

  // Follower sensitivities used to move off this state. Empty on the terminal
  // record (no further move) and on DFA rounds where the near-stationary
  // guard blocks ratio formation.
  Eigen::VectorXd sensitivities;

  double social = 0.0;  // S at `prices`
  double poa = 0.0;     // S_opt / social; NaN when social <= 0

  Eigen::VectorXd uc_profits;    // W_k at `prices`, length N
  Eigen::VectorXd user_profits;  // U*_i at `prices`, length M
  Eigen::MatrixXd demands;       // M x N optimal demand split at `prices`

  // DFA bookkeeping: the demand-amelioration multipliers consistent with the
  // follower prices of this round. `lambda_valid` is false on rounds where
  // the leader price fell inside the division guard and the bookkeeping was
  // suspended (the price update itself is unaffected).
  Eigen::VectorXd lambda;
  bool lambda_valid = true;
};

using Trace = std::vector<TraceRecord>;

}  // namespace gridgame

#endif  // GRIDGAME_TRACE_HPP_
