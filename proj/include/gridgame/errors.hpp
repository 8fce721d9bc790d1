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

#ifndef GRIDGAME_ERRORS_HPP_
#define GRIDGAME_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gridgame/trace.hpp"

namespace gridgame {

// Invalid parameters, malformed configuration files, dimension mismatches.
// Messages name the offending field and the violated bound.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal numerical failures: singular systems that dominance should have
// ruled out, residual checks, route-agreement checks, degenerate directions.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// File system and serialization failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// An iteration hit its round budget (or diverged) before meeting its stopping
// rule. Carries the last iterate, and the partial trace for outer-loop runs.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, Eigen::VectorXd last,
                      Trace partial = {})
      : std::runtime_error(what),
        last_iterate(std::move(last)),
        trace(std::move(partial)) {}

  Eigen::VectorXd last_iterate;
  Trace trace;
};

}  // namespace gridgame

#endif  // GRIDGAME_ERRORS_HPP_
