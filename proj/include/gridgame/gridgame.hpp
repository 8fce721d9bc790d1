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

#ifndef GRIDGAME_GRIDGAME_HPP_
#define GRIDGAME_GRIDGAME_HPP_

// Umbrella header pulling in the whole library.

#include "gridgame/constrained.hpp"
#include "gridgame/equilibrium.hpp"
#include "gridgame/errors.hpp"
#include "gridgame/leader.hpp"
#include "gridgame/market.hpp"
#include "gridgame/scenario.hpp"
#include "gridgame/social.hpp"
#include "gridgame/trace.hpp"

#endif  // GRIDGAME_GRIDGAME_HPP_
