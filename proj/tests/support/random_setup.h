// Copyright 2026 The tisim Authors
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

#ifndef TISIM_TESTS_SUPPORT_RANDOM_SETUP_H
#define TISIM_TESTS_SUPPORT_RANDOM_SETUP_H

#include <cstddef>
#include <optional>
#include <random>

#include "json.hpp"
#include "tisim/entanglement.h"
#include "tisim/scenario.h"

namespace tisim::testing {

struct RandomSetupOptions {
    std::size_t min_absorbers = 0;
    std::size_t max_absorbers = 10;
    std::size_t max_channels = 4;
    std::optional<BoundaryCondition> boundary = std::nullopt;  // random when unset
    bool allow_zero_weight_channels = true;
};

/// A random valid scenario document. Predicates only reference earlier
/// absorbers, so the reference graph is acyclic. Distances are drawn from a
/// small lattice so that shadowing and distance ties are common.
nlohmann::json random_scenario_document(std::mt19937_64 &rng, const RandomSetupOptions &options = {});

Setup random_setup(std::mt19937_64 &rng, const RandomSetupOptions &options = {});

/// Keeps drawing until classify() says WellPosed.
Setup random_well_posed_setup(std::mt19937_64 &rng, const RandomSetupOptions &options);

/// A detector with a uniformly random unit coupling pair.
Detector random_detector(std::mt19937_64 &rng, std::string name);

}  // namespace tisim::testing

#endif  // TISIM_TESTS_SUPPORT_RANDOM_SETUP_H
