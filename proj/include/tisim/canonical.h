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

#ifndef TISIM_CANONICAL_H
#define TISIM_CANONICAL_H

#include "json.hpp"
#include "tisim/scenario.h"

namespace tisim::canonical {

// Distances in meters, speed in m/s. Emission at t0 = 1 s so that the Big
// Bang variants have a non-empty pre-emission interval.
inline constexpr double kEmissionTime = 1.0;
inline constexpr double kSpeed = 1000.0;
inline constexpr double kNearDistance = 1.0;   // R1: E1, detector A
inline constexpr double kFarDistance = 2.0;    // R2: E2, detector B
inline constexpr double kRemoteDistance = 3.0;  // detector C

/// Negative-result experiment: inner shell E1 subtending `inner_solid_angle`
/// steradians, outer shell E2 covering the rest of the sphere.
nlohmann::json renninger_document(double inner_solid_angle);

/// Two back-to-back channels L and R at 1/sqrt(2). A sits on R at R1; B swings
/// onto L at R2 iff A has not fired shortly after t1.
nlohmann::json maudlin_document(BoundaryCondition boundary);

/// Maudlin's setup plus a fixed detector C on L behind B's position.
nlohmann::json maudlin_with_c_document(BoundaryCondition boundary);

inline Setup renninger(double inner_solid_angle) { return build_scenario(renninger_document(inner_solid_angle)); }
inline Setup maudlin(BoundaryCondition boundary) { return build_scenario(maudlin_document(boundary)); }
inline Setup maudlin_with_c(BoundaryCondition boundary) { return build_scenario(maudlin_with_c_document(boundary)); }

}  // namespace tisim::canonical

#endif  // TISIM_CANONICAL_H
