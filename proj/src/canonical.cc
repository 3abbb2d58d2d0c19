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

#include "tisim/canonical.h"

#include <cmath>
#include <numbers>

namespace tisim::canonical {

namespace {

using nlohmann::json;

json source() {
    return {{"t0", kEmissionTime}, {"v", kSpeed}, {"position", 0.0}};
}

json real_amplitude(double re) {
    return {{"re", re}, {"im", 0.0}};
}

json always() {
    return {{"kind", "always"}};
}

}  // namespace

json renninger_document(double inner_solid_angle) {
    double inner = inner_solid_angle / (4 * std::numbers::pi);
    return {
        {"label", "renninger"},
        {"source", source()},
        {"channels",
         {
             {{"name", "E1"}, {"direction", "inner-shell"}, {"amplitude", real_amplitude(std::sqrt(inner))}},
             {{"name", "E2"}, {"direction", "outer-shell"}, {"amplitude", real_amplitude(std::sqrt(1 - inner))}},
         }},
        {"absorbers",
         {
             {{"name", "E1"}, {"channel", "E1"}, {"distance", kNearDistance}, {"activation", always()}},
             {{"name", "E2"}, {"channel", "E2"}, {"distance", kFarDistance}, {"activation", always()}},
         }},
        {"boundary", "open"},
    };
}

json maudlin_document(BoundaryCondition boundary) {
    double half = std::numbers::sqrt2 / 2;
    return {
        {"label", "maudlin-" + std::string(boundary_name(boundary))},
        {"source", source()},
        {"channels",
         {
             {{"name", "L"}, {"direction", -1}, {"amplitude", real_amplitude(half)}},
             {{"name", "R"}, {"direction", 1}, {"amplitude", real_amplitude(half)}},
         }},
        {"absorbers",
         {
             {{"name", "A"}, {"channel", "R"}, {"distance", kNearDistance}, {"activation", always()}},
             {{"name", "B"},
              {"channel", "L"},
              {"distance", kFarDistance},
              {"activation", {{"kind", "not_fired"}, {"ref", "A"}}}},
         }},
        {"boundary", boundary_name(boundary)},
    };
}

json maudlin_with_c_document(BoundaryCondition boundary) {
    auto doc = maudlin_document(boundary);
    doc["label"] = "maudlin-with-c-" + std::string(boundary_name(boundary));
    doc["absorbers"].push_back(
        {{"name", "C"}, {"channel", "L"}, {"distance", kRemoteDistance}, {"activation", always()}});
    return doc;
}

}  // namespace tisim::canonical
