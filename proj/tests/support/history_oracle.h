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

#ifndef TISIM_TESTS_SUPPORT_HISTORY_ORACLE_H
#define TISIM_TESTS_SUPPORT_HISTORY_ORACLE_H

#include <vector>

#include "tisim/scenario.h"

namespace tisim::testing {

/// Brute-force scan over all 2^n activation assignments x outcome channels.
/// For each pair the nearest active absorber (or the boundary stand-in) fires
/// at its arrival time, and the assignment survives iff every predicate,
/// re-evaluated on that firing record, reproduces it. Shares no code with
/// enumerate_histories. Unordered.
std::vector<History> brute_force_histories(const Setup &setup);

}  // namespace tisim::testing

#endif  // TISIM_TESTS_SUPPORT_HISTORY_ORACLE_H
