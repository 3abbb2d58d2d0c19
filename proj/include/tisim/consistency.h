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

#ifndef TISIM_CONSISTENCY_H
#define TISIM_CONSISTENCY_H

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tisim/scenario.h"

namespace tisim {

inline constexpr std::size_t kMaxEnumeratedAbsorbers = 20;

/// All predicate-consistent histories of `setup`.
///
/// Predicates are evaluated against the completed history (fixed-point
/// semantics), not a temporal prefix. Since every predicate depends only on
/// who fires and when, each choice of outcome channel and firing entity fixes
/// the firing record, which in turn fixes every activation; the choice is kept
/// iff the firing entity is then the nearest active absorber on the outcome
/// channel (or the boundary stand-in, when no real absorber is active and the
/// boundary is not open). Zero-weight channels are never outcomes.
///
/// Results are sorted by outcome channel (declared order), then by activation
/// bitmask (bit i = i-th declared absorber). Throws TooLarge beyond
/// kMaxEnumeratedAbsorbers absorbers.
std::vector<History> enumerate_histories(const Setup &setup);

/// Activation bitmask of a history, bit i = i-th declared absorber.
uint32_t activation_mask(const Setup &setup, const History &history);

enum class PathologyKind {
    // Open boundary and a channel with no unconditional absorber: some run can
    // leave the offer on that channel unconfirmed.
    EscapingOffer,
    // A channel with zero or several consistent histories.
    OutcomeAmbiguity,
};

std::string_view pathology_name(PathologyKind kind);

struct Pathology {
    PathologyKind kind;
    std::string channel;
    std::string detail;
};

enum class Classification { WellPosed, Pathological };

struct ConsistencyReport {
    std::vector<History> histories;
    Classification classification = Classification::WellPosed;
    std::vector<Pathology> reasons;
    std::vector<std::pair<std::string, std::size_t>> per_outcome;  // nonzero-weight channels only

    bool well_posed() const { return classification == Classification::WellPosed; }
};

ConsistencyReport classify(const Setup &setup);

struct Transaction {
    std::string outcome_channel;
    std::string completing_absorber;  // or kBoundaryAbsorber
    History history;
};

/// The unique transaction for `outcome`. Throws NotWellPosed unless classify
/// says WellPosed and NoConsistentHistory for unknown or zero-weight channels.
Transaction resolve_transaction(const Setup &setup, std::string_view outcome);

nlohmann::ordered_json history_to_json(const Setup &setup, const History &history);

/// {classification, reasons[], histories[], per_outcome{}}.
nlohmann::ordered_json report_to_json(const Setup &setup, const ConsistencyReport &report);

}  // namespace tisim

#endif  // TISIM_CONSISTENCY_H
