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

#ifndef TISIM_WAVE_H
#define TISIM_WAVE_H

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tisim/scenario.h"

namespace tisim {

/// Offer wave value psi(r_i, t_i) at one absorber.
struct OfferAmplitude {
    std::string absorber;
    Amplitude value;
    double arrival = 0.0;
};

/// psi psi* as received back at the source.
struct ConfirmationStrength {
    std::string absorber;
    double value = 0.0;
};

/// What the source receives at emission time, per channel, in declared
/// channel order. `deficit` is the weight no absorber confirms.
struct EchoProfile {
    std::vector<std::pair<std::string, double>> per_channel;
    double deficit = 0.0;

    double at(std::string_view channel) const;
    double confirmed() const;
};

/// Offer amplitude at `absorber`: the channel amplitude if it is the nearest
/// active absorber on its channel, 0 if shadowed or inactive.
/// Throws UnknownAbsorber.
OfferAmplitude offer_amplitude(const Setup &setup, const History &history, std::string_view absorber);

ConfirmationStrength confirmation_strength(const OfferAmplitude &offer);

/// Under a perfect-absorber or Big Bang boundary a channel without an active
/// absorber is still confirmed at full weight; under an open boundary that
/// weight is the deficit.
EchoProfile echo_profile(const Setup &setup, const History &history);

enum class LedgerComponentKind {
    SourceAdvanced,        // c_k*, emitted by the source into t < t0
    Confirmation,          // advanced wave from the confirming absorber
    BoundaryConfirmation,  // the perfect-absorber stand-in
    BigBangReflection,     // advanced wave reflected at t = 0 with phase pi
};

std::string_view ledger_component_name(LedgerComponentKind kind);

struct LedgerComponent {
    LedgerComponentKind kind;
    std::string origin;
    Amplitude amplitude;
};

/// Net advanced amplitude over one pre-emission interval on one channel.
struct LedgerRegion {
    double t_start = 0.0;
    double t_end = 0.0;
    std::string channel;
    std::vector<LedgerComponent> components;
    Amplitude net;
};

struct AdvancedLedger {
    std::vector<LedgerRegion> regions;
    BoundaryCondition boundary_used = BoundaryCondition::Open;

    /// Largest |net| over all regions.
    double max_residual() const;
};

/// Sums, per channel, every advanced wave present before emission in
/// `history`. Only absorbers active in the history contribute.
///
/// The pre-emission interval is [0, t0) under a Big Bang boundary and
/// [t0 - horizon / v, t0) otherwise. An absorber confirming the offer c_k sends
/// back the time-reverse of that offer, which continues past the source with
/// amplitude -c_k* and cancels the source's own advanced component c_k*.
AdvancedLedger advanced_ledger(const Setup &setup, const History &history);

/// [{t_start, t_end, channel, net_re, net_im, components: [...]}].
nlohmann::ordered_json ledger_to_json(const AdvancedLedger &ledger);

nlohmann::ordered_json echo_to_json(const EchoProfile &profile);

}  // namespace tisim

#endif  // TISIM_WAVE_H
