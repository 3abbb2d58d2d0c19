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

#include "tisim/wave.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "tisim/errors.h"

namespace tisim {

double EchoProfile::at(std::string_view channel) const {
    for (const auto &[name, value] : per_channel) {
        if (name == channel) {
            return value;
        }
    }
    return 0.0;
}

double EchoProfile::confirmed() const {
    double sum = 0.0;
    for (const auto &[_, value] : per_channel) {
        sum += value;
    }
    return sum;
}

OfferAmplitude offer_amplitude(const Setup &setup, const History &history, std::string_view absorber) {
    const Absorber *target = setup.find_absorber(absorber);
    if (target == nullptr) {
        throw UnknownAbsorber("unknown absorber '" + std::string(absorber) + "'");
    }
    const Channel &channel = *setup.find_channel(target->channel);
    OfferAmplitude offer{target->name, Amplitude{0.0, 0.0}, arrival_time(setup, *target)};
    if (first_absorber(setup, channel, history) == target) {
        offer.value = channel.amplitude;
    }
    return offer;
}

ConfirmationStrength confirmation_strength(const OfferAmplitude &offer) {
    Amplitude product = offer.value * std::conj(offer.value);
    assert(std::abs(product.imag()) < kTolerance);
    return {offer.absorber, product.real()};
}

EchoProfile echo_profile(const Setup &setup, const History &history) {
    EchoProfile profile;
    for (const auto &channel : setup.channels()) {
        double value = 0.0;
        if (const Absorber *confirming = first_absorber(setup, channel, history)) {
            value = confirmation_strength(offer_amplitude(setup, history, confirming->name)).value;
        } else if (setup.boundary() != BoundaryCondition::Open) {
            value = confirmation_strength({std::string(kBoundaryAbsorber), channel.amplitude, 0.0}).value;
        } else {
            profile.deficit += channel.weight();
        }
        profile.per_channel.emplace_back(channel.name, value);
    }
    return profile;
}

std::string_view ledger_component_name(LedgerComponentKind kind) {
    switch (kind) {
        case LedgerComponentKind::SourceAdvanced:
            return "source";
        case LedgerComponentKind::Confirmation:
            return "confirmation";
        case LedgerComponentKind::BoundaryConfirmation:
            return "boundary";
        case LedgerComponentKind::BigBangReflection:
            return "reflection";
    }
    return "source";
}

double AdvancedLedger::max_residual() const {
    double worst = 0.0;
    for (const auto &region : regions) {
        worst = std::max(worst, std::abs(region.net));
    }
    return worst;
}

AdvancedLedger advanced_ledger(const Setup &setup, const History &history) {
    AdvancedLedger ledger;
    ledger.boundary_used = setup.boundary();
    double t0 = setup.source().emission_time;
    double floor = setup.boundary() == BoundaryCondition::BigBangReflector
                       ? 0.0
                       : t0 - setup.horizon() / setup.source().speed;

    for (const auto &channel : setup.channels()) {
        LedgerRegion region;
        region.t_start = floor;
        region.t_end = t0;
        region.channel = channel.name;

        Amplitude advanced = std::conj(channel.amplitude);
        region.components.push_back({LedgerComponentKind::SourceAdvanced, "source", advanced});

        if (const Absorber *confirming = first_absorber(setup, channel, history)) {
            auto offer = offer_amplitude(setup, history, confirming->name);
            region.components.push_back({LedgerComponentKind::Confirmation, confirming->name, -std::conj(offer.value)});
        } else if (setup.boundary() == BoundaryCondition::PerfectAbsorber) {
            region.components.push_back(
                {LedgerComponentKind::BoundaryConfirmation, std::string(kBoundaryAbsorber), -advanced});
        }

        Amplitude net{0.0, 0.0};
        for (const auto &component : region.components) {
            net += component.amplitude;
        }
        if (setup.boundary() == BoundaryCondition::BigBangReflector) {
            // Whatever advanced amplitude survives to t = 0 comes back with a
            // 180 degree phase shift.
            Amplitude reflected = -net;
            region.components.push_back({LedgerComponentKind::BigBangReflection, "t=0", reflected});
            net += reflected;
        }
        region.net = net;
        ledger.regions.push_back(std::move(region));
    }
    return ledger;
}

nlohmann::ordered_json ledger_to_json(const AdvancedLedger &ledger) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &region : ledger.regions) {
        nlohmann::ordered_json row;
        row["t_start"] = region.t_start;
        row["t_end"] = region.t_end;
        row["channel"] = region.channel;
        row["net_re"] = region.net.real();
        row["net_im"] = region.net.imag();
        auto &components = row["components"] = nlohmann::ordered_json::array();
        for (const auto &component : region.components) {
            components.push_back({{"kind", ledger_component_name(component.kind)},
                                  {"origin", component.origin},
                                  {"re", component.amplitude.real()},
                                  {"im", component.amplitude.imag()}});
        }
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::ordered_json echo_to_json(const EchoProfile &profile) {
    nlohmann::ordered_json out;
    auto &per_channel = out["per_channel"] = nlohmann::ordered_json::object();
    for (const auto &[name, value] : profile.per_channel) {
        per_channel[name] = value;
    }
    out["deficit"] = profile.deficit;
    return out;
}

}  // namespace tisim
