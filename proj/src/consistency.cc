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

#include "tisim/consistency.h"

#include <algorithm>
#include <optional>

#include "tisim/errors.h"

namespace tisim {

namespace {

// Firing record before it is expanded into a History.
struct Firing {
    std::optional<std::size_t> absorber;  // nullopt: boundary stand-in
    double time = 0.0;
};

bool holds(const Setup &setup, const ContingencyPredicate &predicate, const Firing &firing) {
    if (predicate.kind == ContingencyPredicate::Kind::Always) {
        return true;
    }
    bool fired_in_time = firing.absorber.has_value() && setup.absorbers()[*firing.absorber].name == predicate.ref &&
                         firing.time <= predicate.by;
    return predicate.kind == ContingencyPredicate::Kind::Fired ? fired_in_time : !fired_in_time;
}

History make_history(const Setup &setup, const Channel &outcome, const std::vector<bool> &active,
                     const Firing &firing) {
    History history;
    history.outcome_channel = outcome.name;
    const auto &absorbers = setup.absorbers();
    for (std::size_t i = 0; i < absorbers.size(); ++i) {
        history.activations[absorbers[i].name] = active[i];
        history.firing_times[absorbers[i].name] =
            firing.absorber == i ? std::optional<double>(firing.time) : std::nullopt;
    }
    if (!firing.absorber) {
        history.boundary_firing_time = firing.time;
    }
    return history;
}

}  // namespace

uint32_t activation_mask(const Setup &setup, const History &history) {
    uint32_t mask = 0;
    const auto &absorbers = setup.absorbers();
    for (std::size_t i = 0; i < absorbers.size(); ++i) {
        if (history.is_active(absorbers[i].name)) {
            mask |= uint32_t{1} << i;
        }
    }
    return mask;
}

std::vector<History> enumerate_histories(const Setup &setup) {
    const auto &absorbers = setup.absorbers();
    if (absorbers.size() > kMaxEnumeratedAbsorbers) {
        throw TooLarge("setup has " + std::to_string(absorbers.size()) + " absorbers; at most " +
                       std::to_string(kMaxEnumeratedAbsorbers) + " can be enumerated");
    }
    double boundary_time = setup.source().emission_time + setup.horizon() / setup.source().speed;

    std::vector<std::pair<std::pair<std::size_t, uint32_t>, History>> found;
    for (std::size_t c = 0; c < setup.channels().size(); ++c) {
        const auto &channel = setup.channels()[c];
        if (channel.weight() == 0.0) {
            continue;
        }
        std::vector<Firing> candidates;
        for (std::size_t i = 0; i < absorbers.size(); ++i) {
            if (absorbers[i].channel == channel.name) {
                candidates.push_back({i, arrival_time(setup, absorbers[i])});
            }
        }
        if (setup.boundary() != BoundaryCondition::Open) {
            candidates.push_back({std::nullopt, boundary_time});
        }

        for (const auto &firing : candidates) {
            std::vector<bool> active(absorbers.size());
            uint32_t mask = 0;
            for (std::size_t i = 0; i < absorbers.size(); ++i) {
                active[i] = holds(setup, absorbers[i].activation, firing);
                if (active[i]) {
                    mask |= uint32_t{1} << i;
                }
            }
            // The fixed point holds iff the chosen entity is the one that
            // actually absorbs under the activations it induces.
            std::optional<std::size_t> nearest;
            for (std::size_t i = 0; i < absorbers.size(); ++i) {
                if (active[i] && absorbers[i].channel == channel.name &&
                    (!nearest || absorbers[i].distance < absorbers[*nearest].distance)) {
                    nearest = i;
                }
            }
            if (nearest != firing.absorber) {
                continue;
            }
            found.push_back({{c, mask}, make_history(setup, channel, active, firing)});
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto &a, const auto &b) { return a.first < b.first; });

    std::vector<History> histories;
    histories.reserve(found.size());
    for (auto &[_, history] : found) {
        histories.push_back(std::move(history));
    }
    return histories;
}

std::string_view pathology_name(PathologyKind kind) {
    switch (kind) {
        case PathologyKind::EscapingOffer:
            return "EscapingOffer";
        case PathologyKind::OutcomeAmbiguity:
            return "OutcomeAmbiguity";
    }
    return "EscapingOffer";
}

ConsistencyReport classify(const Setup &setup) {
    ConsistencyReport report;
    report.histories = enumerate_histories(setup);

    for (const auto &channel : setup.channels()) {
        if (channel.weight() == 0.0) {
            continue;
        }
        auto count = static_cast<std::size_t>(std::count_if(report.histories.begin(), report.histories.end(),
                                                            [&](const History &h) { return h.outcome_channel == channel.name; }));
        report.per_outcome.emplace_back(channel.name, count);

        if (setup.boundary() == BoundaryCondition::Open) {
            bool guarded = std::any_of(setup.absorbers().begin(), setup.absorbers().end(), [&](const Absorber &a) {
                return a.channel == channel.name && a.activation.kind == ContingencyPredicate::Kind::Always;
            });
            if (!guarded) {
                std::string detail = "no unconditional absorber on an open boundary";
                for (const auto &history : report.histories) {
                    if (first_absorber(setup, channel, history) == nullptr) {
                        detail = "offer escapes in the history with outcome " + history.outcome_channel +
                                 " fired by " + history.firing_absorber();
                        break;
                    }
                }
                report.reasons.push_back({PathologyKind::EscapingOffer, channel.name, std::move(detail)});
            }
        }
        if (count != 1) {
            report.reasons.push_back({PathologyKind::OutcomeAmbiguity, channel.name,
                                      std::to_string(count) + " consistent histories"});
        }
    }
    report.classification = report.reasons.empty() ? Classification::WellPosed : Classification::Pathological;
    return report;
}

Transaction resolve_transaction(const Setup &setup, std::string_view outcome) {
    auto report = classify(setup);
    if (!report.well_posed()) {
        const auto &first = report.reasons.front();
        throw NotWellPosed("setup '" + setup.label() + "' is pathological: " + std::string(pathology_name(first.kind)) +
                           "(" + first.channel + ")");
    }
    for (auto &history : report.histories) {
        if (history.outcome_channel == outcome) {
            auto completing = history.firing_absorber();
            return {std::string(outcome), std::move(completing), std::move(history)};
        }
    }
    throw NoConsistentHistory("no consistent history with outcome '" + std::string(outcome) + "'");
}

nlohmann::ordered_json history_to_json(const Setup &setup, const History &history) {
    nlohmann::ordered_json out;
    out["outcome"] = history.outcome_channel;
    auto firing = history.firing_absorber();
    out["firing"] = firing;
    if (history.boundary_firing_time) {
        out["firing_time"] = *history.boundary_firing_time;
    } else {
        out["firing_time"] = *history.firing_times.at(firing);
    }
    auto &activations = out["activations"] = nlohmann::ordered_json::object();
    for (const auto &absorber : setup.absorbers()) {
        activations[absorber.name] = history.is_active(absorber.name);
    }
    return out;
}

nlohmann::ordered_json report_to_json(const Setup &setup, const ConsistencyReport &report) {
    nlohmann::ordered_json out;
    out["classification"] = report.well_posed() ? "WellPosed" : "Pathological";
    auto &reasons = out["reasons"] = nlohmann::ordered_json::array();
    for (const auto &reason : report.reasons) {
        reasons.push_back(
            {{"kind", pathology_name(reason.kind)}, {"channel", reason.channel}, {"detail", reason.detail}});
    }
    auto &histories = out["histories"] = nlohmann::ordered_json::array();
    for (const auto &history : report.histories) {
        histories.push_back(history_to_json(setup, history));
    }
    auto &per_outcome = out["per_outcome"] = nlohmann::ordered_json::object();
    for (const auto &[channel, count] : report.per_outcome) {
        per_outcome[channel] = count;
    }
    return out;
}

}  // namespace tisim
