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

#include "tisim/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <set>
#include <sstream>

#include "tisim/errors.h"

namespace tisim {

namespace {

using nlohmann::json;

void expect_object(const json &node, const std::string &where) {
    if (!node.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
}

// Rejects keys outside required + optional and reports the first missing one.
void expect_keys(const json &node, const std::string &where, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {}) {
    expect_object(node, where);
    for (const auto &[key, _] : node.items()) {
        bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                     std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) {
            throw SchemaError(where + ": unknown key '" + key + "'");
        }
    }
    for (auto key : required) {
        if (!node.contains(key)) {
            throw SchemaError(where + ": missing key '" + std::string(key) + "'");
        }
    }
}

double get_number(const json &node, std::string_view key, const std::string &where) {
    const auto &value = node.at(key);
    if (!value.is_number()) {
        throw SchemaError(where + "." + std::string(key) + ": expected a number");
    }
    double x = value.get<double>();
    if (!std::isfinite(x)) {
        throw RangeError(where + "." + std::string(key) + ": must be finite");
    }
    return x;
}

std::string get_string(const json &node, std::string_view key, const std::string &where) {
    const auto &value = node.at(key);
    if (!value.is_string()) {
        throw SchemaError(where + "." + std::string(key) + ": expected a string");
    }
    auto s = value.get<std::string>();
    if (s.empty()) {
        throw SchemaError(where + "." + std::string(key) + ": must not be empty");
    }
    return s;
}

const json &get_array(const json &node, std::string_view key, const std::string &where) {
    const auto &value = node.at(key);
    if (!value.is_array()) {
        throw SchemaError(where + "." + std::string(key) + ": expected an array");
    }
    return value;
}

Direction parse_direction(const json &node, const std::string &where) {
    if (node.is_string()) {
        auto sector = node.get<std::string>();
        if (sector.empty()) {
            throw SchemaError(where + ": sector name must not be empty");
        }
        return sector;
    }
    if (node.is_number_integer()) {
        auto sign = node.get<int64_t>();
        if (sign != -1 && sign != 1) {
            throw RangeError(where + ": signed direction must be -1 or +1");
        }
        return static_cast<int>(sign);
    }
    throw SchemaError(where + ": expected -1, +1 or a sector name");
}

Amplitude parse_amplitude(const json &node, const std::string &where) {
    expect_keys(node, where, {"re", "im"});
    return {get_number(node, "re", where), get_number(node, "im", where)};
}

json amplitude_to_json(Amplitude a) {
    return json{{"re", a.real()}, {"im", a.imag()}};
}

std::string_view predicate_kind_name(ContingencyPredicate::Kind kind) {
    switch (kind) {
        case ContingencyPredicate::Kind::Always:
            return "always";
        case ContingencyPredicate::Kind::NotFired:
            return "not_fired";
        case ContingencyPredicate::Kind::Fired:
            return "fired";
    }
    return "always";
}

// Predicates are parsed in two passes: kinds and refs first, deadlines once
// every absorber distance is known.
struct RawPredicate {
    ContingencyPredicate::Kind kind = ContingencyPredicate::Kind::Always;
    std::string ref;
    std::optional<double> by;
};

RawPredicate parse_predicate(const json &node, const std::string &where) {
    expect_keys(node, where, {"kind"}, {"ref", "by"});
    auto kind = get_string(node, "kind", where);
    RawPredicate raw;
    if (kind == "always") {
        if (node.contains("ref") || node.contains("by")) {
            throw SchemaError(where + ": 'always' takes neither 'ref' nor 'by'");
        }
        return raw;
    }
    if (kind == "not_fired") {
        raw.kind = ContingencyPredicate::Kind::NotFired;
    } else if (kind == "fired") {
        raw.kind = ContingencyPredicate::Kind::Fired;
    } else {
        throw SchemaError(where + ".kind: unknown predicate kind '" + kind + "'");
    }
    if (!node.contains("ref")) {
        throw SchemaError(where + ": missing key 'ref'");
    }
    raw.ref = get_string(node, "ref", where);
    if (node.contains("by")) {
        raw.by = get_number(node, "by", where);
    }
    return raw;
}

void check_acyclic(const std::vector<Absorber> &absorbers, const Setup &setup) {
    enum class Mark { White, Grey, Black };
    std::vector<Mark> marks(absorbers.size(), Mark::White);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        marks[i] = Mark::Grey;
        const auto &pred = absorbers[i].activation;
        if (pred.kind != ContingencyPredicate::Kind::Always) {
            auto j = *setup.absorber_index(pred.ref);
            if (marks[j] == Mark::Grey) {
                throw PredicateCycle("activation of '" + absorbers[i].name + "' depends on itself through '" +
                                     pred.ref + "'");
            }
            if (marks[j] == Mark::White) {
                visit(j);
            }
        }
        marks[i] = Mark::Black;
    };
    for (std::size_t i = 0; i < absorbers.size(); ++i) {
        if (marks[i] == Mark::White) {
            visit(i);
        }
    }
}

}  // namespace

std::string_view boundary_name(BoundaryCondition boundary) {
    switch (boundary) {
        case BoundaryCondition::Open:
            return "open";
        case BoundaryCondition::PerfectAbsorber:
            return "perfect";
        case BoundaryCondition::BigBangReflector:
            return "bigbang";
    }
    return "open";
}

BoundaryCondition parse_boundary(std::string_view name) {
    if (name == "open") {
        return BoundaryCondition::Open;
    }
    if (name == "perfect") {
        return BoundaryCondition::PerfectAbsorber;
    }
    if (name == "bigbang") {
        return BoundaryCondition::BigBangReflector;
    }
    throw SchemaError("boundary: expected one of open, perfect, bigbang; got '" + std::string(name) + "'");
}

std::string History::firing_absorber() const {
    for (const auto &[name, time] : firing_times) {
        if (time.has_value()) {
            return name;
        }
    }
    return std::string(kBoundaryAbsorber);
}

bool History::is_active(std::string_view absorber) const {
    auto it = activations.find(std::string(absorber));
    return it != activations.end() && it->second;
}

const Channel *Setup::find_channel(std::string_view name) const {
    auto i = channel_index(name);
    return i ? &channels_[*i] : nullptr;
}

const Absorber *Setup::find_absorber(std::string_view name) const {
    auto i = absorber_index(name);
    return i ? &absorbers_[*i] : nullptr;
}

std::optional<std::size_t> Setup::channel_index(std::string_view name) const {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        if (channels_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> Setup::absorber_index(std::string_view name) const {
    for (std::size_t i = 0; i < absorbers_.size(); ++i) {
        if (absorbers_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

Setup Setup::with_boundary(BoundaryCondition boundary) const {
    auto doc = scenario_to_json(*this);
    doc["boundary"] = boundary_name(boundary);
    return build_scenario(nlohmann::json::parse(doc.dump()));
}

Setup build_scenario(const json &document) {
    expect_keys(document, "scenario", {"label", "source", "channels", "absorbers", "boundary"},
                {"horizon", "epsilon", "detector_chain"});

    Setup setup;
    setup.label_ = get_string(document, "label", "scenario");

    const auto &source = document.at("source");
    expect_keys(source, "source", {"t0", "v", "position"});
    setup.source_.emission_time = get_number(source, "t0", "source");
    setup.source_.speed = get_number(source, "v", "source");
    setup.source_.position = get_number(source, "position", "source");
    if (setup.source_.speed <= 0) {
        throw RangeError("source.v: speed must be positive");
    }

    if (!document.at("boundary").is_string()) {
        throw SchemaError("boundary: expected a string");
    }
    setup.boundary_ = parse_boundary(document.at("boundary").get<std::string>());
    if (setup.boundary_ == BoundaryCondition::BigBangReflector && setup.source_.emission_time <= 0) {
        throw RangeError("source.t0: a Big Bang boundary needs emission after t = 0");
    }

    if (document.contains("horizon")) {
        setup.horizon_ = get_number(document, "horizon", "scenario");
        if (setup.horizon_ <= 0) {
            throw RangeError("horizon: must be positive");
        }
    }
    if (document.contains("epsilon")) {
        setup.epsilon_ = get_number(document, "epsilon", "scenario");
        if (setup.epsilon_ < 0) {
            throw RangeError("epsilon: must be non-negative");
        }
    }

    const auto &channels = get_array(document, "channels", "scenario");
    if (channels.empty()) {
        throw SchemaError("channels: at least one channel is required");
    }
    std::set<std::string> channel_names;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        auto where = "channels[" + std::to_string(i) + "]";
        const auto &node = channels[i];
        expect_keys(node, where, {"name", "direction", "amplitude"});
        Channel channel;
        channel.name = get_string(node, "name", where);
        channel.direction = parse_direction(node.at("direction"), where + ".direction");
        channel.amplitude = parse_amplitude(node.at("amplitude"), where + ".amplitude");
        if (!channel_names.insert(channel.name).second) {
            throw SchemaError(where + ": duplicate channel name '" + channel.name + "'");
        }
        if (std::abs(channel.amplitude) > 1.0 + kTolerance) {
            throw RangeError(where + ".amplitude: modulus exceeds 1");
        }
        total_weight += channel.weight();
        setup.channels_.push_back(std::move(channel));
    }
    if (std::abs(total_weight - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "channel weights sum to " << total_weight << ", not 1";
        throw NormalizationError(msg.str());
    }

    const auto &absorbers = get_array(document, "absorbers", "scenario");
    std::vector<RawPredicate> raw_predicates;
    std::set<std::string> absorber_names;
    for (std::size_t i = 0; i < absorbers.size(); ++i) {
        auto where = "absorbers[" + std::to_string(i) + "]";
        const auto &node = absorbers[i];
        expect_keys(node, where, {"name", "channel", "distance", "activation"});
        Absorber absorber;
        absorber.name = get_string(node, "name", where);
        absorber.channel = get_string(node, "channel", where);
        absorber.distance = get_number(node, "distance", where);
        if (absorber.name == kBoundaryAbsorber) {
            throw SchemaError(where + ": the name 'boundary' is reserved");
        }
        if (!absorber_names.insert(absorber.name).second) {
            throw SchemaError(where + ": duplicate absorber name '" + absorber.name + "'");
        }
        if (!channel_names.contains(absorber.channel)) {
            throw DanglingReference(where + ": unknown channel '" + absorber.channel + "'");
        }
        if (absorber.distance <= 0) {
            throw RangeError(where + ".distance: must be positive");
        }
        raw_predicates.push_back(parse_predicate(node.at("activation"), where + ".activation"));
        setup.absorbers_.push_back(std::move(absorber));
    }

    for (std::size_t i = 0; i < raw_predicates.size(); ++i) {
        const auto &raw = raw_predicates[i];
        auto &absorber = setup.absorbers_[i];
        if (raw.kind == ContingencyPredicate::Kind::Always) {
            continue;
        }
        const Absorber *ref = setup.find_absorber(raw.ref);
        if (ref == nullptr) {
            throw DanglingReference("absorbers[" + std::to_string(i) + "].activation: unknown absorber '" + raw.ref +
                                    "'");
        }
        double by = raw.by.value_or(arrival_time(setup, *ref) + setup.epsilon_);
        if (by < setup.source_.emission_time) {
            throw RangeError("absorbers[" + std::to_string(i) + "].activation.by: deadline precedes emission");
        }
        absorber.activation = {raw.kind, raw.ref, by};
    }
    check_acyclic(setup.absorbers_, setup);

    if (document.contains("detector_chain")) {
        std::set<std::string> detector_names;
        for (const auto &node : get_array(document, "detector_chain", "scenario")) {
            auto detector = detector_from_json(node);
            if (!detector_names.insert(detector.name).second) {
                throw SchemaError("detector_chain: duplicate detector '" + detector.name + "'");
            }
            setup.detector_chain_.push_back(std::move(detector));
        }
    }
    return setup;
}

Setup load_scenario_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read scenario file '" + path.string() + "'");
    }
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError(path.string() + ": not valid JSON: " + e.what());
    }
    return build_scenario(document);
}

nlohmann::ordered_json scenario_to_json(const Setup &setup) {
    nlohmann::ordered_json doc;
    doc["label"] = setup.label();
    doc["source"] = {{"t0", setup.source().emission_time},
                     {"v", setup.source().speed},
                     {"position", setup.source().position}};
    auto &channels = doc["channels"] = nlohmann::ordered_json::array();
    for (const auto &channel : setup.channels()) {
        nlohmann::ordered_json node;
        node["name"] = channel.name;
        std::visit([&](const auto &d) { node["direction"] = d; }, channel.direction);
        node["amplitude"] = amplitude_to_json(channel.amplitude);
        channels.push_back(std::move(node));
    }
    auto &absorbers = doc["absorbers"] = nlohmann::ordered_json::array();
    for (const auto &absorber : setup.absorbers()) {
        nlohmann::ordered_json activation;
        activation["kind"] = predicate_kind_name(absorber.activation.kind);
        if (absorber.activation.kind != ContingencyPredicate::Kind::Always) {
            activation["ref"] = absorber.activation.ref;
            activation["by"] = absorber.activation.by;
        }
        absorbers.push_back({{"name", absorber.name},
                             {"channel", absorber.channel},
                             {"distance", absorber.distance},
                             {"activation", std::move(activation)}});
    }
    doc["boundary"] = boundary_name(setup.boundary());
    doc["horizon"] = setup.horizon();
    doc["epsilon"] = setup.contingency_epsilon();
    if (!setup.detector_chain().empty()) {
        auto &chain = doc["detector_chain"] = nlohmann::ordered_json::array();
        for (const auto &detector : setup.detector_chain()) {
            chain.push_back(detector_to_json(detector));
        }
    }
    return doc;
}

double arrival_time(const Setup &setup, const Absorber &absorber) {
    return setup.source().emission_time + absorber.distance / setup.source().speed;
}

bool predicate_holds(const ContingencyPredicate &predicate, const History &history) {
    if (predicate.kind == ContingencyPredicate::Kind::Always) {
        return true;
    }
    auto it = history.firing_times.find(predicate.ref);
    bool fired_in_time = it != history.firing_times.end() && it->second.has_value() && *it->second <= predicate.by;
    return predicate.kind == ContingencyPredicate::Kind::Fired ? fired_in_time : !fired_in_time;
}

const Absorber *first_absorber(const Setup &setup, const Channel &channel, const History &history) {
    const Absorber *best = nullptr;
    for (const auto &absorber : setup.absorbers()) {
        if (absorber.channel != channel.name || !history.is_active(absorber.name)) {
            continue;
        }
        if (best == nullptr || absorber.distance < best->distance) {
            best = &absorber;
        }
    }
    return best;
}

}  // namespace tisim
