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

#ifndef TISIM_SCENARIO_H
#define TISIM_SCENARIO_H

#include <complex>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tisim/entanglement.h"

namespace tisim {

using Amplitude = std::complex<double>;

/// Absolute tolerance for amplitude and probability comparisons.
inline constexpr double kTolerance = 1e-12;
/// Default slack after the referenced absorber's arrival time for `by`.
inline constexpr double kDefaultContingencyEpsilon = 1e-6;
/// Distance of the stand-in boundary absorber, in meters.
inline constexpr double kDefaultHorizon = 1e6;
/// Name reported when the boundary stand-in completes a transaction.
inline constexpr std::string_view kBoundaryAbsorber = "boundary";

enum class BoundaryCondition { Open, PerfectAbsorber, BigBangReflector };

std::string_view boundary_name(BoundaryCondition boundary);
BoundaryCondition parse_boundary(std::string_view name);

struct Source {
    double emission_time = 0.0;  // seconds
    double speed = 1.0;          // m/s
    double position = 0.0;       // meters

    bool operator==(const Source &) const = default;
};

/// Either a signed unit (-1 left, +1 right) or a named solid-angle sector.
using Direction = std::variant<int, std::string>;

struct Channel {
    std::string name;
    Direction direction;
    Amplitude amplitude;

    /// Born weight |c|^2.
    double weight() const { return std::norm(amplitude); }

    bool operator==(const Channel &) const = default;
};

struct ContingencyPredicate {
    enum class Kind { Always, NotFired, Fired };

    Kind kind = Kind::Always;
    std::string ref;  // referenced absorber; empty for Always
    double by = 0.0;  // deadline; unused for Always

    static ContingencyPredicate always() { return {}; }
    static ContingencyPredicate not_fired(std::string ref, double by) { return {Kind::NotFired, std::move(ref), by}; }
    static ContingencyPredicate fired(std::string ref, double by) { return {Kind::Fired, std::move(ref), by}; }

    bool operator==(const ContingencyPredicate &) const = default;
};

struct Absorber {
    std::string name;
    std::string channel;
    double distance = 1.0;  // meters from the source along the channel
    ContingencyPredicate activation;

    bool operator==(const Absorber &) const = default;
};

/// One complete space-time account of a run: which absorbers are in place,
/// where the particle went, and who absorbed it when. Exactly one entity
/// fires: either one real absorber (its entry in firing_times is set) or the
/// boundary stand-in (boundary_firing_time is set).
struct History {
    std::map<std::string, bool> activations;
    std::string outcome_channel;
    std::map<std::string, std::optional<double>> firing_times;
    std::optional<double> boundary_firing_time;

    /// Name of the firing absorber, or kBoundaryAbsorber.
    std::string firing_absorber() const;
    bool is_active(std::string_view absorber) const;

    bool operator==(const History &) const = default;
};

/// Immutable experiment description. Only build_scenario creates one, so every
/// instance satisfies the type invariants.
class Setup {
   public:
    const std::string &label() const { return label_; }
    const Source &source() const { return source_; }
    const std::vector<Channel> &channels() const { return channels_; }
    const std::vector<Absorber> &absorbers() const { return absorbers_; }
    BoundaryCondition boundary() const { return boundary_; }
    double horizon() const { return horizon_; }
    double contingency_epsilon() const { return epsilon_; }
    const std::vector<Detector> &detector_chain() const { return detector_chain_; }

    const Channel *find_channel(std::string_view name) const;
    const Absorber *find_absorber(std::string_view name) const;
    std::optional<std::size_t> channel_index(std::string_view name) const;
    std::optional<std::size_t> absorber_index(std::string_view name) const;

    /// Same experiment under another long-distance boundary condition.
    Setup with_boundary(BoundaryCondition boundary) const;

    bool operator==(const Setup &) const = default;

   private:
    friend Setup build_scenario(const nlohmann::json &document);

    Setup() = default;

    std::string label_;
    Source source_;
    std::vector<Channel> channels_;
    std::vector<Absorber> absorbers_;
    BoundaryCondition boundary_ = BoundaryCondition::Open;
    double horizon_ = kDefaultHorizon;
    double epsilon_ = kDefaultContingencyEpsilon;
    std::vector<Detector> detector_chain_;
};

/// Validates a scenario document and builds the Setup.
///
/// Throws SchemaError for missing, unknown or mistyped keys and duplicate
/// names; NormalizationError when the channel weights do not sum to 1;
/// DanglingReference when an absorber or predicate names something undefined;
/// PredicateCycle when predicates reference each other in a loop; RangeError
/// for out-of-range values (non-positive speed or distance, |c| > 1, a
/// deadline before emission, a Big Bang boundary with t0 <= 0).
Setup build_scenario(const nlohmann::json &document);

/// Reads and builds a scenario file. Throws IoError if it cannot be read and
/// SchemaError if it is not JSON.
Setup load_scenario_file(const std::filesystem::path &path);

/// Inverse of build_scenario. Defaulted `by` deadlines are written explicitly.
nlohmann::ordered_json scenario_to_json(const Setup &setup);

/// t0 + R / v.
double arrival_time(const Setup &setup, const Absorber &absorber);

/// Evaluates a predicate against the completed firing record of `history`.
bool predicate_holds(const ContingencyPredicate &predicate, const History &history);

/// The active absorber nearest the source on `channel`, or nullptr when none
/// is active. Ties in distance go to the earlier declared absorber.
const Absorber *first_absorber(const Setup &setup, const Channel &channel, const History &history);

}  // namespace tisim

#endif  // TISIM_SCENARIO_H
