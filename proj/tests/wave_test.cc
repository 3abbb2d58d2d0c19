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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "support/random_setup.h"
#include "tisim/canonical.h"
#include "tisim/consistency.h"
#include "tisim/errors.h"

using namespace tisim;

namespace {

const History &history_with_outcome(const std::vector<History> &histories, std::string_view outcome) {
    for (const auto &h : histories) {
        if (h.outcome_channel == outcome) {
            return h;
        }
    }
    throw std::logic_error("no such history");
}

}  // namespace

TEST(OfferAmplitude, detector_a_always_receives_half_amplitude) {
    for (auto boundary : {BoundaryCondition::Open, BoundaryCondition::PerfectAbsorber}) {
        auto setup = canonical::maudlin(boundary);
        for (const auto &h : enumerate_histories(setup)) {
            auto offer = offer_amplitude(setup, h, "A");
            EXPECT_NEAR(offer.value.real(), 1 / std::sqrt(2.0), 1e-15);
            EXPECT_EQ(offer.value.imag(), 0.0);
            EXPECT_DOUBLE_EQ(offer.arrival, 1.001);
        }
    }
}

TEST(OfferAmplitude, shadowed_absorber_gets_nothing) {
    auto setup = canonical::maudlin_with_c(BoundaryCondition::Open);
    auto histories = enumerate_histories(setup);
    const auto &swung = history_with_outcome(histories, "L");
    ASSERT_TRUE(swung.is_active("B"));
    EXPECT_EQ(offer_amplitude(setup, swung, "C").value, Amplitude(0.0, 0.0));
    // When B stays put the offer on L reaches C.
    const auto &not_swung = history_with_outcome(histories, "R");
    EXPECT_NEAR(std::abs(offer_amplitude(setup, not_swung, "C").value), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(offer_amplitude(setup, not_swung, "B").value, Amplitude(0.0, 0.0));
}

TEST(OfferAmplitude, identity_and_unknown) {
    auto doc = canonical::maudlin_document(BoundaryCondition::Open);
    doc["channels"] = nlohmann::json::parse(R"([{"name": "L", "direction": -1, "amplitude": {"re": 1, "im": 0}}])");
    doc["absorbers"] = nlohmann::json::parse(
        R"([{"name": "D", "channel": "L", "distance": 1, "activation": {"kind": "always"}}])");
    auto setup = build_scenario(doc);
    auto h = enumerate_histories(setup).at(0);
    EXPECT_EQ(offer_amplitude(setup, h, "D").value, Amplitude(1.0, 0.0));
    EXPECT_THROW(offer_amplitude(setup, h, "nobody"), UnknownAbsorber);
}

TEST(ConfirmationStrength, modulus_squared) {
    EXPECT_NEAR(confirmation_strength({"A", {1 / std::sqrt(2.0), 0.0}, 0.0}).value, 0.5, 1e-15);
    EXPECT_EQ(confirmation_strength({"A", {0.0, 0.0}, 0.0}).value, 0.0);
    // 0.36 + 0.64
    EXPECT_NEAR(confirmation_strength({"A", {0.6, 0.8}, 0.0}).value, 1.0, 1e-15);
}

TEST(EchoProfile, perfect_boundary_credits_unabsorbed_channel) {
    auto setup = canonical::maudlin(BoundaryCondition::PerfectAbsorber);
    const auto &h = history_with_outcome(enumerate_histories(setup), "R");
    ASSERT_FALSE(h.is_active("B"));
    auto profile = echo_profile(setup, h);
    EXPECT_NEAR(profile.at("L"), 0.5, 1e-15);
    EXPECT_NEAR(profile.at("R"), 0.5, 1e-15);
    EXPECT_EQ(profile.deficit, 0.0);
}

TEST(EchoProfile, open_boundary_leaves_deficit) {
    auto setup = canonical::maudlin(BoundaryCondition::Open);
    const auto &h = history_with_outcome(enumerate_histories(setup), "R");
    auto profile = echo_profile(setup, h);
    EXPECT_EQ(profile.at("L"), 0.0);
    EXPECT_NEAR(profile.at("R"), 0.5, 1e-15);
    EXPECT_NEAR(profile.deficit, 0.5, 1e-15);
}

TEST(EchoProfile, renninger_solid_angle_weights) {
    double omega1 = std::numbers::pi;
    auto setup = canonical::renninger(omega1);
    for (const auto &h : enumerate_histories(setup)) {
        auto profile = echo_profile(setup, h);
        EXPECT_NEAR(profile.at("E1"), omega1 / (4 * std::numbers::pi), 1e-12);
        EXPECT_NEAR(profile.at("E2"), 1 - omega1 / (4 * std::numbers::pi), 1e-12);
    }
}

TEST(EchoProfile, history_invariant_under_closing_boundaries) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i) {
        auto boundary = i % 2 ? BoundaryCondition::PerfectAbsorber : BoundaryCondition::BigBangReflector;
        auto setup = tisim::testing::random_setup(rng, {.boundary = boundary});
        auto histories = enumerate_histories(setup);
        if (histories.empty()) {
            continue;
        }
        auto reference = echo_profile(setup, histories.front());
        for (const auto &h : histories) {
            auto profile = echo_profile(setup, h);
            for (std::size_t c = 0; c < profile.per_channel.size(); ++c) {
                EXPECT_NEAR(profile.per_channel[c].second, reference.per_channel[c].second, 1e-12);
            }
        }
    }
}

TEST(EchoProfile, conservation) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 500; ++i) {
        auto setup = tisim::testing::random_setup(rng);
        for (const auto &h : enumerate_histories(setup)) {
            auto profile = echo_profile(setup, h);
            EXPECT_NEAR(profile.confirmed() + profile.deficit, 1.0, 1e-12);
        }
    }
}

TEST(EchoProfile, global_phase_invariance) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 200; ++i) {
        auto doc = tisim::testing::random_scenario_document(rng);
        auto setup = build_scenario(doc);
        auto phase = std::polar(1.0, angle(rng));
        for (auto &channel : doc["channels"]) {
            Amplitude a{channel["amplitude"]["re"].get<double>(), channel["amplitude"]["im"].get<double>()};
            a *= phase;
            channel["amplitude"] = {{"re", a.real()}, {"im", a.imag()}};
        }
        auto rotated = build_scenario(doc);
        auto histories = enumerate_histories(setup);
        ASSERT_EQ(histories, enumerate_histories(rotated));
        for (const auto &h : histories) {
            auto p = echo_profile(setup, h);
            auto q = echo_profile(rotated, h);
            for (std::size_t c = 0; c < p.per_channel.size(); ++c) {
                EXPECT_NEAR(p.per_channel[c].second, q.per_channel[c].second, 1e-12);
            }
            EXPECT_NEAR(p.deficit, q.deficit, 1e-12);
        }
    }
}

TEST(AdvancedLedger, perfect_boundary_cancels_everywhere) {
    auto setup = canonical::maudlin(BoundaryCondition::PerfectAbsorber);
    for (const auto &h : enumerate_histories(setup)) {
        auto ledger = advanced_ledger(setup, h);
        ASSERT_EQ(ledger.regions.size(), 2u);
        for (const auto &region : ledger.regions) {
            EXPECT_LE(region.t_end, setup.source().emission_time);
            EXPECT_LT(std::abs(region.net), 1e-12);
        }
    }
}

TEST(AdvancedLedger, open_boundary_leaves_left_residual_when_a_fires) {
    auto setup = canonical::maudlin(BoundaryCondition::Open);
    auto histories = enumerate_histories(setup);
    const auto &a_fires = history_with_outcome(histories, "R");
    auto ledger = advanced_ledger(setup, a_fires);
    for (const auto &region : ledger.regions) {
        if (region.channel == "L") {
            EXPECT_NEAR(std::abs(region.net), 1 / std::sqrt(2.0), 1e-15);
        } else {
            EXPECT_LT(std::abs(region.net), 1e-12);
        }
    }
    // When B swings, both components are cancelled.
    EXPECT_LT(advanced_ledger(setup, history_with_outcome(histories, "L")).max_residual(), 1e-12);
}

TEST(AdvancedLedger, big_bang_reflection_is_phase_inverted) {
    auto setup = canonical::maudlin(BoundaryCondition::BigBangReflector);
    const auto &h = history_with_outcome(enumerate_histories(setup), "R");
    auto ledger = advanced_ledger(setup, h);
    for (const auto &region : ledger.regions) {
        EXPECT_EQ(region.t_start, 0.0);
        Amplitude before_reflection{0.0, 0.0};
        const LedgerComponent *reflection = nullptr;
        for (const auto &component : region.components) {
            if (component.kind == LedgerComponentKind::BigBangReflection) {
                reflection = &component;
            } else {
                before_reflection += component.amplitude;
            }
        }
        ASSERT_NE(reflection, nullptr);
        EXPECT_EQ(reflection->amplitude, -before_reflection);
        EXPECT_LT(std::abs(region.net), 1e-12);
    }
}

TEST(AdvancedLedger, randomized_cancellation_and_open_residual) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 600; ++i) {
        auto setup = tisim::testing::random_setup(rng);
        for (const auto &h : enumerate_histories(setup)) {
            auto ledger = advanced_ledger(setup, h);
            if (setup.boundary() != BoundaryCondition::Open) {
                EXPECT_LT(ledger.max_residual(), 1e-12);
                continue;
            }
            // Open: the residual is exactly the unconfirmed advanced component.
            auto profile = echo_profile(setup, h);
            double residual_weight = 0.0;
            for (const auto &region : ledger.regions) {
                residual_weight += std::norm(region.net);
            }
            EXPECT_NEAR(residual_weight, profile.deficit, 1e-12);
        }
    }
}

TEST(AdvancedLedger, json_shape) {
    auto setup = canonical::maudlin(BoundaryCondition::Open);
    auto json = ledger_to_json(advanced_ledger(setup, enumerate_histories(setup).at(0)));
    ASSERT_TRUE(json.is_array());
    for (const auto &row : json) {
        for (auto key : {"t_start", "t_end", "channel", "net_re", "net_im"}) {
            EXPECT_TRUE(row.contains(key)) << key;
        }
    }
}
