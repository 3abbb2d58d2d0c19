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

#include "tisim/sampler.h"

#include <algorithm>
#include <thread>

#include "tisim/consistency.h"
#include "tisim/csv.h"
#include "tisim/errors.h"

namespace tisim {

TrialStream::TrialStream(uint64_t seed, uint64_t trial_index)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)}, trial_index_(trial_index) {}

double TrialStream::next_uniform() {
    Philox4x32::Counter counter{static_cast<uint32_t>(trial_index_), static_cast<uint32_t>(trial_index_ >> 32),
                                draw_++, 0};
    auto out = Philox4x32::generate(counter, key_);
    uint64_t bits = (uint64_t{out[0]} << 32 | out[1]) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

std::string sample_outcome(const EchoProfile &profile, double u) {
    if (profile.deficit > kTolerance) {
        throw DeficitPresent("echo profile has unconfirmed weight " + std::to_string(profile.deficit) +
                             "; the setup is not well posed under its boundary");
    }
    double total = profile.confirmed();
    double target = u * total;
    double cumulative = 0.0;
    const std::string *last_positive = nullptr;
    for (const auto &[channel, value] : profile.per_channel) {
        if (value <= 0.0) {
            continue;
        }
        cumulative += value;
        last_positive = &channel;
        if (target < cumulative) {
            return channel;
        }
    }
    if (last_positive == nullptr) {
        throw DeficitPresent("echo profile confirms no channel");
    }
    // Rounding can leave u * total a hair above the last cumulative sum.
    return *last_positive;
}

std::string sample_outcome(const EchoProfile &profile, TrialStream &stream) {
    return sample_outcome(profile, stream.next_uniform());
}

double TrialBatch::frequency(std::string_view channel) const {
    for (const auto &[name, value] : frequencies) {
        if (name == channel) {
            return value;
        }
    }
    return 0.0;
}

std::vector<std::pair<std::string, std::size_t>> TrialBatch::counts() const {
    std::vector<std::pair<std::string, std::size_t>> out;
    for (const auto &[name, _] : frequencies) {
        out.emplace_back(name, 0);
    }
    for (const auto &record : trials) {
        for (auto &[name, count] : out) {
            if (name == record.outcome_channel) {
                ++count;
                break;
            }
        }
    }
    return out;
}

std::map<std::string, std::map<std::string, std::size_t>> TrialBatch::completions() const {
    std::map<std::string, std::map<std::string, std::size_t>> out;
    for (const auto &record : trials) {
        ++out[record.outcome_channel][record.completing_absorber];
    }
    return out;
}

TrialBatch run_trials(const Setup &setup, std::size_t n, uint64_t seed, unsigned threads) {
    auto report = classify(setup);
    if (!report.well_posed()) {
        const auto &first = report.reasons.front();
        throw NotWellPosed("setup '" + setup.label() + "' is pathological: " + std::string(pathology_name(first.kind)) +
                           "(" + first.channel + ")");
    }

    TrialBatch batch;
    batch.setup_label = setup.label();
    batch.seed = seed;
    if (n == 0) {
        return batch;
    }

    // Well-posedness makes the echo profile identical across histories, so
    // any one of them describes what the source sees at emission.
    EchoProfile profile = echo_profile(setup, report.histories.front());
    std::map<std::string, std::pair<std::string, std::shared_ptr<const History>>> by_outcome;
    for (const auto &history : report.histories) {
        by_outcome[history.outcome_channel] = {history.firing_absorber(), std::make_shared<const History>(history)};
    }

    batch.trials.resize(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            TrialStream stream(seed, i);
            auto outcome = sample_outcome(profile, stream);
            const auto &[absorber, history] = by_outcome.at(outcome);
            batch.trials[i] = {i, std::move(outcome), absorber, history};
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(n, 64))));
    if (threads == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> workers;
        std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            workers.emplace_back(work, begin, std::min(n, begin + chunk));
        }
    }

    std::vector<std::size_t> counts(setup.channels().size(), 0);
    for (const auto &record : batch.trials) {
        ++counts[*setup.channel_index(record.outcome_channel)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        batch.frequencies.emplace_back(setup.channels()[c].name,
                                       static_cast<double>(counts[c]) / static_cast<double>(n));
    }
    return batch;
}

nlohmann::ordered_json batch_to_json(const Setup &setup, const TrialBatch &batch, bool include_records) {
    nlohmann::ordered_json out;
    out["setup_label"] = batch.setup_label;
    out["seed"] = batch.seed;
    out["trials"] = batch.trials.size();
    auto &frequencies = out["frequencies"] = nlohmann::ordered_json::object();
    for (const auto &[channel, value] : batch.frequencies) {
        frequencies[channel] = value;
    }
    auto &completions = out["completions"] = nlohmann::ordered_json::object();
    auto table = batch.completions();
    for (const auto &channel : setup.channels()) {
        if (auto found = table.find(channel.name); found != table.end()) {
            auto &row = completions[channel.name] = nlohmann::ordered_json::object();
            for (const auto &[absorber, count] : found->second) {
                row[absorber] = count;
            }
        }
    }
    if (include_records) {
        auto &records = out["records"] = nlohmann::ordered_json::array();
        for (const auto &record : batch.trials) {
            records.push_back({{"index", record.trial_index},
                               {"outcome", record.outcome_channel},
                               {"absorber", record.completing_absorber}});
        }
    }
    return out;
}

void write_batch_csv(std::ostream &out, const TrialBatch &batch) {
    write_csv_row(out, {"index", "outcome", "absorber"});
    for (const auto &record : batch.trials) {
        write_csv_row(out, {std::to_string(record.trial_index), record.outcome_channel, record.completing_absorber});
    }
}

}  // namespace tisim
