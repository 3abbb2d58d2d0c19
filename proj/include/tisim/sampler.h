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

#ifndef TISIM_SAMPLER_H
#define TISIM_SAMPLER_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tisim/philox.h"
#include "tisim/scenario.h"
#include "tisim/wave.h"

namespace tisim {

/// Random stream of one trial. Draw j of trial i under seed s is
/// Philox4x32-10 with key (s_lo, s_hi) applied to counter (i_lo, i_hi, j, 0).
class TrialStream {
   public:
    TrialStream(uint64_t seed, uint64_t trial_index);

    /// Uniform double in [0, 1) with 53 random bits.
    double next_uniform();

   private:
    Philox4x32::Key key_;
    uint64_t trial_index_;
    uint32_t draw_ = 0;
};

/// Inverse CDF over the channels in declared order: picks the first channel k
/// with u * total < cumulative_k. A draw exactly on a boundary goes to the
/// later channel. Throws DeficitPresent if the profile has unconfirmed weight.
std::string sample_outcome(const EchoProfile &profile, double u);
std::string sample_outcome(const EchoProfile &profile, TrialStream &stream);

struct TrialRecord {
    uint64_t trial_index = 0;
    std::string outcome_channel;
    std::string completing_absorber;
    std::shared_ptr<const History> history;  // shared by every trial with the same outcome
};

struct TrialBatch {
    std::string setup_label;
    uint64_t seed = 0;
    std::vector<TrialRecord> trials;
    /// count / |trials| per channel in declared order; empty when there are no trials.
    std::vector<std::pair<std::string, double>> frequencies;

    double frequency(std::string_view channel) const;
    /// Outcome counts in declared channel order.
    std::vector<std::pair<std::string, std::size_t>> counts() const;
    /// channel -> completing absorber -> count.
    std::map<std::string, std::map<std::string, std::size_t>> completions() const;
};

/// Runs n independent trials. The result is a pure function of
/// (setup, n, seed); `threads` only changes how the work is split.
/// Throws NotWellPosed.
TrialBatch run_trials(const Setup &setup, std::size_t n, uint64_t seed, unsigned threads = 1);

/// Summary plus, when include_records is set, one entry per trial.
nlohmann::ordered_json batch_to_json(const Setup &setup, const TrialBatch &batch, bool include_records);

/// One row per trial: index,outcome,absorber.
void write_batch_csv(std::ostream &out, const TrialBatch &batch);

}  // namespace tisim

#endif  // TISIM_SAMPLER_H
