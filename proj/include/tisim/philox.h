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

#ifndef TISIM_PHILOX_H
#define TISIM_PHILOX_H

#include <array>
#include <cstdint>

namespace tisim {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2,
/// 3", SC'11). A keyed bijection on 128-bit counters; output i of key k is
/// independent of every other (k, i) pair, so streams can be split by index
/// without any shared state.
class Philox4x32 {
   public:
    using Counter = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static constexpr Counter generate(Counter counter, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            uint64_t p0 = uint64_t{kMultiplier0} * counter[0];
            uint64_t p1 = uint64_t{kMultiplier1} * counter[2];
            auto hi0 = static_cast<uint32_t>(p0 >> 32);
            auto lo0 = static_cast<uint32_t>(p0);
            auto hi1 = static_cast<uint32_t>(p1 >> 32);
            auto lo1 = static_cast<uint32_t>(p1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
        }
        return counter;
    }

   private:
    static constexpr uint32_t kMultiplier0 = 0xD2511F53;
    static constexpr uint32_t kMultiplier1 = 0xCD9E8D57;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85;
};

}  // namespace tisim

#endif  // TISIM_PHILOX_H
