// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

namespace onebit {

using RandomEngine = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate (seed, index) pairs.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent engine for trial `index`, depending only on (master_seed, index).
[[nodiscard]] inline RandomEngine trial_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomEngine(mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace onebit
