/*
 * Copyright (c) 2026, The vselect Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vselect {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of stream `counter` split from `master`. Pure function of its inputs,
/// so work items can run in any order or on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
    return mix64(master ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

/**
 * Portable generator. Bounded integers and unit reals are produced here
 * rather than with <random> distributions, whose output is
 * implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// m distinct indices from [0, n), uniformly over ordered selections.
std::vector<int> random_distinct(Rng& rng, int n, int m);

/// Uniformly random permutation of [0, n).
std::vector<int> random_permutation(Rng& rng, int n);

}  // namespace vselect
