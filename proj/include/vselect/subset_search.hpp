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

#include "vselect/linalg.hpp"

#include <cstdint>
#include <vector>

namespace vselect {

struct SearchResult {
    FeatureSubset subset;  // ascending
    double cost = 0.0;
    int iterations = 0;    // sweeps (alternating optimization) or subsets scored (exhaustive)
    bool converged = false;
    int restarts_used = 0;
    /// Cost after every coordinate update, when requested.
    std::vector<double> cost_history;  // initial cost, then one entry per coordinate update
};

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 2'000'000;
inline constexpr int kDefaultMaxSweeps = 100;
inline constexpr int kDefaultRestarts = 1000;

/// Number of size-m subsets of r features; saturates at UINT64_MAX.
std::uint64_t binomial(int r, int m);

/// Global minimum over all size-m subsets, ties to the lexicographically
/// smallest ascending subset. Throws BudgetExceededError when C(R, m) > budget.
SearchResult exhaustive_best_subset(const Dataset& dataset, int m, const CostParams& cost = {},
                                    std::uint64_t budget = kDefaultExhaustiveBudget);

struct AlternatingOptions {
    int max_sweeps = kDefaultMaxSweeps;
    CostParams cost;
    bool record_history = false;
};

/**
 * Cyclic coordinate-wise exact minimization. Position j is replaced by the
 * best index not used at any other position; the current index is kept
 * unless a candidate is strictly cheaper. Stops after a sweep without
 * changes or after max_sweeps sweeps.
 */
SearchResult alternating_optimization(const Dataset& dataset, const FeatureSubset& init,
                                      const AlternatingOptions& options = {});

struct RestartOptions {
    int runs = kDefaultRestarts;
    std::uint64_t seed = 0;
    AlternatingOptions alternating;
    unsigned threads = 1;
};

/// Best of `runs` alternating optimizations from seeded uniform
/// initializations. Run k uses derive_seed(seed, k), so the result does not
/// depend on thread count and a prefix of runs is reproducible.
SearchResult multi_restart_search(const Dataset& dataset, int m, const RestartOptions& options);

/// Initialization used by run `run` of multi_restart_search.
FeatureSubset restart_init(int n_features, int m, std::uint64_t seed, int run);

}  // namespace vselect
