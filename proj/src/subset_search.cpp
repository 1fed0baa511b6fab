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

#include "vselect/subset_search.hpp"

#include "vselect/error.hpp"
#include "vselect/parallel.hpp"
#include "vselect/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

namespace vselect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(const Dataset& ds, int m) {
    if (m < 1 || m > ds.n_features()) {
        throw ValidationError("subset size m = " + std::to_string(m) + " outside [1, " +
                              std::to_string(ds.n_features()) + "]");
    }
}

// Cost of the set {indices}; evaluated on ascending columns so that the
// same set always yields the same bits regardless of position order.
double set_cost(const Dataset& ds, std::vector<int> indices, const CostParams& cost) {
    std::sort(indices.begin(), indices.end());
    const auto c = try_subset_cost(ds, FeatureSubset(std::move(indices)), cost);
    return c ? *c : kInf;
}

bool better(double cost_a, const FeatureSubset& a, double cost_b, const FeatureSubset& b) {
    if (cost_a != cost_b) return cost_a < cost_b;
    return a.indices() < b.indices();
}

}  // namespace

std::uint64_t binomial(int r, int m) {
    if (m < 0 || m > r) return 0;
    m = std::min(m, r - m);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= m; ++i) {
        acc = acc * static_cast<unsigned>(r - m + i) / static_cast<unsigned>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

SearchResult exhaustive_best_subset(const Dataset& ds, int m, const CostParams& cost, std::uint64_t budget) {
    check_size(ds, m);
    const int r = ds.n_features();
    const auto count = binomial(r, m);
    if (count > budget) {
        throw BudgetExceededError("exhaustive search over C(" + std::to_string(r) + ", " + std::to_string(m) +
                                  ") = " + std::to_string(count) + " subsets exceeds the budget of " +
                                  std::to_string(budget));
    }

    std::vector<int> combo(static_cast<std::size_t>(m));
    std::iota(combo.begin(), combo.end(), 0);
    std::optional<std::vector<int>> best;
    double best_cost = kInf;
    int scored = 0;
    for (;;) {
        const double c = set_cost(ds, combo, cost);
        ++scored;
        // Lexicographic enumeration: strict comparison keeps the smallest subset on ties.
        if (c < best_cost) {
            best_cost = c;
            best = combo;
        }
        int i = m - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == r - m + i) --i;
        if (i < 0) break;
        ++combo[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (!best) throw DegenerateStepError("every subset of size " + std::to_string(m) + " is rank deficient");

    SearchResult out;
    out.subset = FeatureSubset(std::move(*best));
    out.cost = best_cost;
    out.iterations = scored;
    out.converged = true;
    return out;
}

SearchResult alternating_optimization(const Dataset& ds, const FeatureSubset& init,
                                      const AlternatingOptions& options) {
    check_size(ds, init.size());
    init.validate(ds.n_features());
    if (options.max_sweeps < 1) throw ValidationError("max_sweeps must be at least 1");

    const int r = ds.n_features();
    const int m = init.size();
    std::vector<int> state = init.indices();
    double current = set_cost(ds, state, options.cost);

    SearchResult out;
    if (options.record_history) out.cost_history.push_back(current);
    std::vector<bool> used(static_cast<std::size_t>(r), false);
    for (int k : state) used[static_cast<std::size_t>(k)] = true;

    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        bool changed = false;
        for (int j = 0; j < m; ++j) {
            const int held = state[static_cast<std::size_t>(j)];
            int best_k = held;
            double best_cost = current;
            for (int k = 0; k < r; ++k) {
                if (used[static_cast<std::size_t>(k)]) continue;
                state[static_cast<std::size_t>(j)] = k;
                const double c = set_cost(ds, state, options.cost);
                if (c < best_cost) {
                    best_cost = c;
                    best_k = k;
                }
            }
            state[static_cast<std::size_t>(j)] = best_k;
            if (best_k != held) {
                used[static_cast<std::size_t>(held)] = false;
                used[static_cast<std::size_t>(best_k)] = true;
                current = best_cost;
                changed = true;
            }
            if (options.record_history) out.cost_history.push_back(current);
        }
        out.iterations = sweep;
        if (current == kInf) {
            throw DegenerateStepError("alternating optimization found no full-rank subset of size " +
                                      std::to_string(m));
        }
        if (!changed) {
            out.converged = true;
            break;
        }
    }

    out.subset = FeatureSubset(state).sorted();
    out.cost = current;
    out.restarts_used = 1;
    return out;
}

FeatureSubset restart_init(int n_features, int m, std::uint64_t seed, int run) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
    return FeatureSubset(random_distinct(rng, n_features, m));
}

SearchResult multi_restart_search(const Dataset& ds, int m, const RestartOptions& options) {
    check_size(ds, m);
    if (options.runs < 1) throw ValidationError("runs must be at least 1");

    std::vector<SearchResult> results(static_cast<std::size_t>(options.runs));
    parallel_for(results.size(), options.threads, [&](std::size_t run) {
        const auto init = restart_init(ds.n_features(), m, options.seed, static_cast<int>(run));
        results[run] = alternating_optimization(ds, init, options.alternating);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (better(results[i].cost, results[i].subset, results[best].cost, results[best].subset)) best = i;
    }
    SearchResult out = std::move(results[best]);
    out.restarts_used = options.runs;
    return out;
}

}  // namespace vselect
