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

#include "vselect/gibbs.hpp"

#include "vselect/error.hpp"
#include "vselect/parallel.hpp"
#include "vselect/random.hpp"
#include "vselect/subset_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vselect {

namespace {

// Entries kept before the memo is flushed.
constexpr std::size_t kCacheCapacity = std::size_t{1} << 20;

}  // namespace

void GibbsConfig::validate(int n_features) const {
    if (m < 1 || m > n_features) {
        throw ValidationError("Gibbs subset size m = " + std::to_string(m) + " outside [1, " +
                              std::to_string(n_features) + "]");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive and finite");
    if (sweeps < 1) throw ValidationError("sweeps must be at least 1");
    const int b = resolved_burn_in();
    if (b < 0 || b >= sweeps) throw ValidationError("burn-in must lie in [0, sweeps)");
}

std::size_t CostCache::Hash::operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int x : v) h = mix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
}

std::optional<double> CostCache::cost(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    if (auto it = table_.find(indices); it != table_.end()) {
        if (std::isnan(it->second)) return std::nullopt;
        return it->second;
    }
    const auto c = try_subset_cost(*dataset_, FeatureSubset(indices), cost_);
    if (table_.size() >= kCacheCapacity) table_.clear();
    table_.emplace(std::move(indices), c ? *c : std::numeric_limits<double>::quiet_NaN());
    return c;
}

ConditionalWeights full_conditional_weights(const Dataset& ds, const FeatureSubset& state, int position,
                                            double eta, const CostParams& cost, CostCache* cache) {
    state.validate(ds.n_features());
    if (position < 0 || position >= state.size()) {
        throw ValidationError("position " + std::to_string(position + 1) + " outside [1, " +
                              std::to_string(state.size()) + "]");
    }
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");

    CostCache local(ds, cost);
    CostCache& memo = cache ? *cache : local;

    ConditionalWeights out;
    std::vector<double> exponents;
    std::vector<int> trial = state.indices();
    for (int k = 0; k < ds.n_features(); ++k) {
        bool taken = false;
        for (int j = 0; j < state.size(); ++j) taken |= (j != position && state[j] == k);
        if (taken) continue;
        trial[static_cast<std::size_t>(position)] = k;
        const auto c = memo.cost(trial);
        out.candidates.push_back(k);
        exponents.push_back(c ? -eta * *c : -std::numeric_limits<double>::infinity());
    }

    const double top = *std::max_element(exponents.begin(), exponents.end());
    if (!std::isfinite(top)) {
        throw DegenerateStepError("every candidate at position " + std::to_string(position + 1) +
                                  " is rank deficient");
    }
    double total = 0.0;
    out.weights.reserve(exponents.size());
    for (double e : exponents) {
        const double w = std::isfinite(e) ? std::exp(e - top) : 0.0;
        out.weights.push_back(w);
        total += w;
    }
    for (double& w : out.weights) w /= total;
    return out;
}

GibbsChain gibbs_run(const Dataset& ds, const GibbsConfig& config) {
    config.validate(ds.n_features());
    Rng rng(config.seed);
    CostCache cache(ds, config.cost);

    GibbsChain chain;
    chain.n_features = ds.n_features();
    chain.states.reserve(static_cast<std::size_t>(config.sweeps));
    chain.costs.reserve(static_cast<std::size_t>(config.sweeps));

    std::vector<int> state = random_distinct(rng, ds.n_features(), config.m);
    for (int t = 0; t < config.sweeps; ++t) {
        for (int j = 0; j < config.m; ++j) {
            const auto cond = full_conditional_weights(ds, FeatureSubset(state), j, config.eta, config.cost, &cache);
            const double u = rng.uniform01();
            double cumulative = 0.0;
            std::size_t pick = cond.candidates.size();
            for (std::size_t i = 0; i < cond.candidates.size(); ++i) {
                if (cond.weights[i] <= 0.0) continue;
                cumulative += cond.weights[i];
                pick = i;
                if (u < cumulative) break;
            }
            state[static_cast<std::size_t>(j)] = cond.candidates[pick];
        }
        const auto c = cache.cost(state);
        chain.states.emplace_back(state);
        chain.costs.push_back(c ? *c : std::numeric_limits<double>::infinity());
    }
    return chain;
}

InclusionProfile inclusion_frequencies(const GibbsChain& chain, int burn_in) {
    const auto total = static_cast<long long>(chain.states.size());
    if (burn_in < 0 || burn_in >= total) {
        throw ValidationError("burn-in " + std::to_string(burn_in) + " must lie in [0, " +
                              std::to_string(total) + ")");
    }
    std::vector<long long> counts(static_cast<std::size_t>(chain.n_features), 0);
    for (auto t = static_cast<std::size_t>(burn_in); t < chain.states.size(); ++t) {
        for (int k : chain.states[t].indices()) ++counts[static_cast<std::size_t>(k)];
    }
    InclusionProfile out;
    out.retained_states = total - burn_in;
    out.uniform_reference = 1.0 / chain.n_features;
    for (long long c : counts) {
        out.probabilities.push_back(static_cast<double>(c) / static_cast<double>(out.retained_states));
    }
    return out;
}

InclusionProfile pooled_inclusion(const Dataset& ds, const GibbsConfig& config, int chains, unsigned threads) {
    if (chains < 1) throw ValidationError("chains must be at least 1");
    config.validate(ds.n_features());
    std::vector<GibbsChain> runs(static_cast<std::size_t>(chains));
    parallel_for(runs.size(), threads, [&](std::size_t c) {
        GibbsConfig local = config;
        local.seed = chains == 1 ? config.seed : derive_seed(config.seed, c);
        runs[c] = gibbs_run(ds, local);
    });

    const int burn_in = config.resolved_burn_in();
    std::vector<long long> counts(static_cast<std::size_t>(ds.n_features()), 0);
    long long retained = 0;
    for (const auto& chain : runs) {
        for (auto t = static_cast<std::size_t>(burn_in); t < chain.states.size(); ++t) {
            for (int k : chain.states[t].indices()) ++counts[static_cast<std::size_t>(k)];
            ++retained;
        }
    }
    InclusionProfile out;
    out.retained_states = retained;
    out.uniform_reference = 1.0 / ds.n_features();
    out.pooled = chains > 1;
    for (long long c : counts) out.probabilities.push_back(static_cast<double>(c) / static_cast<double>(retained));
    return out;
}

std::map<std::vector<int>, double> empirical_subset_distribution(const GibbsChain& chain, int burn_in) {
    if (burn_in < 0 || static_cast<std::size_t>(burn_in) >= chain.states.size()) {
        throw ValidationError("burn-in outside the chain");
    }
    std::map<std::vector<int>, double> freq;
    const double weight = 1.0 / static_cast<double>(chain.states.size() - static_cast<std::size_t>(burn_in));
    for (auto t = static_cast<std::size_t>(burn_in); t < chain.states.size(); ++t) {
        freq[chain.states[t].sorted().indices()] += weight;
    }
    return freq;
}

ExactTarget exact_target_enumeration(const Dataset& ds, int m, double eta, const CostParams& cost,
                                     std::uint64_t budget) {
    const int r = ds.n_features();
    if (m < 1 || m > r) throw ValidationError("subset size outside [1, R]");
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    const auto count = binomial(r, m);
    if (count > budget) {
        throw BudgetExceededError("exact enumeration over C(" + std::to_string(r) + ", " + std::to_string(m) +
                                  ") = " + std::to_string(count) + " subsets exceeds the budget of " +
                                  std::to_string(budget));
    }

    ExactTarget out;
    std::vector<double> exponents;
    std::vector<int> combo(static_cast<std::size_t>(m));
    std::iota(combo.begin(), combo.end(), 0);
    for (;;) {
        const auto c = try_subset_cost(ds, FeatureSubset(combo), cost);
        out.subsets.emplace_back(combo);
        exponents.push_back(c ? -eta * *c : -std::numeric_limits<double>::infinity());
        int i = m - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == r - m + i) --i;
        if (i < 0) break;
        ++combo[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }

    const double top = *std::max_element(exponents.begin(), exponents.end());
    if (!std::isfinite(top)) throw DegenerateStepError("every subset of size " + std::to_string(m) + " is rank deficient");
    double total = 0.0;
    for (double e : exponents) total += std::isfinite(e) ? std::exp(e - top) : 0.0;

    out.inclusion.probabilities.assign(static_cast<std::size_t>(r), 0.0);
    out.inclusion.uniform_reference = 1.0 / r;
    out.inclusion.retained_states = static_cast<long long>(count);
    for (std::size_t s = 0; s < exponents.size(); ++s) {
        const double p = std::isfinite(exponents[s]) ? std::exp(exponents[s] - top) / total : 0.0;
        out.probabilities.push_back(p);
        for (int k : out.subsets[s].indices()) out.inclusion.probabilities[static_cast<std::size_t>(k)] += p;
    }
    return out;
}

double total_variation(const std::map<std::vector<int>, double>& empirical, const ExactTarget& exact) {
    double tv = 0.0;
    std::size_t matched = 0;
    for (std::size_t s = 0; s < exact.subsets.size(); ++s) {
        double q = 0.0;
        if (auto it = empirical.find(exact.subsets[s].indices()); it != empirical.end()) {
            q = it->second;
            ++matched;
        }
        tv += std::abs(q - exact.probabilities[s]);
    }
    if (matched != empirical.size()) {
        // States outside the enumerated support.
        for (const auto& [subset, q] : empirical) {
            const bool known = std::any_of(exact.subsets.begin(), exact.subsets.end(),
                                           [&](const FeatureSubset& s) { return s.indices() == subset; });
            if (!known) tv += q;
        }
    }
    return 0.5 * tv;
}

}  // namespace vselect
