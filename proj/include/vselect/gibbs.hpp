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
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace vselect {

inline constexpr double kDefaultEta = 100.0;
inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000;

/**
 * Sampler settings for the target p(v) ∝ exp(-eta * C(v)) over size-m
 * subsets. When burn_in is unset, the first 20% of sweeps are discarded.
 */
struct GibbsConfig {
    int m = 1;
    double eta = kDefaultEta;
    CostParams cost;
    int sweeps = 1000;
    std::optional<int> burn_in;
    std::uint64_t seed = 0;

    int resolved_burn_in() const { return burn_in ? *burn_in : sweeps / 5; }
    void validate(int n_features) const;
};

struct GibbsChain {
    int n_features = 0;
    std::vector<FeatureSubset> states;  // one per sweep, in position order
    std::vector<double> costs;
};

struct InclusionProfile {
    std::vector<double> probabilities;  // per feature, 0-based
    double uniform_reference = 0.0;     // 1 / R
    long long retained_states = 0;
    bool pooled = false;
};

/// Normalized full conditional of one position given all others.
struct ConditionalWeights {
    std::vector<int> candidates;   // ascending feature indices
    std::vector<double> weights;   // sums to 1; 0 for degenerate candidates
};

/// Memo of set costs keyed by the ascending index tuple; NaN marks a
/// rank-deficient subset.
class CostCache {
public:
    CostCache(const Dataset& dataset, CostParams cost) : dataset_(&dataset), cost_(cost) {}

    /// nullopt for rank-deficient subsets.
    std::optional<double> cost(std::vector<int> indices);
    std::size_t size() const noexcept { return table_.size(); }

private:
    struct Hash {
        std::size_t operator()(const std::vector<int>& v) const noexcept;
    };

    const Dataset* dataset_;
    CostParams cost_;
    std::unordered_map<std::vector<int>, double, Hash> table_;
};

/// `position` is 0-based. Weights use max-shifted exponents.
ConditionalWeights full_conditional_weights(const Dataset& dataset, const FeatureSubset& state, int position,
                                            double eta, const CostParams& cost = {},
                                            CostCache* cache = nullptr);

/// Systematic-scan Gibbs sampler; deterministic given config.seed.
GibbsChain gibbs_run(const Dataset& dataset, const GibbsConfig& config);

InclusionProfile inclusion_frequencies(const GibbsChain& chain, int burn_in);

/// Runs `chains` independent chains (seeds split from config.seed) and
/// pools their post-burn-in states.
InclusionProfile pooled_inclusion(const Dataset& dataset, const GibbsConfig& config, int chains,
                                  unsigned threads = 1);

/// Empirical frequencies of post-burn-in states, keyed by ascending subset.
std::map<std::vector<int>, double> empirical_subset_distribution(const GibbsChain& chain, int burn_in);

struct ExactTarget {
    std::vector<FeatureSubset> subsets;  // ascending subsets in lexicographic order
    std::vector<double> probabilities;
    InclusionProfile inclusion;
};

ExactTarget exact_target_enumeration(const Dataset& dataset, int m, double eta, const CostParams& cost = {},
                                     std::uint64_t budget = kDefaultEnumerationBudget);

/// 0.5 * sum |p - q| over the union of supports.
double total_variation(const std::map<std::vector<int>, double>& empirical, const ExactTarget& exact);

}  // namespace vselect
