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

#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include "vselect/error.hpp"
#include "vselect/gibbs.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

using namespace vselect;
using vselect::testing::from_columns;
using vselect::testing::random_dataset;

namespace {

// Feature 1 reproduces the target exactly (cost 0). Feature 2's residual is
// s * e with e orthogonal to [1 | x2], so its L1 cost is 2s = ln 3.
Dataset ln3_instance() {
    const double s = std::log(3.0) / 2.0;
    const std::vector<double> x2 = {1, -1, 0, 0};
    std::vector<double> y = {1, -1, s, -s};
    return from_columns({y, x2}, y);
}

Dataset permuted_columns(const Dataset& ds, const std::vector<int>& perm) {
    Eigen::MatrixXd x(ds.n_rows(), ds.n_features());
    std::vector<std::string> labels;
    for (int j = 0; j < ds.n_features(); ++j) {
        x.col(j) = ds.features().col(perm[static_cast<std::size_t>(j)]);
        labels.push_back(ds.labels()[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
    }
    return Dataset::create(x, ds.target(), labels);
}

bool valid_state(const FeatureSubset& s, int r) {
    std::set<int> seen(s.indices().begin(), s.indices().end());
    return seen.size() == s.indices().size() && *seen.begin() >= 0 && *seen.rbegin() < r;
}

}  // namespace

TEST_CASE("full conditional of symmetric costs") {
    const std::vector<double> x = {0.4, -1.1, 0.9, 0.3, -0.6};
    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    const auto ds = from_columns({x, neg}, {1.0, 0.2, -0.5, 0.8, 0.1});
    const auto w = full_conditional_weights(ds, FeatureSubset({0}), 0, 5.0);
    CHECK(w.candidates == std::vector<int>{0, 1});
    CHECK(w.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("full conditional softmax by hand") {
    const auto ds = ln3_instance();
    CHECK(subset_cost(ds, FeatureSubset({0}), {}) < 1e-14);
    CHECK(subset_cost(ds, FeatureSubset({1}), {}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    // e^0 / (e^0 + e^-ln3) = 3/4.
    const auto w = full_conditional_weights(ds, FeatureSubset({1}), 0, 1.0);
    CHECK(w.weights[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("full conditional matches a cost-table oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ds = random_dataset(seed, 15, 4, 1.0, 0.05);
        const double eta = 20.0;
        const FeatureSubset state({2, 0});
        for (int pos = 0; pos < 2; ++pos) {
            const auto w = full_conditional_weights(ds, state, pos, eta);
            const int other = state[1 - pos];
            std::vector<int> cands;
            std::vector<double> expw;
            for (int k = 0; k < 4; ++k) {
                if (k == other) continue;
                std::vector<int> cols = pos == 0 ? std::vector<int>{k, other} : std::vector<int>{other, k};
                cands.push_back(k);
                expw.push_back(std::exp(-eta * oracle::cost(ds, cols)));
            }
            const double total = std::accumulate(expw.begin(), expw.end(), 0.0);
            REQUIRE(w.candidates == cands);
            for (std::size_t i = 0; i < cands.size(); ++i) CHECK(w.weights[i] == doctest::Approx(expw[i] / total).epsilon(1e-9));
        }
    }
}

TEST_CASE("softmax identity: scaling eta up and costs down") {
    // Quartering the target quarters every L1 cost exactly (power-of-two scaling).
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ds = random_dataset(seed, 20, 5);
        const auto half = Dataset::create(ds.features(), ds.target() * 0.25, ds.labels());
        const FeatureSubset state({1, 3, 4});
        for (int pos = 0; pos < 3; ++pos) {
            const auto a = full_conditional_weights(ds, state, pos, 0.7);
            const auto b = full_conditional_weights(half, state, pos, 2.8);
            for (std::size_t i = 0; i < a.weights.size(); ++i) CHECK(a.weights[i] == doctest::Approx(b.weights[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate candidates receive zero weight") {
    auto base = random_dataset(3, 12, 3);
    Eigen::MatrixXd x = base.features();
    x.col(2) = 3.0 * x.col(0);
    const auto ds = Dataset::create(x, base.target(), base.labels());
    const auto w = full_conditional_weights(ds, FeatureSubset({0, 1}), 1, 1.0);
    REQUIRE(w.candidates == std::vector<int>{1, 2});
    CHECK(w.weights[1] == 0.0);
    CHECK(w.weights[0] == 1.0);
}

TEST_CASE("inclusion frequencies count retained states") {
    GibbsChain chain;
    chain.n_features = 3;
    for (int t = 0; t < 10; ++t) chain.states.push_back(t % 2 == 0 ? FeatureSubset({0, 1}) : FeatureSubset({0, 2}));
    const auto p = inclusion_frequencies(chain, 0);
    CHECK(p.probabilities == std::vector<double>{1.0, 0.5, 0.5});
    CHECK(p.retained_states == 10);
    CHECK(p.uniform_reference == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(inclusion_frequencies(chain, 10), ValidationError);
}

TEST_CASE("exact target enumeration") {
    const std::vector<double> x = {0.4, -1.1, 0.9, 0.3, -0.6};
    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    const auto sym = from_columns({x, neg}, {1.0, 0.2, -0.5, 0.8, 0.1});
    const auto e1 = exact_target_enumeration(sym, 1, 3.0);
    CHECK(e1.inclusion.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));

    // x3 = x1 + x2: every pair spans the same column space, so all three
    // pairs have the same cost.
    const auto tiny = from_columns({{1, 2, 4, 0}, {3, 1, 2, 5}, {4, 3, 6, 5}}, {1, 7, 2, 3});
    const auto e2 = exact_target_enumeration(tiny, 2, 10.0);
    for (double p : e2.inclusion.probabilities) CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    // Spreadsheet normalization over the six pairs of a 4-feature table.
    const auto ds = random_dataset(8, 14, 4, 1.0, 0.1);
    const double eta = 3.0;
    const auto exact = exact_target_enumeration(ds, 2, eta);
    std::vector<double> weights;
    std::vector<std::vector<int>> pairs;
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            pairs.push_back({a, b});
            weights.push_back(std::exp(-eta * oracle::cost(ds, {a, b})));
        }
    }
    const double z = std::accumulate(weights.begin(), weights.end(), 0.0);
    REQUIRE(exact.subsets.size() == 6);
    std::vector<double> incl(4, 0.0);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(exact.subsets[i].indices() == pairs[i]);
        CHECK(exact.probabilities[i] == doctest::Approx(weights[i] / z).epsilon(1e-9));
        for (int k : pairs[i]) incl[static_cast<std::size_t>(k)] += weights[i] / z;
    }
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        CHECK(exact.inclusion.probabilities[static_cast<std::size_t>(k)] == doctest::Approx(incl[static_cast<std::size_t>(k)]).epsilon(1e-9));
        total += exact.inclusion.probabilities[static_cast<std::size_t>(k)];
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));

    const auto wide = random_dataset(1, 80, 40);
    CHECK_THROWS_AS(exact_target_enumeration(wide, 10, 1.0), BudgetExceededError);
}

TEST_CASE("exact inclusion is equivariant under column permutation") {
    const auto ds = random_dataset(12, 20, 5, 1.0, 0.1);
    const std::vector<int> perm = {3, 0, 4, 2, 1};
    const auto a = exact_target_enumeration(ds, 2, 5.0).inclusion.probabilities;
    const auto b = exact_target_enumeration(permuted_columns(ds, perm), 2, 5.0).inclusion.probabilities;
    for (int j = 0; j < 5; ++j) CHECK(b[static_cast<std::size_t>(j)] == doctest::Approx(a[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]).epsilon(1e-10));
}

TEST_CASE("gibbs chains are deterministic and valid") {
    const auto ds = random_dataset(2, 20, 6, 1.0, 0.05);
    GibbsConfig cfg;
    cfg.m = 3;
    cfg.eta = 50.0;
    cfg.sweeps = 300;
    cfg.seed = 17;
    const auto a = gibbs_run(ds, cfg);
    const auto b = gibbs_run(ds, cfg);
    REQUIRE(a.states.size() == 300);
    CHECK(a.states == b.states);
    for (const auto& s : a.states) REQUIRE(valid_state(s, 6));
    cfg.seed = 18;
    CHECK(gibbs_run(ds, cfg).states != a.states);

    const auto p = inclusion_frequencies(a, cfg.resolved_burn_in());
    CHECK(std::accumulate(p.probabilities.begin(), p.probabilities.end(), 0.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("gibbs frequencies approach the exact target") {
    const auto ds = random_dataset(21, 20, 5, 1.0, 0.02);
    for (double eta : {1e-9, 1.0, 100.0}) {
        CAPTURE(eta);
        GibbsConfig cfg;
        cfg.m = 2;
        cfg.eta = eta;
        cfg.sweeps = 22000;
        cfg.burn_in = 2000;
        cfg.seed = 5;
        const auto chain = gibbs_run(ds, cfg);
        const auto exact = exact_target_enumeration(ds, 2, eta);
        CHECK(total_variation(empirical_subset_distribution(chain, 2000), exact) <= 0.05);
    }
}

TEST_CASE("pooled chains do not depend on the thread count") {
    const auto ds = random_dataset(6, 20, 6, 1.0, 0.05);
    GibbsConfig cfg;
    cfg.m = 2;
    cfg.eta = 30.0;
    cfg.sweeps = 200;
    cfg.seed = 3;
    const auto a = pooled_inclusion(ds, cfg, 4, 1);
    const auto b = pooled_inclusion(ds, cfg, 4, 8);
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.retained_states == 4 * 160);
    CHECK(a.pooled);
    // One chain reproduces a plain run with the same seed.
    const auto single = pooled_inclusion(ds, cfg, 1, 1);
    CHECK(single.probabilities == inclusion_frequencies(gibbs_run(ds, cfg), 40).probabilities);
}
