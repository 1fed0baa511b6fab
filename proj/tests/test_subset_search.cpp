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
#include "vselect/subset_search.hpp"

#include <doctest.h>

#include <set>

using namespace vselect;
using vselect::testing::random_dataset;

namespace {

/// No single position can be swapped for an unused index at strictly lower cost.
bool coordinatewise_optimal(const Dataset& ds, const std::vector<int>& subset) {
    const double here = oracle::cost(ds, subset);
    for (std::size_t pos = 0; pos < subset.size(); ++pos) {
        for (int k = 0; k < ds.n_features(); ++k) {
            if (std::find(subset.begin(), subset.end(), k) != subset.end()) continue;
            auto trial = subset;
            trial[pos] = k;
            if (oracle::cost(ds, trial) < here * (1 - 1e-12)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("binomial") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(122, 0) == 1);
    CHECK(binomial(3, 4) == 0);
    CHECK(binomial(122, 7) == 66983637864ULL);  // math.comb(122, 7)
    CHECK(binomial(122, 61) == std::numeric_limits<std::uint64_t>::max());  // saturates
}

TEST_CASE("exhaustive search finds an exact predictor") {
    auto base = random_dataset(1, 12, 3);
    Eigen::MatrixXd x = base.features();
    x.col(1) = base.target();
    const auto ds = Dataset::create(x, base.target(), base.labels());
    const auto r = exhaustive_best_subset(ds, 1);
    CHECK(r.subset == FeatureSubset({1}));
    CHECK(r.cost < 1e-10);
}

TEST_CASE("exhaustive search equals naive enumeration") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = random_dataset(seed, 20, 5);
        for (int m = 1; m <= 3; ++m) {
            const auto r = exhaustive_best_subset(ds, m);
            const auto [best, cost] = oracle::enumerate_best(ds, m);
            CHECK(r.subset.indices() == best);
            CHECK(r.cost == doctest::Approx(cost).epsilon(1e-10));
        }
        const auto r2 = exhaustive_best_subset(ds, 2, {2.0, 2.0});
        CHECK(r2.subset.indices() == oracle::enumerate_best(ds, 2, 2.0, 2.0).first);
    }
}

TEST_CASE("exhaustive search refuses oversized enumerations") {
    const auto ds = random_dataset(2, 40, 30);
    CHECK_THROWS_AS(exhaustive_best_subset(ds, 10), BudgetExceededError);
    CHECK_THROWS_AS(exhaustive_best_subset(ds, 0), ValidationError);
}

TEST_CASE("alternating optimization from the global optimum is a fixed point") {
    const auto ds = random_dataset(3, 25, 6);
    const auto best = exhaustive_best_subset(ds, 2);
    const auto r = alternating_optimization(ds, best.subset);
    CHECK(r.subset == best.subset);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
}

TEST_CASE("alternating optimization never raises the cost and ends coordinate-wise optimal") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ds = random_dataset(seed, 25, 6);
        for (int run = 0; run < 5; ++run) {
            const auto init = restart_init(6, 2, seed, run);
            AlternatingOptions opts;
            opts.record_history = true;
            const auto r = alternating_optimization(ds, init, opts);
            REQUIRE(!r.cost_history.empty());
            CHECK(r.cost_history.front() == doctest::Approx(subset_cost(ds, init, {})).epsilon(1e-12));
            for (std::size_t i = 1; i < r.cost_history.size(); ++i) CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
            CHECK(r.cost <= r.cost_history.front());
            CHECK(r.converged);
            CHECK(coordinatewise_optimal(ds, r.subset.indices()));
            CHECK(std::set<int>(r.subset.indices().begin(), r.subset.indices().end()).size() == 2);
        }
    }
}

TEST_CASE("alternating optimization stays in a non-global basin") {
    // Scan seeded instances for a cost landscape with a coordinate-wise
    // optimum that is not the global one.
    bool found = false;
    for (std::uint64_t seed = 1; seed <= 500 && !found; ++seed) {
        const auto ds = random_dataset(seed, 12, 6, 2.0);
        const auto [global, global_cost] = oracle::enumerate_best(ds, 2);
        for (int a = 0; a < 6 && !found; ++a) {
            for (int b = a + 1; b < 6 && !found; ++b) {
                const std::vector<int> local = {a, b};
                if (local == global || !coordinatewise_optimal(ds, local)) continue;
                found = true;
                const auto r = alternating_optimization(ds, FeatureSubset(local));
                CHECK(r.subset.indices() == local);
                CHECK(r.cost > global_cost);
                CHECK(r.iterations == 1);
            }
        }
    }
    CHECK(found);
}

TEST_CASE("multi-restart search") {
    const auto ds = random_dataset(4, 30, 8);
    RestartOptions one;
    one.runs = 1;
    one.seed = 99;
    const auto single = multi_restart_search(ds, 3, one);
    const auto direct = alternating_optimization(ds, restart_init(8, 3, 99, 0));
    CHECK(single.subset == direct.subset.sorted());
    CHECK(single.cost == direct.cost);

    int matches = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto d = random_dataset(seed, 30, 8);
        RestartOptions opts;
        opts.runs = 200;
        opts.seed = seed;
        const auto r = multi_restart_search(d, 3, opts);
        if (r.subset == exhaustive_best_subset(d, 3).subset) ++matches;
    }
    CHECK(matches >= 19);
}

TEST_CASE("multi-restart search is independent of thread count and monotone in runs") {
    const auto ds = random_dataset(5, 40, 10);
    RestartOptions opts;
    opts.runs = 64;
    opts.seed = 7;
    opts.threads = 1;
    const auto serial = multi_restart_search(ds, 4, opts);
    opts.threads = 8;
    const auto parallel = multi_restart_search(ds, 4, opts);
    CHECK(serial.subset == parallel.subset);
    CHECK(serial.cost == parallel.cost);
    CHECK(serial.restarts_used == parallel.restarts_used);

    double previous = std::numeric_limits<double>::infinity();
    for (int runs : {1, 2, 4, 8, 16, 32}) {
        opts.runs = runs;
        const double c = multi_restart_search(ds, 4, opts).cost;
        CHECK(c <= previous);
        previous = c;
    }
}
