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
#include "vselect/validation.hpp"

#include <doctest.h>

using namespace vselect;
using vselect::testing::from_columns;
using vselect::testing::random_dataset;
using vselect::testing::sparse_dataset;

namespace {

bool same(const MetricSummary& a, const MetricSummary& b) {
    return a.mean == b.mean && a.stddev == b.stddev && a.min == b.min && a.max == b.max;
}

}  // namespace

TEST_CASE("splits are permutations with a floor-sized training part") {
    const auto p = cv_split(37, 4, 12);
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 37; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
    CHECK(cv_split(37, 4, 12) == p);
    CHECK(cv_split(37, 4, 13) != p);
    CHECK(cv_split(37, 4, 12, 1) != p);
}

TEST_CASE("noiseless data cross-validates perfectly") {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(0.37 * i - 2.0);
        y.push_back(2.0 * x.back() + 1.0);
    }
    const auto ds = from_columns({x}, y);
    CvOptions opts;
    opts.runs = 50;
    opts.seed = 8;
    const auto r = monte_carlo_cv(ds, FeatureSubset({0}), opts);
    CHECK(r.mae.mean < 1e-12);
    CHECK(r.r2.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.completed_runs == 50);
}

TEST_CASE("a single run equals the manual split oracle exactly") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = random_dataset(seed, 41, 5);
        CvOptions opts;
        opts.runs = 1;
        opts.seed = seed * 31;
        opts.train_fraction = 0.8;
        const auto r = monte_carlo_cv(ds, FeatureSubset({3, 1, 4}), opts);
        const auto ref = oracle::single_split(ds, {3, 1, 4}, seed * 31, 0.8);
        CHECK(r.mae.mean == ref.mae);
        CHECK(r.mse.mean == ref.mse);
        CHECK(r.r2.mean == ref.r2);
        CHECK(r.mae.stddev == 0.0);
    }
}

TEST_CASE("cross-validation does not depend on the thread count") {
    const auto ds = random_dataset(3, 60, 6);
    CvOptions opts;
    opts.runs = 500;
    opts.seed = 77;
    opts.threads = 1;
    const auto a = monte_carlo_cv(ds, FeatureSubset({0, 2, 5}), opts);
    opts.threads = 8;
    const auto b = monte_carlo_cv(ds, FeatureSubset({0, 2, 5}), opts);
    CHECK(same(a.mae, b.mae));
    CHECK(same(a.mse, b.mse));
    CHECK(same(a.rmse, b.rmse));
    CHECK(same(a.r2, b.r2));
}

TEST_CASE("test error exceeds in-sample error on well-specified models") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = sparse_dataset(seed, 80, 6, {0, 3}, 0.5);
        const FeatureSubset s({0, 3});
        CvOptions opts;
        opts.runs = 400;
        opts.seed = seed;
        const auto cv = monte_carlo_cv(ds, s, opts);
        const auto in_sample = fit_named_model(ds, s).fit;
        CHECK(cv.mse.mean >= in_sample.mse - 3.0 * cv.mse.stddev);
    }
}

TEST_CASE("degenerate training splits are resampled then skipped") {
    // Feature 1 is nonzero on one row only: a 4-row training split misses it
    // with probability 1/3, and so does the resample.
    const auto ds = from_columns({{1, 0, 0, 0, 0, 0}}, {1.0, 0.3, -0.2, 0.5, 0.1, 2.2});
    CvOptions opts;
    opts.runs = 300;
    opts.seed = 4;
    opts.train_fraction = 0.7;
    const auto r = monte_carlo_cv(ds, FeatureSubset({0}), opts);
    CHECK(r.resampled > 0);
    CHECK(r.skipped > 0);
    CHECK(r.skipped < r.resampled);
    CHECK(r.completed_runs + r.skipped == 300);
    CHECK(r.skip_warning);
}

TEST_CASE("cross-validation input checks") {
    const auto ds = random_dataset(1, 10, 4);
    CvOptions opts;
    opts.train_fraction = 0.3;  // 3 training rows for 2 features
    CHECK_THROWS_AS(monte_carlo_cv(ds, FeatureSubset({0, 1}), opts), ValidationError);
    opts.train_fraction = 1.0;
    CHECK_THROWS_AS(monte_carlo_cv(ds, FeatureSubset({0}), opts), ValidationError);
    opts.train_fraction = 0.8;
    CHECK_THROWS_AS(monte_carlo_cv(ds, FeatureSubset({7}), opts), InvalidSubsetError);
}

TEST_CASE("correlation graph") {
    const std::vector<double> a = {1, 2, 3, 4, 6, 7};
    const std::vector<double> b = {0.5, -1, 2, 0, 1, -0.3};
    std::vector<double> neg;
    for (double v : a) neg.push_back(-v);
    const auto ds = from_columns({a, b, a, neg, {3, 3, 3, 3, 3, 3}}, {1, 0, 1, 0, 1, 0});
    const auto g = correlation_graph(ds, 0.95);
    REQUIRE(g.edges.size() == 3);
    CHECK(g.edges[0].i == 0);
    CHECK(g.edges[0].j == 2);
    CHECK(g.edges[0].rho == doctest::Approx(1.0));
    CHECK(g.edges[1].j == 3);
    CHECK(g.edges[1].rho == doctest::Approx(-1.0));
    CHECK(g.edges[2].i == 2);
    CHECK(g.edges[2].j == 3);

    // Permuting columns permutes edges consistently.
    const std::vector<int> perm = {3, 4, 1, 0, 2};  // new column j holds old perm[j]
    Eigen::MatrixXd x(6, 5);
    for (int j = 0; j < 5; ++j) x.col(j) = ds.features().col(perm[static_cast<std::size_t>(j)]);
    const auto g2 = correlation_graph(Dataset::create(x, ds.target(), ds.labels()), 0.95);
    REQUIRE(g2.edges.size() == g.edges.size());
    for (const auto& e : g2.edges) {
        int i = perm[static_cast<std::size_t>(e.i)], j = perm[static_cast<std::size_t>(e.j)];
        if (i > j) std::swap(i, j);
        bool found = false;
        for (const auto& o : g.edges) found = found || (o.i == i && o.j == j && o.rho == doctest::Approx(e.rho));
        CHECK(found);
    }
}

TEST_CASE("named models carry labels") {
    const auto ds = from_columns({{0, 1, 2, 5}, {1, 0, 1, 0}}, {1, 3, 5, 11});
    const auto model = fit_named_model(ds, FeatureSubset({0}));
    REQUIRE(model.coefficients.size() == 1);
    CHECK(model.coefficients[0].first == "x1");
    CHECK(model.coefficients[0].second == doctest::Approx(2.0));

    const auto flat = from_columns({{0, 1, 2, 5}}, {4, 4, 4, 4});
    const auto c = fit_named_model(flat, FeatureSubset{});
    CHECK(c.fit.intercept == 4.0);
    CHECK(c.fit.r_squared == 0.0);
}
