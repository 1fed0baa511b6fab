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
#include "vselect/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace vselect;
using vselect::testing::from_columns;
using vselect::testing::random_dataset;

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(from_columns({{1, 2}, {3, 5}}, {1, 2}), ValidationError);  // needs N >= R + 1
    CHECK_NOTHROW(from_columns({{1, 2, 3}}, {1, 2, 3}));
    CHECK_THROWS_AS(from_columns({{1, std::numeric_limits<double>::quiet_NaN(), 3}}, {1, 2, 3}), ValidationError);
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 2);
    CHECK_THROWS_AS(Dataset::create(x, Eigen::VectorXd::Ones(4), {"a", "a"}), ValidationError);
    CHECK_THROWS_AS(Dataset::create(x, Eigen::VectorXd::Ones(3), {"a", "b"}), ValidationError);
}

TEST_CASE("feature subset") {
    const auto s = FeatureSubset::from_one_based({113, 14});
    CHECK(s[0] == 112);
    CHECK(s.to_string() == "[113, 14]");
    CHECK(s.sorted() == FeatureSubset({13, 112}));
    CHECK_THROWS_AS(FeatureSubset({1, 1}), InvalidSubsetError);
    CHECK_THROWS_AS(FeatureSubset({0, 5}).validate(5), InvalidSubsetError);
    CHECK_THROWS_AS(FeatureSubset::from_one_based({0}), InvalidSubsetError);
}

TEST_CASE("design matrix selects and orders columns") {
    const auto ds = from_columns({{1, 2, 3}, {4, 5, 6}}, {0, 1, 0});
    const auto v = build_design_matrix(ds, FeatureSubset({1})).values;
    REQUIRE(v.cols() == 2);
    CHECK(v.col(0).isOnes());
    CHECK(v.col(1) == ds.features().col(1));

    const auto empty = build_design_matrix(ds, FeatureSubset{}).values;
    CHECK(empty.cols() == 1);
    CHECK(empty.isOnes());

    const auto swapped = build_design_matrix(ds, FeatureSubset({1, 0})).values;
    CHECK(swapped.col(1) == ds.features().col(1));
    CHECK(swapped.col(2) == ds.features().col(0));

    CHECK_THROWS_AS(build_design_matrix(ds, FeatureSubset({2})), InvalidSubsetError);
}

TEST_CASE("intercept-only fit") {
    const auto ds = from_columns({{0, 1, 0, 1}}, {1, 2, 3, 4});
    const auto fit = fit_subset(ds, FeatureSubset{});
    CHECK(fit.intercept == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(fit.mae == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.mse == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("exact linear relationship") {
    const auto ds = from_columns({{0, 1, 2, 5}}, {1, 3, 5, 11});
    const auto fit = fit_subset(ds, FeatureSubset({0}));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.mae < 1e-12);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three-point fit matches normal equations and pseudo-inverse") {
    // By hand: xbar = 1, ybar = 2/3, Sxy = 1, Sxx = 2 -> slope 1/2, intercept 1/6.
    const auto ds = from_columns({{0, 1, 2}}, {0, 1, 1});
    const auto fit = fit_subset(ds, FeatureSubset({0}));
    CHECK(fit.intercept == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(fit.coefficients(0) == doctest::Approx(0.5).epsilon(1e-13));
    const auto ref = oracle::fit(ds, {0});
    CHECK(ref.beta(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(ref.beta(1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("rank deficiency") {
    const auto ds = from_columns({{1, 2, 3, 4}, {2, 4, 6, 8}}, {1, 0, 1, 0});
    CHECK_THROWS_AS(fit_subset(ds, FeatureSubset({0, 1})), RankDeficientError);
    CHECK_FALSE(try_fit_subset(ds, FeatureSubset({0, 1})).has_value());
    CHECK_FALSE(try_subset_cost(ds, FeatureSubset({0, 1}), {}).has_value());
    // A constant column duplicates the intercept.
    const auto flat = from_columns({{3, 3, 3, 3}}, {1, 2, 3, 4});
    CHECK_THROWS_AS(fit_subset(flat, FeatureSubset({0})), RankDeficientError);
}

TEST_CASE("constant target") {
    const auto ds = from_columns({{1, 2, 3, 4}}, {5, 5, 5, 5});
    const auto fit = fit_subset(ds, FeatureSubset{});
    CHECK(fit.intercept == 5.0);
    CHECK(fit.r_squared == 0.0);
    const auto with_feature = fit_subset(ds, FeatureSubset({0}));
    CHECK(with_feature.r_squared == 0.0);
    CHECK(with_feature.mae < 1e-12);
}

TEST_CASE("residual cost") {
    Eigen::VectorXd r(3);
    r << 1, -1, 2;
    CHECK(residual_cost(r, {1.0, 1.0}) == 4.0);
    Eigen::VectorXd r2(2);
    r2 << 3, 4;
    CHECK(residual_cost(r2, {2.0, 2.0}) == doctest::Approx(25.0).epsilon(1e-15));
    CHECK(residual_cost(r2, {2.0, 1.0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(residual_cost(r2, {1.0, 2.0}) == doctest::Approx(49.0).epsilon(1e-15));
    CHECK(residual_cost(r2, {3.0, 1.5}) == doctest::Approx(std::pow(27.0 + 64.0, 0.5)).epsilon(1e-14));
    CHECK(residual_cost(Eigen::VectorXd::Zero(4), {0.5, 3.0}) == 0.0);
}

TEST_CASE("cost identities") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ds = random_dataset(seed, 30, 5);
        const FeatureSubset s({0, 2, 4});
        const auto fit = fit_subset(ds, s);
        CHECK(subset_cost(ds, s, {1.0, 1.0}) == doctest::Approx(30.0 * fit.mae).epsilon(1e-12));
        CHECK(subset_cost(ds, s, {2.0, 2.0}) == doctest::Approx(30.0 * fit.mse).epsilon(1e-10));
        CHECK(subset_cost(ds, s, {1.5, 0.7}) == doctest::Approx(oracle::cost(ds, {0, 2, 4}, 1.5, 0.7)).epsilon(1e-9));
    }
}

TEST_CASE("nested fits never increase MSE") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto ds = random_dataset(seed, 25, 8);
        std::vector<int> chain;
        double previous = fit_subset(ds, FeatureSubset{}).mse;
        for (int k : {3, 0, 7, 5, 1, 6, 2, 4}) {
            chain.push_back(k);
            const double mse = fit_subset(ds, FeatureSubset(chain)).mse;
            CHECK(mse <= previous * (1 + 1e-12));
            previous = mse;
        }
    }
}

TEST_CASE("fit is invariant to column order") {
    const auto ds = random_dataset(7, 20, 4);
    const auto ab = fit_subset(ds, FeatureSubset({1, 3}));
    const auto ba = fit_subset(ds, FeatureSubset({3, 1}));
    CHECK(ab.coefficients(0) == doctest::Approx(ba.coefficients(1)).epsilon(1e-12));
    CHECK(ab.coefficients(1) == doctest::Approx(ba.coefficients(0)).epsilon(1e-12));
    CHECK((ab.residuals - ba.residuals).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ab.mae == doctest::Approx(ba.mae).epsilon(1e-12));
    CHECK(ab.r_squared == doctest::Approx(ba.r_squared).epsilon(1e-12));
}

TEST_CASE("residuals are orthogonal to the design") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto ds = random_dataset(seed, 40, 6, 0.5);
        const FeatureSubset s({0, 1, 2, 3, 4, 5});
        const auto design = build_design_matrix(ds, s);
        const auto fit = fit_least_squares(design, ds.target());
        const double bound = 1e-8 * design.values.norm() * ds.target().norm();
        CHECK((design.values.transpose() * fit.residuals).cwiseAbs().maxCoeff() <= bound);
    }
}

TEST_CASE("t statistics match the normal-equation oracle") {
    for (std::uint64_t seed = 3; seed < 13; ++seed) {
        const auto ds = random_dataset(seed, 30, 4);
        const FeatureSubset s({0, 1, 2, 3});
        const auto design = build_design_matrix(ds, s);
        const auto t = coefficient_t_statistics(design, fit_least_squares(design, ds.target()));
        const auto ref = oracle::t_statistics(ds, {0, 1, 2, 3});
        for (int j = 0; j < 4; ++j) CHECK(t(j) == doctest::Approx(ref(j)).epsilon(1e-9));
    }
}

TEST_CASE("pearson correlation") {
    Eigen::VectorXd a(3), b(3), c(3);
    a << 1, 2, 3;
    b << 3, 2, 1;
    c << 4, 4, 4;
    CHECK(pearson_correlation(a, b) == doctest::Approx(-1.0));
    CHECK(pearson_correlation(a, a) == doctest::Approx(1.0));
    CHECK(pearson_correlation(a, c) == 0.0);
}
