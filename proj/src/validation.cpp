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

#include "vselect/validation.hpp"

#include "vselect/error.hpp"
#include "vselect/parallel.hpp"
#include "vselect/random.hpp"

#include <algorithm>
#include <cmath>

namespace vselect {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    CompensatedSum total;
    for (double v : values) total.add(v);
    const double n = static_cast<double>(values.size());
    s.mean = total.value() / n;
    if (values.size() > 1) {
        CompensatedSum sq;
        for (double v : values) sq.add((v - s.mean) * (v - s.mean));
        s.stddev = std::sqrt(sq.value() / (n - 1.0));
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

int train_rows(int n_rows, double fraction) {
    return static_cast<int>(std::floor(fraction * static_cast<double>(n_rows)));
}

}  // namespace

std::vector<int> cv_split(int n_rows, std::uint64_t seed, int run, int attempt) {
    Rng rng(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(run)), static_cast<std::uint64_t>(attempt)));
    return random_permutation(rng, n_rows);
}

std::optional<SplitScore> score_split(const Dataset& ds, const FeatureSubset& subset,
                                      const std::vector<int>& permutation, int n_train, R2Reference reference) {
    const int n = ds.n_rows();
    const int n_test = n - n_train;
    const int cols = subset.size() + 1;
    const auto design = build_design_matrix(ds, subset);

    Eigen::MatrixXd x_train(n_train, cols);
    Eigen::VectorXd y_train(n_train);
    Eigen::MatrixXd x_test(n_test, cols);
    Eigen::VectorXd y_test(n_test);
    for (int i = 0; i < n; ++i) {
        const int row = permutation[static_cast<std::size_t>(i)];
        if (i < n_train) {
            x_train.row(i) = design.values.row(row);
            y_train(i) = ds.target()(row);
        } else {
            x_test.row(i - n_train) = design.values.row(row);
            y_test(i - n_train) = ds.target()(row);
        }
    }

    const auto fit = try_fit_least_squares(DesignMatrix{x_train}, y_train);
    if (!fit) return std::nullopt;

    Eigen::VectorXd beta(cols);
    beta(0) = fit->intercept;
    beta.tail(cols - 1) = fit->coefficients;

    FitResult test;
    test.residuals = y_test - x_test * beta;
    const double mean = reference == R2Reference::TestMean ? y_test.mean() : y_train.mean();
    fill_metrics(test, y_test, mean);
    return SplitScore{test.mae, test.mse, test.rmse, test.r_squared};
}

CvReport monte_carlo_cv(const Dataset& ds, const FeatureSubset& subset, const CvOptions& options) {
    subset.validate(ds.n_features());
    if (options.runs < 1) throw ValidationError("cross-validation needs at least one run");
    if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
        throw ValidationError("train fraction must lie in (0, 1)");
    }
    const int n = ds.n_rows();
    const int n_train = train_rows(n, options.train_fraction);
    if (n_train < subset.size() + 2) {
        throw ValidationError("training split of " + std::to_string(n_train) + " rows is too small for " +
                              std::to_string(subset.size()) + " features");
    }
    if (n - n_train < 1) throw ValidationError("test split is empty");

    struct RunOutcome {
        std::optional<SplitScore> score;
        bool resampled = false;
    };
    std::vector<RunOutcome> outcomes(static_cast<std::size_t>(options.runs));
    parallel_for(outcomes.size(), options.threads, [&](std::size_t run) {
        auto& out = outcomes[run];
        out.score = score_split(ds, subset, cv_split(n, options.seed, static_cast<int>(run), 0), n_train,
                                options.r2_reference);
        if (!out.score) {
            out.resampled = true;
            out.score = score_split(ds, subset, cv_split(n, options.seed, static_cast<int>(run), 1), n_train,
                                    options.r2_reference);
        }
    });

    CvReport report;
    report.runs = options.runs;
    report.train_fraction = options.train_fraction;
    report.seed = options.seed;
    report.r2_reference = options.r2_reference;
    std::vector<double> mae, mse, rmse, r2;
    for (const auto& o : outcomes) {
        report.resampled += o.resampled ? 1 : 0;
        if (!o.score) {
            ++report.skipped;
            continue;
        }
        mae.push_back(o.score->mae);
        mse.push_back(o.score->mse);
        rmse.push_back(o.score->rmse);
        r2.push_back(o.score->r2);
    }
    report.completed_runs = static_cast<int>(mae.size());
    if (report.completed_runs == 0) {
        throw DegenerateStepError("every cross-validation split produced a rank-deficient training fit");
    }
    report.skip_warning = report.skipped * 100 > options.runs;
    report.mae = summarize(mae);
    report.mse = summarize(mse);
    report.rmse = summarize(rmse);
    report.r2 = summarize(r2);
    return report;
}

CorrelationGraph correlation_graph(const Dataset& ds, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("correlation threshold must lie in [0, 1]");
    CorrelationGraph graph;
    graph.threshold = threshold;
    const int r = ds.n_features();
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            const double rho = pearson_correlation(ds.features().col(i), ds.features().col(j));
            if (std::abs(rho) >= threshold && rho != 0.0) graph.edges.push_back({i, j, rho});
        }
    }
    return graph;
}

NamedModel fit_named_model(const Dataset& ds, const FeatureSubset& subset) {
    NamedModel model;
    model.subset = subset;
    model.fit = fit_subset(ds, subset);
    for (int j = 0; j < subset.size(); ++j) {
        model.coefficients.emplace_back(ds.labels()[static_cast<std::size_t>(subset[j])],
                                        model.fit.coefficients(j));
    }
    return model;
}

}  // namespace vselect
