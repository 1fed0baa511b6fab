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
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vselect {

/// Which mean the test-set R^2 measures SS_tot against.
enum class R2Reference { TestMean, TrainMean };

struct CvOptions {
    double train_fraction = 0.8;
    int runs = 20000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    R2Reference r2_reference = R2Reference::TestMean;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single run
    double min = 0.0;
    double max = 0.0;
};

struct CvReport {
    int runs = 0;              // requested
    int completed_runs = 0;    // runs that contributed metrics
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
    R2Reference r2_reference = R2Reference::TestMean;
    MetricSummary mae, mse, rmse, r2;
    int resampled = 0;         // runs whose first split gave a degenerate fit
    int skipped = 0;           // runs degenerate after one resample
    bool skip_warning = false; // skipped > 1% of runs
};

/// Train/test metrics of one split.
struct SplitScore {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
};

/// Row indices of the split used by run `run`: first floor(f * N) entries
/// train, the rest test. `attempt` 1 is the resample after a degenerate fit.
std::vector<int> cv_split(int n_rows, std::uint64_t seed, int run, int attempt = 0);

/// nullopt when the training design is rank deficient.
std::optional<SplitScore> score_split(const Dataset& dataset, const FeatureSubset& subset,
                                      const std::vector<int>& permutation, int n_train,
                                      R2Reference reference);

CvReport monte_carlo_cv(const Dataset& dataset, const FeatureSubset& subset, const CvOptions& options);

struct CorrelationEdge {
    int i = 0;  // 0-based, i < j
    int j = 0;
    double rho = 0.0;
};

struct CorrelationGraph {
    double threshold = 0.95;
    std::vector<CorrelationEdge> edges;  // ordered by (i, j)
};

CorrelationGraph correlation_graph(const Dataset& dataset, double threshold = 0.95);

struct NamedModel {
    FeatureSubset subset;
    FitResult fit;
    std::vector<std::pair<std::string, double>> coefficients;  // label -> beta, subset order
};

NamedModel fit_named_model(const Dataset& dataset, const FeatureSubset& subset);

}  // namespace vselect
