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

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace vselect {

/**
 * An N x R table of features with one regression target.
 *
 * Construction validates the invariants: N >= R + 1, all entries finite,
 * labels unique and one per column. Instances are immutable.
 */
class Dataset {
public:
    static Dataset create(Eigen::MatrixXd features, Eigen::VectorXd target,
                          std::vector<std::string> labels);

    const Eigen::MatrixXd& features() const noexcept { return features_; }
    const Eigen::VectorXd& target() const noexcept { return target_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    int n_rows() const noexcept { return static_cast<int>(features_.rows()); }
    int n_features() const noexcept { return static_cast<int>(features_.cols()); }

private:
    Dataset() = default;

    Eigen::MatrixXd features_;
    Eigen::VectorXd target_;
    std::vector<std::string> labels_;
};

/**
 * Ordered list of distinct feature indices. Indices are 0-based in the
 * library; human-facing output converts with to_one_based().
 */
class FeatureSubset {
public:
    FeatureSubset() = default;
    /// Throws InvalidSubsetError on negative or repeated indices.
    explicit FeatureSubset(std::vector<int> indices);

    static FeatureSubset from_one_based(const std::vector<int>& indices);

    const std::vector<int>& indices() const noexcept { return indices_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    bool empty() const noexcept { return indices_.empty(); }
    int operator[](int pos) const { return indices_[static_cast<std::size_t>(pos)]; }
    bool contains(int feature) const;

    FeatureSubset sorted() const;
    FeatureSubset with(int pos, int feature) const;
    std::vector<int> to_one_based() const;
    std::string to_string() const;  // 1-based, e.g. "[113, 14]"

    /// Throws InvalidSubsetError if any index is outside [0, n_features).
    void validate(int n_features) const;

    friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;

private:
    std::vector<int> indices_;
};

/// N x (M+1): a leading column of ones, then the subset's columns in subset order.
struct DesignMatrix {
    Eigen::MatrixXd values;
};

struct FitResult {
    double intercept = 0.0;
    Eigen::VectorXd coefficients;  // aligned to subset order
    Eigen::VectorXd residuals;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r_squared = 0.0;
};

/// Exponents of the subset cost ||y - V beta||_p^alpha.
struct CostParams {
    double p = 1.0;
    double alpha = 1.0;
};

/// Relative pivot threshold below which a design is declared rank deficient.
inline constexpr double kRankThreshold = 1e-10;

DesignMatrix build_design_matrix(const Dataset& dataset, const FeatureSubset& subset);

/// Column-pivoted QR least squares. Throws RankDeficientError.
FitResult fit_least_squares(const DesignMatrix& design, const Eigen::VectorXd& target);

/// nullopt when the design is rank deficient.
std::optional<FitResult> try_fit_least_squares(const DesignMatrix& design,
                                               const Eigen::VectorXd& target);

/// Fit on a subset; the rank-deficiency message names the subset.
FitResult fit_subset(const Dataset& dataset, const FeatureSubset& subset);
std::optional<FitResult> try_fit_subset(const Dataset& dataset, const FeatureSubset& subset);

/// Error metrics of a residual vector against its target. SS_tot is taken
/// about `reference_mean`.
void fill_metrics(FitResult& fit, const Eigen::VectorXd& target, double reference_mean);

double residual_cost(const Eigen::VectorXd& residuals, const CostParams& params);
double subset_cost(const Dataset& dataset, const FeatureSubset& subset, const CostParams& params);
std::optional<double> try_subset_cost(const Dataset& dataset, const FeatureSubset& subset,
                                      const CostParams& params);

/// t statistics beta_k / se(beta_k) of the non-intercept coefficients, using
/// sigma^2 = SS_res / (N - M - 1). Requires N > M + 1.
Eigen::VectorXd coefficient_t_statistics(const DesignMatrix& design, const FitResult& fit);

/// Pearson correlation; 0 when either vector has zero variance.
double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace vselect
