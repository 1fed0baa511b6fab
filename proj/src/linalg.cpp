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

#include "vselect/linalg.hpp"

#include "vselect/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace vselect {

Dataset Dataset::create(Eigen::MatrixXd features, Eigen::VectorXd target,
                        std::vector<std::string> labels) {
    const auto n = features.rows();
    const auto r = features.cols();
    if (r < 1) throw ValidationError("dataset has no feature columns");
    if (target.size() != n) {
        throw ValidationError("target length " + std::to_string(target.size()) +
                              " does not match " + std::to_string(n) + " feature rows");
    }
    if (n < r + 1) {
        throw ValidationError("dataset needs at least R + 1 = " + std::to_string(r + 1) +
                              " rows, got " + std::to_string(n));
    }
    if (static_cast<Eigen::Index>(labels.size()) != r) {
        throw ValidationError("expected " + std::to_string(r) + " labels, got " +
                              std::to_string(labels.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) throw ValidationError("duplicate feature label '" + label + "'");
    }
    if (!features.allFinite()) throw ValidationError("feature table contains non-finite values");
    if (!target.allFinite()) throw ValidationError("target contains non-finite values");

    Dataset ds;
    ds.features_ = std::move(features);
    ds.target_ = std::move(target);
    ds.labels_ = std::move(labels);
    return ds;
}

FeatureSubset::FeatureSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    std::vector<int> sorted_copy = indices_;
    std::sort(sorted_copy.begin(), sorted_copy.end());
    if (!sorted_copy.empty() && sorted_copy.front() < 0) {
        throw InvalidSubsetError("negative feature index in subset");
    }
    if (std::adjacent_find(sorted_copy.begin(), sorted_copy.end()) != sorted_copy.end()) {
        throw InvalidSubsetError("repeated feature index in subset " + to_string());
    }
}

FeatureSubset FeatureSubset::from_one_based(const std::vector<int>& indices) {
    std::vector<int> zero_based;
    zero_based.reserve(indices.size());
    for (int k : indices) {
        if (k < 1) throw InvalidSubsetError("feature indices are 1-based; got " + std::to_string(k));
        zero_based.push_back(k - 1);
    }
    return FeatureSubset(std::move(zero_based));
}

bool FeatureSubset::contains(int feature) const {
    return std::find(indices_.begin(), indices_.end(), feature) != indices_.end();
}

FeatureSubset FeatureSubset::sorted() const {
    FeatureSubset out = *this;
    std::sort(out.indices_.begin(), out.indices_.end());
    return out;
}

FeatureSubset FeatureSubset::with(int pos, int feature) const {
    std::vector<int> next = indices_;
    next.at(static_cast<std::size_t>(pos)) = feature;
    return FeatureSubset(std::move(next));
}

std::vector<int> FeatureSubset::to_one_based() const {
    std::vector<int> out;
    out.reserve(indices_.size());
    for (int k : indices_) out.push_back(k + 1);
    return out;
}

std::string FeatureSubset::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) os << ", ";
        os << indices_[i] + 1;
    }
    os << ']';
    return os.str();
}

void FeatureSubset::validate(int n_features) const {
    for (int k : indices_) {
        if (k < 0 || k >= n_features) {
            throw InvalidSubsetError("feature index " + std::to_string(k + 1) + " outside [1, " +
                                     std::to_string(n_features) + "]");
        }
    }
}

DesignMatrix build_design_matrix(const Dataset& dataset, const FeatureSubset& subset) {
    subset.validate(dataset.n_features());
    DesignMatrix design;
    design.values.resize(dataset.n_rows(), subset.size() + 1);
    design.values.col(0).setOnes();
    for (int j = 0; j < subset.size(); ++j) {
        design.values.col(j + 1) = dataset.features().col(subset[j]);
    }
    return design;
}

namespace {

bool zero_variance_target(double ss, const Eigen::Ref<const Eigen::VectorXd>& target) {
    const double scale = std::max(target.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = static_cast<double>(target.size()) * std::pow(1e-12 * scale, 2);
    return ss <= tol;
}

}  // namespace

void fill_metrics(FitResult& fit, const Eigen::VectorXd& target, double reference_mean) {
    const auto n = static_cast<double>(fit.residuals.size());
    fit.mae = fit.residuals.cwiseAbs().sum() / n;
    const double ss_res = fit.residuals.squaredNorm();
    fit.mse = ss_res / n;
    fit.rmse = std::sqrt(fit.mse);
    const double ss_tot = (target.array() - reference_mean).square().sum();
    if (zero_variance_target(ss_tot, target)) {
        // Constant target: R^2 carries no information and is reported as 0.
        fit.r_squared = 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
}

std::optional<FitResult> try_fit_least_squares(const DesignMatrix& design,
                                               const Eigen::VectorXd& target) {
    const auto& x = design.values;
    if (x.rows() != target.size()) {
        throw ValidationError("design has " + std::to_string(x.rows()) + " rows but target has " +
                              std::to_string(target.size()));
    }
    if (x.rows() < x.cols()) return std::nullopt;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.rows(), x.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(x);
    if (qr.rank() < x.cols()) return std::nullopt;

    const Eigen::VectorXd beta = qr.solve(target);
    FitResult fit;
    fit.intercept = beta(0);
    fit.coefficients = beta.tail(beta.size() - 1);
    fit.residuals = target - x * beta;
    fill_metrics(fit, target, target.mean());
    const double ss_tot = (target.array() - target.mean()).square().sum();
    if (zero_variance_target(ss_tot, target) && !zero_variance_target(fit.residuals.squaredNorm(), target)) {
        throw ComputationError("constant target but non-zero residuals");
    }
    return fit;
}

FitResult fit_least_squares(const DesignMatrix& design, const Eigen::VectorXd& target) {
    auto fit = try_fit_least_squares(design, target);
    if (!fit) {
        throw RankDeficientError("rank-deficient design matrix (" + std::to_string(design.values.rows()) +
                                 " x " + std::to_string(design.values.cols()) + ")");
    }
    return std::move(*fit);
}

std::optional<FitResult> try_fit_subset(const Dataset& dataset, const FeatureSubset& subset) {
    return try_fit_least_squares(build_design_matrix(dataset, subset), dataset.target());
}

FitResult fit_subset(const Dataset& dataset, const FeatureSubset& subset) {
    auto fit = try_fit_subset(dataset, subset);
    if (!fit) throw RankDeficientError("rank-deficient fit for subset " + subset.to_string());
    return std::move(*fit);
}

double residual_cost(const Eigen::VectorXd& residuals, const CostParams& params) {
    if (!(params.p > 0.0) || !(params.alpha > 0.0)) {
        throw ValidationError("cost exponents p and alpha must be positive");
    }
    double norm;
    if (params.p == 1.0) {
        norm = residuals.cwiseAbs().sum();
    } else if (params.p == 2.0) {
        norm = residuals.norm();
    } else {
        norm = std::pow(residuals.array().abs().pow(params.p).sum(), 1.0 / params.p);
    }
    if (params.alpha == 1.0) return norm;
    if (params.alpha == 2.0) return norm * norm;
    return std::pow(norm, params.alpha);
}

std::optional<double> try_subset_cost(const Dataset& dataset, const FeatureSubset& subset,
                                      const CostParams& params) {
    auto fit = try_fit_subset(dataset, subset);
    if (!fit) return std::nullopt;
    return residual_cost(fit->residuals, params);
}

double subset_cost(const Dataset& dataset, const FeatureSubset& subset, const CostParams& params) {
    return residual_cost(fit_subset(dataset, subset).residuals, params);
}

Eigen::VectorXd coefficient_t_statistics(const DesignMatrix& design, const FitResult& fit) {
    const auto& x = design.values;
    const auto n = x.rows();
    const auto k = x.cols();
    if (n <= k) {
        throw ValidationError("t statistics need N > M + 1 (N = " + std::to_string(n) + ", M + 1 = " +
                              std::to_string(k) + ")");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(n, k);
    qr.setThreshold(kRankThreshold);
    qr.compute(x);
    if (qr.rank() < k) throw RankDeficientError("rank-deficient design in t statistics");

    // (X^T X)^{-1} = P R^{-1} R^{-T} P^T
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd diag_permuted = r_inv.rowwise().squaredNorm();
    Eigen::VectorXd diag(k);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < k; ++i) diag(perm(i)) = diag_permuted(i);

    const double sigma2 = fit.residuals.squaredNorm() / static_cast<double>(n - k);
    Eigen::VectorXd t(k - 1);
    for (Eigen::Index j = 1; j < k; ++j) {
        const double beta = fit.coefficients(j - 1);
        const double se = std::sqrt(sigma2 * diag(j));
        if (se > 0.0) {
            t(j - 1) = beta / se;
        } else {
            t(j - 1) = beta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), beta);
        }
    }
    return t;
}

double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b) {
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = da.square().sum();
    const double sbb = db.square().sum();
    if (zero_variance_target(saa, a) || zero_variance_target(sbb, b)) return 0.0;
    const double rho = (da * db).sum() / std::sqrt(saa * sbb);
    return std::clamp(rho, -1.0, 1.0);
}

}  // namespace vselect
