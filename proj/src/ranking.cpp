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

#include "vselect/ranking.hpp"

#include "vselect/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace vselect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> prefix_mae(const Dataset& ds, std::vector<int> columns) {
    std::sort(columns.begin(), columns.end());
    auto fit = try_fit_subset(ds, FeatureSubset(std::move(columns)));
    if (!fit) return std::nullopt;
    return fit->mae;
}

// One greedy addition pass. Candidate fits use ascending column order so
// that equal subsets always give bit-identical errors.
std::vector<int> greedy_add(const Dataset& ds, bool maximize) {
    const int r = ds.n_features();
    std::vector<int> chosen;
    std::vector<bool> used(static_cast<std::size_t>(r), false);
    while (static_cast<int>(chosen.size()) < r) {
        int best = -1;
        double best_err = maximize ? -kInf : kInf;
        for (int k = 0; k < r; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            auto cols = chosen;
            cols.push_back(k);
            const auto err = prefix_mae(ds, std::move(cols));
            if (!err) continue;
            if (best < 0 || (maximize ? *err > best_err : *err < best_err)) {
                best = k;
                best_err = *err;
            }
        }
        if (best < 0) {
            throw DegenerateStepError("every candidate fit of size " + std::to_string(chosen.size() + 1) +
                                      " is rank deficient");
        }
        chosen.push_back(best);
        used[static_cast<std::size_t>(best)] = true;
    }
    return chosen;
}

std::vector<int> independent_columns(const Dataset& ds, const std::vector<int>& dependent) {
    std::vector<int> cols;
    for (int k = 0; k < ds.n_features(); ++k) {
        if (!std::binary_search(dependent.begin(), dependent.end(), k)) cols.push_back(k);
    }
    return cols;
}

// One greedy removal pass starting from `remaining` (ascending).
std::vector<int> greedy_remove(const Dataset& ds, std::vector<int> remaining, bool maximize) {
    std::vector<int> removed;
    while (!remaining.empty()) {
        int best_pos = -1;
        double best_err = maximize ? -kInf : kInf;
        for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
            auto cols = remaining;
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(pos));
            const auto err = prefix_mae(ds, std::move(cols));
            if (!err) continue;
            if (best_pos < 0 || (maximize ? *err > best_err : *err < best_err)) {
                best_pos = static_cast<int>(pos);
                best_err = *err;
            }
        }
        if (best_pos < 0) {
            throw DegenerateStepError("every removal from a model of size " + std::to_string(remaining.size()) +
                                      " is rank deficient");
        }
        removed.push_back(remaining[static_cast<std::size_t>(best_pos)]);
        remaining.erase(remaining.begin() + best_pos);
    }
    return removed;
}

Ranking finish(const Dataset& ds, RankingMethod method, std::vector<int> order, std::vector<int> raw) {
    Ranking out;
    out.method = method;
    out.order = std::move(order);
    out.raw_order = std::move(raw);
    out.error_curve = error_curve(ds, out.order);
    return out;
}

}  // namespace

std::string_view method_name(RankingMethod method) {
    switch (method) {
        case RankingMethod::Forward: return "RM1_forward";
        case RankingMethod::Backward: return "RM2_backward";
        case RankingMethod::RemoveMaxError: return "RM3_remove_max";
        case RankingMethod::AddMaxError: return "RM4_add_max";
        case RankingMethod::Correlation: return "RM5_correlation";
        case RankingMethod::PValue: return "PV_pvalue";
    }
    return "unknown";
}

RankingMethod parse_method(std::string_view name) {
    for (auto m : all_methods()) {
        const auto full = method_name(m);
        if (name == full || name == full.substr(0, full.find('_'))) return m;
    }
    throw ValidationError("unknown ranking method '" + std::string(name) + "'");
}

const std::vector<RankingMethod>& all_methods() {
    static const std::vector<RankingMethod> methods = {
        RankingMethod::Forward,     RankingMethod::Backward,    RankingMethod::RemoveMaxError,
        RankingMethod::AddMaxError, RankingMethod::Correlation, RankingMethod::PValue};
    return methods;
}

std::vector<int> dependent_columns(const Dataset& ds) {
    std::vector<int> dependent;
    Eigen::MatrixXd basis(ds.n_rows(), 1);
    basis.col(0).setOnes();
    for (int k = 0; k < ds.n_features(); ++k) {
        Eigen::MatrixXd trial(ds.n_rows(), basis.cols() + 1);
        trial << basis, ds.features().col(k);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial.rows(), trial.cols());
        qr.setThreshold(kRankThreshold);
        qr.compute(trial);
        if (qr.rank() < trial.cols()) {
            dependent.push_back(k);
        } else {
            basis = std::move(trial);
        }
    }
    return dependent;
}

ErrorCurve error_curve(const Dataset& ds, const std::vector<int>& order) {
    const int r = ds.n_features();
    std::vector<int> check = order;
    std::sort(check.begin(), check.end());
    std::vector<int> identity(static_cast<std::size_t>(r));
    std::iota(identity.begin(), identity.end(), 0);
    if (check != identity) throw ValidationError("order is not a permutation of all features");

    ErrorCurve curve;
    double previous = fit_subset(ds, FeatureSubset{}).mae;
    std::vector<int> prefix;
    for (int k : order) {
        prefix.push_back(k);
        const auto err = prefix_mae(ds, prefix);
        curve.degenerate.push_back(!err.has_value());
        if (err) previous = *err;
        curve.mae.push_back(previous);
    }
    return curve;
}

Ranking rank_forward_selection(const Dataset& ds) {
    auto raw = greedy_add(ds, false);
    auto order = raw;
    return finish(ds, RankingMethod::Forward, std::move(order), std::move(raw));
}

Ranking rank_add_max_error(const Dataset& ds) {
    auto raw = greedy_add(ds, true);
    std::vector<int> order(raw.rbegin(), raw.rend());
    return finish(ds, RankingMethod::AddMaxError, std::move(order), std::move(raw));
}

Ranking rank_backward_elimination(const Dataset& ds) {
    const auto dependent = dependent_columns(ds);
    const auto removed = greedy_remove(ds, independent_columns(ds, dependent), false);
    std::vector<int> raw = dependent;
    raw.insert(raw.end(), removed.begin(), removed.end());
    std::vector<int> order(removed.rbegin(), removed.rend());
    order.insert(order.end(), dependent.begin(), dependent.end());
    auto out = finish(ds, RankingMethod::Backward, std::move(order), std::move(raw));
    out.dependent_columns = dependent;
    return out;
}

Ranking rank_remove_max_error(const Dataset& ds) {
    const auto dependent = dependent_columns(ds);
    const auto removed = greedy_remove(ds, independent_columns(ds, dependent), true);
    std::vector<int> raw = dependent;
    raw.insert(raw.end(), removed.begin(), removed.end());
    std::vector<int> order = removed;
    order.insert(order.end(), dependent.begin(), dependent.end());
    auto out = finish(ds, RankingMethod::RemoveMaxError, std::move(order), std::move(raw));
    out.dependent_columns = dependent;
    return out;
}

Ranking rank_correlation(const Dataset& ds) {
    const int r = ds.n_features();
    std::vector<double> strength(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
        strength[static_cast<std::size_t>(k)] = std::abs(pearson_correlation(ds.features().col(k), ds.target()));
    }
    std::vector<int> order(static_cast<std::size_t>(r));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return strength[static_cast<std::size_t>(a)] > strength[static_cast<std::size_t>(b)];
    });
    auto raw = order;
    return finish(ds, RankingMethod::Correlation, std::move(order), std::move(raw));
}

double two_sided_pvalue(double t, double dof) {
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Ranking rank_pvalues(const Dataset& ds, double alpha_threshold) {
    if (!(alpha_threshold > 0.0 && alpha_threshold < 1.0)) {
        throw ValidationError("p-value threshold must lie in (0, 1)");
    }
    if (ds.n_rows() < ds.n_features() + 2) {
        throw ValidationError("p-value ranking needs N >= R + 2 rows for residual degrees of freedom");
    }
    const int r = ds.n_features();
    const auto dependent = dependent_columns(ds);
    auto remaining = independent_columns(ds, dependent);

    std::vector<double> max_p(static_cast<std::size_t>(r), std::numeric_limits<double>::quiet_NaN());
    std::vector<int> removed;
    while (!remaining.empty()) {
        const FeatureSubset current(remaining);
        const auto design = build_design_matrix(ds, current);
        const auto fit = fit_least_squares(design, ds.target());
        const auto t = coefficient_t_statistics(design, fit);
        const double dof = static_cast<double>(ds.n_rows() - current.size() - 1);

        double worst_p = 0.0;
        std::size_t weakest = 0;
        for (std::size_t j = 0; j < remaining.size(); ++j) {
            const double p = two_sided_pvalue(t(static_cast<Eigen::Index>(j)), dof);
            worst_p = std::max(worst_p, p);
            // Smallest |t| is the largest p-value; comparing |t| avoids ties
            // from p-values underflowing to zero.
            if (std::abs(t(static_cast<Eigen::Index>(j))) < std::abs(t(static_cast<Eigen::Index>(weakest)))) weakest = j;
        }
        max_p[remaining.size() - 1] = worst_p;
        removed.push_back(remaining[weakest]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(weakest));
    }

    std::vector<int> raw = dependent;
    raw.insert(raw.end(), removed.begin(), removed.end());
    std::vector<int> order(removed.rbegin(), removed.rend());
    order.insert(order.end(), dependent.begin(), dependent.end());
    auto out = finish(ds, RankingMethod::PValue, std::move(order), std::move(raw));
    out.dependent_columns = dependent;
    out.max_pvalues = std::move(max_p);
    out.alpha_threshold = alpha_threshold;
    for (double p : out.max_pvalues) out.admissible.push_back(!std::isnan(p) && p < alpha_threshold);
    return out;
}

Ranking rank(const Dataset& ds, RankingMethod method) {
    switch (method) {
        case RankingMethod::Forward: return rank_forward_selection(ds);
        case RankingMethod::Backward: return rank_backward_elimination(ds);
        case RankingMethod::RemoveMaxError: return rank_remove_max_error(ds);
        case RankingMethod::AddMaxError: return rank_add_max_error(ds);
        case RankingMethod::Correlation: return rank_correlation(ds);
        case RankingMethod::PValue: return rank_pvalues(ds);
    }
    throw ValidationError("unknown ranking method");
}

}  // namespace vselect
