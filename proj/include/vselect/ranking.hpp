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

#include <string>
#include <string_view>
#include <vector>

namespace vselect {

enum class RankingMethod {
    Forward,         // RM1: add features, minimizing the error
    Backward,        // RM2: remove features, minimizing the error
    RemoveMaxError,  // RM3: remove features, maximizing the error
    AddMaxError,     // RM4: add features, maximizing the error
    Correlation,     // RM5: |Pearson rho| with the target
    PValue,          // backward stepwise on coefficient t-tests
};

std::string_view method_name(RankingMethod method);
RankingMethod parse_method(std::string_view name);
const std::vector<RankingMethod>& all_methods();

/// MAE of the LS fit on each prefix of an order.
struct ErrorCurve {
    std::vector<double> mae;        // entry M-1 is the prefix of length M
    std::vector<bool> degenerate;   // prefix was rank deficient; value carried from M-1
};

struct Ranking {
    RankingMethod method = RankingMethod::Forward;
    /// Best-to-worst, 0-based.
    std::vector<int> order;
    /// Sequence in which the procedure visited features (additions or
    /// removals, before any reversal).
    std::vector<int> raw_order;
    ErrorCurve error_curve;
    /// Columns dropped up front because the full model was rank deficient.
    std::vector<int> dependent_columns;
    /// PValue only: largest coefficient p-value in the model formed by the
    /// first M features of `order` (NaN where that model is degenerate), and
    /// whether every p-value there is below `alpha_threshold`.
    std::vector<double> max_pvalues;
    std::vector<bool> admissible;
    double alpha_threshold = 0.0;
};

inline constexpr double kDefaultPValueThreshold = 0.05;

Ranking rank_forward_selection(const Dataset& dataset);
Ranking rank_backward_elimination(const Dataset& dataset);
Ranking rank_remove_max_error(const Dataset& dataset);
Ranking rank_add_max_error(const Dataset& dataset);
Ranking rank_correlation(const Dataset& dataset);
Ranking rank_pvalues(const Dataset& dataset, double alpha_threshold = kDefaultPValueThreshold);

Ranking rank(const Dataset& dataset, RankingMethod method);

ErrorCurve error_curve(const Dataset& dataset, const std::vector<int>& order);

/// Columns that do not raise the rank of [1 | x_1 .. x_k] when scanned in
/// ascending index order.
std::vector<int> dependent_columns(const Dataset& dataset);

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
double two_sided_pvalue(double t, double dof);

}  // namespace vselect
