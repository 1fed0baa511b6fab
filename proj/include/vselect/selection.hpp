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
#include "vselect/ranking.hpp"

#include <string_view>
#include <vector>

namespace vselect {

enum class Criterion { AIC, BIC, HQIC, PValue };

std::string_view criterion_name(Criterion criterion);
Criterion parse_criterion(std::string_view name);

/// Per-parameter penalty weight: 1 (AIC), ln(n)/2 (BIC), ln(ln(n)) (HQIC).
double penalty_weight(Criterion criterion, int n);

/**
 * -2 log p(y | beta) + 2 * xi * (m + param_offset), with the Gaussian
 * likelihood at sigma^2 = MSE: n * ln(2 pi MSE) + n. A perfect fit
 * (MSE = 0) returns -infinity, which wins every comparison.
 */
double information_criterion_value(const FitResult& fit, int n, int m, Criterion criterion,
                                   int param_offset = 0);

struct OrderSelection {
    Criterion criterion = Criterion::BIC;
    int m_star = 1;
    /// Criterion value per prefix size (AIC/BIC/HQIC); +inf where skipped.
    std::vector<double> curve;
    /// PValue: prefix admissibility (all p < threshold).
    std::vector<bool> admissible;
    std::vector<bool> skipped;
    /// PValue: no prefix was admissible; m_star falls back to 1.
    bool none_admissible = false;
};

/// argmin over ranking prefixes M = 1..R; ties to the smallest M.
OrderSelection select_order(const Dataset& dataset, const Ranking& ranking, Criterion criterion,
                            int param_offset = 0);

/// Largest prefix of a p-value ranking whose coefficients all have
/// p < alpha_threshold, i.e. where backward elimination stops.
OrderSelection pvalue_stopping(const Dataset& dataset, const Ranking& pv_ranking,
                               double alpha_threshold = kDefaultPValueThreshold);

/// Prefix size (1-based) of maximum discrete curvature of the log-log error
/// curve. Annotation only; never used for selection. 0 if undefined.
int elbow_annotation(const std::vector<double>& error_curve);

}  // namespace vselect
