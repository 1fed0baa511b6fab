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

#include "vselect/selection.hpp"

#include "vselect/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vselect {

std::string_view criterion_name(Criterion criterion) {
    switch (criterion) {
        case Criterion::AIC: return "AIC";
        case Criterion::BIC: return "BIC";
        case Criterion::HQIC: return "HQIC";
        case Criterion::PValue: return "PVALUE";
    }
    return "unknown";
}

Criterion parse_criterion(std::string_view name) {
    for (auto c : {Criterion::AIC, Criterion::BIC, Criterion::HQIC, Criterion::PValue}) {
        if (name == criterion_name(c)) return c;
    }
    if (name == "aic") return Criterion::AIC;
    if (name == "bic") return Criterion::BIC;
    if (name == "hqic") return Criterion::HQIC;
    if (name == "pvalue") return Criterion::PValue;
    throw ValidationError("unknown criterion '" + std::string(name) + "'");
}

double penalty_weight(Criterion criterion, int n) {
    const double dn = static_cast<double>(n);
    switch (criterion) {
        case Criterion::AIC: return 1.0;
        case Criterion::BIC: return std::log(dn) / 2.0;
        case Criterion::HQIC: return std::log(std::log(dn));
        case Criterion::PValue: break;
    }
    throw ValidationError("p-value stopping has no penalty weight");
}

double information_criterion_value(const FitResult& fit, int n, int m, Criterion criterion, int param_offset) {
    if (n < m + 2) {
        throw ValidationError("information criteria need n >= m + 2 (n = " + std::to_string(n) +
                              ", m = " + std::to_string(m) + ")");
    }
    if (fit.mse <= 0.0) return -std::numeric_limits<double>::infinity();
    const double dn = static_cast<double>(n);
    const double fitting = dn * std::log(2.0 * std::numbers::pi * fit.mse) + dn;
    return fitting + 2.0 * penalty_weight(criterion, n) * static_cast<double>(m + param_offset);
}

OrderSelection select_order(const Dataset& ds, const Ranking& ranking, Criterion criterion, int param_offset) {
    if (criterion == Criterion::PValue) return pvalue_stopping(ds, ranking);
    const int r = ds.n_features();
    if (static_cast<int>(ranking.order.size()) != r) throw ValidationError("ranking does not cover all features");

    OrderSelection out;
    out.criterion = criterion;
    out.curve.assign(static_cast<std::size_t>(r), std::numeric_limits<double>::infinity());
    out.skipped.assign(static_cast<std::size_t>(r), false);

    const int n = ds.n_rows();
    // Residual RMS below 1e-12 of the target RMS counts as a perfect fit.
    const double perfect_mse = 1e-24 * ds.target().squaredNorm() / static_cast<double>(n);
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<int> prefix;
    for (int m = 1; m <= r; ++m) {
        prefix.push_back(ranking.order[static_cast<std::size_t>(m - 1)]);
        const auto idx = static_cast<std::size_t>(m - 1);
        if (n < m + 2) {
            out.skipped[idx] = true;
            continue;
        }
        const auto fit = try_fit_subset(ds, FeatureSubset(prefix));
        if (!fit) {
            out.skipped[idx] = true;
            continue;
        }
        const double value = fit->mse <= perfect_mse ? -std::numeric_limits<double>::infinity()
                                                     : information_criterion_value(*fit, n, m, criterion, param_offset);
        out.curve[idx] = value;
        if (best == 0 || value < best_value) {
            best = m;
            best_value = value;
        }
    }
    if (best == 0) throw DegenerateStepError("no ranking prefix admits a criterion value");
    out.m_star = best;
    return out;
}

OrderSelection pvalue_stopping(const Dataset& ds, const Ranking& pv_ranking, double alpha_threshold) {
    if (pv_ranking.method != RankingMethod::PValue || pv_ranking.max_pvalues.empty()) {
        throw ValidationError("p-value stopping requires a ranking produced by rank_pvalues");
    }
    if (static_cast<int>(pv_ranking.max_pvalues.size()) != ds.n_features()) {
        throw ValidationError("p-value ranking does not match the dataset");
    }
    OrderSelection out;
    out.criterion = Criterion::PValue;
    out.m_star = 0;
    for (std::size_t i = 0; i < pv_ranking.max_pvalues.size(); ++i) {
        const double p = pv_ranking.max_pvalues[i];
        const bool ok = !std::isnan(p) && p < alpha_threshold;
        out.admissible.push_back(ok);
        out.skipped.push_back(std::isnan(p));
        out.curve.push_back(p);
        if (ok) out.m_star = static_cast<int>(i) + 1;
    }
    if (out.m_star == 0) {
        out.none_admissible = true;
        out.m_star = 1;
    }
    return out;
}

int elbow_annotation(const std::vector<double>& error_curve) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<int> ms;
    for (std::size_t i = 0; i < error_curve.size(); ++i) {
        if (error_curve[i] > 0.0 && std::isfinite(error_curve[i])) {
            xs.push_back(std::log(static_cast<double>(i + 1)));
            ys.push_back(std::log(error_curve[i]));
            ms.push_back(static_cast<int>(i + 1));
        }
    }
    int best = 0;
    double best_kappa = -1.0;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        // Curvature of the circle through three consecutive points: 4 * area / (abc).
        const double ax = xs[i] - xs[i - 1], ay = ys[i] - ys[i - 1];
        const double bx = xs[i + 1] - xs[i], by = ys[i + 1] - ys[i];
        const double cx = xs[i + 1] - xs[i - 1], cy = ys[i + 1] - ys[i - 1];
        const double cross = ax * by - ay * bx;
        const double denom = std::hypot(ax, ay) * std::hypot(bx, by) * std::hypot(cx, cy);
        if (denom <= 0.0) continue;
        // Only convex bends (slope flattening as M grows) count as elbows.
        if (cross <= 0.0) continue;
        const double kappa = 2.0 * cross / denom;
        if (kappa > best_kappa) {
            best_kappa = kappa;
            best = ms[i];
        }
    }
    return best;
}

}  // namespace vselect
