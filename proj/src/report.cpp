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

// JSON encoding of run configurations and reports.

#include "vselect/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace vselect {

using nlohmann::json;

namespace {

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double to_num(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

json nums(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(num(x));
    return out;
}

std::vector<double> to_nums(const json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(to_num(x));
    return out;
}

json one_based(const std::vector<int>& v) {
    json out = json::array();
    for (int k : v) out.push_back(k + 1);
    return out;
}

std::vector<int> zero_based(const json& j) {
    std::vector<int> out;
    for (const auto& x : j) out.push_back(x.get<int>() - 1);
    return out;
}

// Positions (1-based) of set flags.
json flagged(const std::vector<bool>& flags) {
    json out = json::array();
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) out.push_back(i + 1);
    }
    return out;
}

std::vector<bool> unflag(const json& j, std::size_t size) {
    std::vector<bool> out(size, false);
    for (const auto& x : j) out[x.get<std::size_t>() - 1] = true;
    return out;
}

std::string_view r2_name(R2Reference r) { return r == R2Reference::TestMean ? "test_mean" : "train_mean"; }

R2Reference parse_r2(std::string_view s) {
    if (s == "test_mean") return R2Reference::TestMean;
    if (s == "train_mean") return R2Reference::TrainMean;
    throw ValidationError("unknown R^2 reference '" + std::string(s) + "'");
}

json summary_json(const MetricSummary& s) {
    return {{"mean", num(s.mean)}, {"stddev", num(s.stddev)}, {"min", num(s.min)}, {"max", num(s.max)}};
}

MetricSummary summary_from(const json& j) {
    return {to_num(j.at("mean")), to_num(j.at("stddev")), to_num(j.at("min")), to_num(j.at("max"))};
}

}  // namespace

json config_to_json(const RunConfig& c) {
    json stages = json::array();
    for (auto s : c.stages) stages.push_back(stage_name(s));
    json methods = json::array();
    for (auto m : c.methods) methods.push_back(method_name(m));
    json criteria = json::array();
    for (auto k : c.criteria) criteria.push_back(criterion_name(k));
    json sel = json::array();
    for (auto m : c.selection_rankings) sel.push_back(method_name(m));
    json cv_subsets = json::array();
    for (const auto& s : c.cv_subsets) cv_subsets.push_back(one_based(s.indices()));

    return {
        {"dataset_path", c.dataset_path},
        {"csv",
         {{"target_column", c.csv.target_column},
          {"delimiter", std::string(1, c.csv.delimiter)},
          {"exclude_columns", c.csv.exclude_columns},
          {"feature_columns", c.csv.feature_columns},
          {"normalize", normalization_name(c.csv.normalize)}}},
        {"stages", stages},
        {"methods", methods},
        {"m_values", c.m_values},
        {"eta", num(c.eta)},
        {"p_norm", num(c.p_norm)},
        {"alpha", num(c.alpha)},
        {"runs", c.runs},
        {"max_sweeps", c.max_sweeps},
        {"exhaustive", c.exhaustive},
        {"seed", c.seed ? json(*c.seed) : json(nullptr)},
        {"gibbs",
         {{"sweeps", c.gibbs_sweeps},
          {"burn_in", c.gibbs_burn_in ? json(*c.gibbs_burn_in) : json(nullptr)},
          {"chains", c.gibbs_chains}}},
        {"criteria", criteria},
        {"selection_rankings", sel},
        {"pvalue_alpha", num(c.pvalue_alpha)},
        {"param_offset", c.param_offset},
        {"cv_subsets", cv_subsets},
        {"train_fraction", num(c.train_fraction)},
        {"cv_runs", c.cv_runs},
        {"r2_reference", r2_name(c.r2_reference)},
        {"corr_threshold", num(c.corr_threshold)},
    };
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.dataset_path = j.at("dataset_path").get<std::string>();
    const auto& csv = j.at("csv");
    c.csv.target_column = csv.at("target_column").get<std::string>();
    c.csv.delimiter = csv.at("delimiter").get<std::string>().at(0);
    c.csv.exclude_columns = csv.at("exclude_columns").get<std::vector<std::string>>();
    c.csv.feature_columns = csv.at("feature_columns").get<std::vector<std::string>>();
    c.csv.normalize = parse_normalization(csv.at("normalize").get<std::string>());
    for (const auto& s : j.at("stages")) c.stages.insert(parse_stage(s.get<std::string>()));
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    c.m_values = j.at("m_values").get<std::vector<int>>();
    c.eta = to_num(j.at("eta"));
    c.p_norm = to_num(j.at("p_norm"));
    c.alpha = to_num(j.at("alpha"));
    c.runs = j.at("runs").get<int>();
    c.max_sweeps = j.at("max_sweeps").get<int>();
    c.exhaustive = j.at("exhaustive").get<bool>();
    if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    const auto& g = j.at("gibbs");
    c.gibbs_sweeps = g.at("sweeps").get<int>();
    if (!g.at("burn_in").is_null()) c.gibbs_burn_in = g.at("burn_in").get<int>();
    c.gibbs_chains = g.at("chains").get<int>();
    c.criteria.clear();
    for (const auto& k : j.at("criteria")) c.criteria.push_back(parse_criterion(k.get<std::string>()));
    c.selection_rankings.clear();
    for (const auto& m : j.at("selection_rankings")) c.selection_rankings.push_back(parse_method(m.get<std::string>()));
    c.pvalue_alpha = to_num(j.at("pvalue_alpha"));
    c.param_offset = j.at("param_offset").get<int>();
    for (const auto& s : j.at("cv_subsets")) c.cv_subsets.emplace_back(zero_based(s));
    c.train_fraction = to_num(j.at("train_fraction"));
    c.cv_runs = j.at("cv_runs").get<int>();
    c.r2_reference = parse_r2(j.at("r2_reference").get<std::string>());
    c.corr_threshold = to_num(j.at("corr_threshold"));
    return c;
}

std::string config_hash(const RunConfig& config) {
    const auto text = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json report_to_json(const Report& r) {
    json rankings = json::array();
    for (const auto& e : r.rankings) {
        const auto& k = e.ranking;
        json item = {{"method", method_name(k.method)},
                     {"order", one_based(k.order)},
                     {"raw_order", one_based(k.raw_order)},
                     {"error_curve", nums(k.error_curve.mae)},
                     {"degenerate_prefixes", flagged(k.error_curve.degenerate)},
                     {"dependent_columns", one_based(k.dependent_columns)},
                     {"elbow_annotation", e.elbow}};
        if (k.method == RankingMethod::PValue) {
            item["max_pvalues"] = nums(k.max_pvalues);
            item["admissible_prefixes"] = flagged(k.admissible);
            item["alpha_threshold"] = num(k.alpha_threshold);
        }
        rankings.push_back(std::move(item));
    }

    json best = json::array();
    for (const auto& e : r.best_sequences) {
        best.push_back({{"m", e.m},
                        {"method", e.method},
                        {"subset", one_based(e.result.subset.indices())},
                        {"cost", num(e.result.cost)},
                        {"iterations", e.result.iterations},
                        {"converged", e.result.converged},
                        {"restarts_used", e.result.restarts_used}});
    }

    json inclusion = json::array();
    for (const auto& e : r.inclusion_profiles) {
        inclusion.push_back({{"m", e.m},
                             {"eta", num(e.eta)},
                             {"sweeps", e.sweeps},
                             {"burn_in", e.burn_in},
                             {"chains", e.chains},
                             {"pooled", e.profile.pooled},
                             {"retained_states", e.profile.retained_states},
                             {"uniform_reference", num(e.profile.uniform_reference)},
                             {"probabilities", nums(e.profile.probabilities)}});
    }

    json selection = json::array();
    for (const auto& e : r.order_selection) {
        const auto& s = e.selection;
        selection.push_back({{"ranking", e.ranking},
                             {"criterion", criterion_name(s.criterion)},
                             {"m_star", s.m_star},
                             {"curve", nums(s.curve)},
                             {"skipped_prefixes", flagged(s.skipped)},
                             {"admissible_prefixes", flagged(s.admissible)},
                             {"none_admissible", s.none_admissible}});
    }

    json cv = json::array();
    for (const auto& e : r.cross_validation) {
        const auto& c = e.report;
        cv.push_back({{"subset", one_based(e.subset.indices())},
                      {"runs", c.runs},
                      {"completed_runs", c.completed_runs},
                      {"train_fraction", num(c.train_fraction)},
                      {"seed", c.seed},
                      {"r2_reference", r2_name(c.r2_reference)},
                      {"mae", summary_json(c.mae)},
                      {"mse", summary_json(c.mse)},
                      {"rmse", summary_json(c.rmse)},
                      {"r2", summary_json(c.r2)},
                      {"resampled", c.resampled},
                      {"skipped", c.skipped},
                      {"skip_warning", c.skip_warning}});
    }

    json models = json::array();
    for (const auto& m : r.named_models) {
        json coefs = json::array();
        for (std::size_t i = 0; i < m.coefficients.size(); ++i) {
            coefs.push_back({{"feature", m.subset.indices()[i] + 1},
                             {"label", m.coefficients[i].first},
                             {"value", num(m.coefficients[i].second)}});
        }
        models.push_back({{"subset", one_based(m.subset.indices())},
                          {"intercept", num(m.intercept)},
                          {"coefficients", coefs},
                          {"mae", num(m.mae)},
                          {"mse", num(m.mse)},
                          {"rmse", num(m.rmse)},
                          {"r_squared", num(m.r_squared)}});
    }

    json corr = nullptr;
    if (r.correlation) {
        json edges = json::array();
        for (const auto& e : r.correlation->edges) edges.push_back({{"i", e.i + 1}, {"j", e.j + 1}, {"rho", num(e.rho)}});
        corr = {{"threshold", num(r.correlation->threshold)}, {"edges", edges}};
    }

    return {
        {"schema_version", r.schema_version},
        {"provenance",
         {{"artifact", r.artifact},
          {"version", r.version},
          {"seed", r.seed ? json(*r.seed) : json(nullptr)},
          {"config_hash", r.config_hash},
          {"config", r.config}}},
        {"dataset", {{"target", r.target}, {"n_rows", r.n_rows}, {"n_features", r.n_features}, {"labels", r.labels}}},
        {"status",
         {{"complete", r.complete},
          {"failed_stage", r.failed_stage.empty() ? json(nullptr) : json(r.failed_stage)},
          {"error", r.error.empty() ? json(nullptr) : json(r.error)},
          {"exit_code", r.exit_code}}},
        {"rankings", rankings},
        {"best_sequences", best},
        {"inclusion_profiles", inclusion},
        {"order_selection", selection},
        {"cross_validation", cv},
        {"named_models", models},
        {"correlation_graph", corr},
    };
}

Report report_from_json(const json& j) {
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
        throw ValidationError("unsupported report schema version " + std::to_string(r.schema_version));
    }
    const auto& prov = j.at("provenance");
    r.artifact = prov.at("artifact").get<std::string>();
    r.version = prov.at("version").get<std::string>();
    if (!prov.at("seed").is_null()) r.seed = prov.at("seed").get<std::uint64_t>();
    r.config_hash = prov.at("config_hash").get<std::string>();
    r.config = prov.at("config");

    const auto& ds = j.at("dataset");
    r.target = ds.at("target").get<std::string>();
    r.n_rows = ds.at("n_rows").get<int>();
    r.n_features = ds.at("n_features").get<int>();
    r.labels = ds.at("labels").get<std::vector<std::string>>();

    const auto& st = j.at("status");
    r.complete = st.at("complete").get<bool>();
    if (!st.at("failed_stage").is_null()) r.failed_stage = st.at("failed_stage").get<std::string>();
    if (!st.at("error").is_null()) r.error = st.at("error").get<std::string>();
    r.exit_code = st.at("exit_code").get<int>();

    for (const auto& item : j.at("rankings")) {
        RankingEntry e;
        auto& k = e.ranking;
        k.method = parse_method(item.at("method").get<std::string>());
        k.order = zero_based(item.at("order"));
        k.raw_order = zero_based(item.at("raw_order"));
        k.error_curve.mae = to_nums(item.at("error_curve"));
        k.error_curve.degenerate = unflag(item.at("degenerate_prefixes"), k.error_curve.mae.size());
        k.dependent_columns = zero_based(item.at("dependent_columns"));
        e.elbow = item.at("elbow_annotation").get<int>();
        if (item.contains("max_pvalues")) {
            k.max_pvalues = to_nums(item.at("max_pvalues"));
            k.admissible = unflag(item.at("admissible_prefixes"), k.max_pvalues.size());
            k.alpha_threshold = to_num(item.at("alpha_threshold"));
        }
        r.rankings.push_back(std::move(e));
    }

    for (const auto& item : j.at("best_sequences")) {
        BestSequenceEntry e;
        e.m = item.at("m").get<int>();
        e.method = item.at("method").get<std::string>();
        e.result.subset = FeatureSubset(zero_based(item.at("subset")));
        e.result.cost = to_num(item.at("cost"));
        e.result.iterations = item.at("iterations").get<int>();
        e.result.converged = item.at("converged").get<bool>();
        e.result.restarts_used = item.at("restarts_used").get<int>();
        r.best_sequences.push_back(std::move(e));
    }

    for (const auto& item : j.at("inclusion_profiles")) {
        InclusionEntry e;
        e.m = item.at("m").get<int>();
        e.eta = to_num(item.at("eta"));
        e.sweeps = item.at("sweeps").get<int>();
        e.burn_in = item.at("burn_in").get<int>();
        e.chains = item.at("chains").get<int>();
        e.profile.pooled = item.at("pooled").get<bool>();
        e.profile.retained_states = item.at("retained_states").get<long long>();
        e.profile.uniform_reference = to_num(item.at("uniform_reference"));
        e.profile.probabilities = to_nums(item.at("probabilities"));
        r.inclusion_profiles.push_back(std::move(e));
    }

    for (const auto& item : j.at("order_selection")) {
        SelectionEntry e;
        e.ranking = item.at("ranking").get<std::string>();
        auto& s = e.selection;
        s.criterion = parse_criterion(item.at("criterion").get<std::string>());
        s.m_star = item.at("m_star").get<int>();
        s.curve = to_nums(item.at("curve"));
        s.skipped = unflag(item.at("skipped_prefixes"), s.curve.size());
        if (s.criterion == Criterion::PValue) s.admissible = unflag(item.at("admissible_prefixes"), s.curve.size());
        s.none_admissible = item.at("none_admissible").get<bool>();
        r.order_selection.push_back(std::move(e));
    }

    for (const auto& item : j.at("cross_validation")) {
        CvEntry e;
        e.subset = FeatureSubset(zero_based(item.at("subset")));
        auto& c = e.report;
        c.runs = item.at("runs").get<int>();
        c.completed_runs = item.at("completed_runs").get<int>();
        c.train_fraction = to_num(item.at("train_fraction"));
        c.seed = item.at("seed").get<std::uint64_t>();
        c.r2_reference = parse_r2(item.at("r2_reference").get<std::string>());
        c.mae = summary_from(item.at("mae"));
        c.mse = summary_from(item.at("mse"));
        c.rmse = summary_from(item.at("rmse"));
        c.r2 = summary_from(item.at("r2"));
        c.resampled = item.at("resampled").get<int>();
        c.skipped = item.at("skipped").get<int>();
        c.skip_warning = item.at("skip_warning").get<bool>();
        r.cross_validation.push_back(std::move(e));
    }

    for (const auto& item : j.at("named_models")) {
        ModelEntry m;
        m.subset = FeatureSubset(zero_based(item.at("subset")));
        m.intercept = to_num(item.at("intercept"));
        for (const auto& c : item.at("coefficients")) {
            m.coefficients.emplace_back(c.at("label").get<std::string>(), to_num(c.at("value")));
        }
        m.mae = to_num(item.at("mae"));
        m.mse = to_num(item.at("mse"));
        m.rmse = to_num(item.at("rmse"));
        m.r_squared = to_num(item.at("r_squared"));
        r.named_models.push_back(std::move(m));
    }

    if (const auto& corr = j.at("correlation_graph"); !corr.is_null()) {
        CorrelationGraph g;
        g.threshold = to_num(corr.at("threshold"));
        for (const auto& e : corr.at("edges")) {
            g.edges.push_back({e.at("i").get<int>() - 1, e.at("j").get<int>() - 1, to_num(e.at("rho"))});
        }
        r.correlation = std::move(g);
    }
    return r;
}

std::string serialize_report(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace vselect
