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

#include "vselect/error.hpp"
#include "vselect/gibbs.hpp"
#include "vselect/io.hpp"
#include "vselect/ranking.hpp"
#include "vselect/selection.hpp"
#include "vselect/subset_search.hpp"
#include "vselect/validation.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vselect {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;
/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "VSELECT_OUTPUT_DIR";

enum class Stage { Corr, Rank, Select, Search, Gibbs, Cv };

std::string_view stage_name(Stage stage);
Stage parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();

struct RunConfig {
    std::string dataset_path;
    CsvOptions csv;
    std::set<Stage> stages;

    std::vector<RankingMethod> methods = all_methods();
    std::vector<int> m_values;  // subset sizes for search and Gibbs
    double eta = kDefaultEta;
    double p_norm = 1.0;
    double alpha = 1.0;
    int runs = kDefaultRestarts;
    int max_sweeps = kDefaultMaxSweeps;
    bool exhaustive = false;
    std::optional<std::uint64_t> seed;

    int gibbs_sweeps = 2000;
    std::optional<int> gibbs_burn_in;
    int gibbs_chains = 1;

    std::vector<Criterion> criteria = {Criterion::AIC, Criterion::BIC, Criterion::HQIC, Criterion::PValue};
    std::vector<RankingMethod> selection_rankings = {RankingMethod::Forward, RankingMethod::Backward};
    double pvalue_alpha = kDefaultPValueThreshold;
    int param_offset = 0;

    std::vector<FeatureSubset> cv_subsets;  // empty: best sequences from the search stage
    double train_fraction = 0.8;
    int cv_runs = 20000;
    R2Reference r2_reference = R2Reference::TestMean;

    double corr_threshold = 0.95;

    // Execution only; excluded from the config hash.
    unsigned threads = 1;
    std::string output_dir;

    CostParams cost() const { return {p_norm, alpha}; }
    /// Throws ValidationError for inconsistent settings.
    void validate() const;
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

struct RankingEntry {
    Ranking ranking;
    int elbow = 0;  // maximum-curvature prefix of the log-log error curve; annotation only
};

struct BestSequenceEntry {
    int m = 0;
    std::string method;  // "multi_restart" or "exhaustive"
    SearchResult result;
};

struct InclusionEntry {
    int m = 0;
    double eta = 0.0;
    int sweeps = 0;
    int burn_in = 0;
    int chains = 1;
    InclusionProfile profile;
};

struct SelectionEntry {
    std::string ranking;  // method name
    OrderSelection selection;
};

struct CvEntry {
    FeatureSubset subset;
    CvReport report;
};

/// NamedModel without residuals.
struct ModelEntry {
    FeatureSubset subset;
    double intercept = 0.0;
    std::vector<std::pair<std::string, double>> coefficients;
    double mae = 0.0, mse = 0.0, rmse = 0.0, r_squared = 0.0;
};

struct Report {
    int schema_version = kSchemaVersion;
    std::string artifact = "vselect";
    std::string version = std::string(kVersion);
    std::optional<std::uint64_t> seed;
    std::string config_hash;
    nlohmann::json config;

    std::string target;
    int n_rows = 0;
    int n_features = 0;
    std::vector<std::string> labels;

    bool complete = true;
    std::string failed_stage;
    std::string error;
    int exit_code = kExitOk;

    std::vector<RankingEntry> rankings;
    std::vector<BestSequenceEntry> best_sequences;
    std::vector<InclusionEntry> inclusion_profiles;
    std::vector<SelectionEntry> order_selection;
    std::vector<CvEntry> cross_validation;
    std::vector<ModelEntry> named_models;
    std::optional<CorrelationGraph> correlation;
};

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
/// Pretty-printed, newline-terminated; stable byte for byte.
std::string serialize_report(const Report& report);

/**
 * Loads the dataset, runs the requested stages in a fixed order and, when
 * output_dir is set, writes report.json plus flat per-figure CSV files.
 * Stage failures do not throw: the returned report has complete = false,
 * names the failed stage and carries the exit code. Config and ingestion
 * errors throw.
 */
Report run_pipeline(const RunConfig& config);
Report run_pipeline(const RunConfig& config, const Dataset& dataset);

/// Flat files written next to report.json.
void write_outputs(const Report& report, const std::string& output_dir);

}  // namespace vselect
