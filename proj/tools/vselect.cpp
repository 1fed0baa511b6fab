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

// Command line front end: one subcommand per pipeline stage plus `report`.

#include "vselect/pipeline.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace vselect;

struct CliOptions {
    std::string delimiter = ",";
    std::vector<std::string> methods;
    std::vector<std::string> criteria;
    std::vector<std::string> selection_rankings;
    std::vector<std::string> subsets;
    std::string normalize = "none";
    std::string r2_reference = "test_mean";
    std::uint64_t seed = 0;
    int burn_in = -1;
};

FeatureSubset parse_subset(const std::string& text) {
    std::vector<int> indices;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto next = text.find_first_of(", ", pos);
        const auto token = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!token.empty()) {
            int k = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), k);
            if (ec != std::errc() || ptr != token.data() + token.size()) {
                throw ParseError("bad feature index '" + token + "' in subset '" + text + "'");
            }
            indices.push_back(k);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (indices.empty()) throw ParseError("empty subset '" + text + "'");
    return FeatureSubset::from_one_based(indices);
}

void add_options(CLI::App* cmd, RunConfig& config, CliOptions& cli, bool needs_seed) {
    cmd->add_option("--data", config.dataset_path, "Input table (headered, delimiter-separated)")->required();
    cmd->add_option("--target", config.csv.target_column, "Target column name")->required();
    cmd->add_option("--delimiter", cli.delimiter, "Field delimiter")->capture_default_str();
    cmd->add_option("--exclude", config.csv.exclude_columns, "Columns to ignore");
    cmd->add_option("--features", config.csv.feature_columns, "Explicit feature columns, in order");
    cmd->add_option("--normalize", cli.normalize, "none | zscore | minmax")->capture_default_str();
    cmd->add_option("--methods", cli.methods, "Ranking methods (RM1..RM5, PV or full names)");
    cmd->add_option("--m", config.m_values, "Subset sizes for search and gibbs");
    cmd->add_option("--eta", config.eta, "Gibbs tempering constant")->capture_default_str();
    cmd->add_option("--p-norm", config.p_norm, "Cost norm exponent p")->capture_default_str();
    cmd->add_option("--alpha", config.alpha, "Cost power alpha")->capture_default_str();
    cmd->add_option("--runs", config.runs, "Alternating-optimization restarts")->capture_default_str();
    cmd->add_option("--max-sweeps", config.max_sweeps, "Sweeps per alternating optimization")->capture_default_str();
    cmd->add_flag("--exhaustive", config.exhaustive, "Exhaustive best-subset search instead of restarts");
    auto* seed = cmd->add_option("--seed", cli.seed, "Master random seed");
    if (needs_seed) seed->required();
    cmd->add_option("--sweeps", config.gibbs_sweeps, "Gibbs sweeps per chain")->capture_default_str();
    cmd->add_option("--burn-in", cli.burn_in, "Gibbs burn-in sweeps (default 20%)");
    cmd->add_option("--chains", config.gibbs_chains, "Independent Gibbs chains to pool")->capture_default_str();
    cmd->add_option("--criteria", cli.criteria, "AIC, BIC, HQIC, PVALUE");
    cmd->add_option("--selection-rankings", cli.selection_rankings, "Rankings evaluated by the criteria");
    cmd->add_option("--pvalue-alpha", config.pvalue_alpha, "p-value threshold")->capture_default_str();
    cmd->add_option("--param-offset", config.param_offset, "Added to M in the penalty")->capture_default_str();
    cmd->add_option("--subset", cli.subsets, "1-based subset for cv, e.g. 4,8,14 (repeatable)");
    cmd->add_option("--train-fraction", config.train_fraction, "Training share per split")->capture_default_str();
    cmd->add_option("--cv-runs", config.cv_runs, "Monte Carlo cross-validation runs")->capture_default_str();
    cmd->add_option("--r2-reference", cli.r2_reference, "test_mean | train_mean")->capture_default_str();
    cmd->add_option("--threshold", config.corr_threshold, "Correlation edge threshold")->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--out", config.output_dir, "Output directory (default $VSELECT_OUTPUT_DIR or ./vselect_out)");
}

void finish_config(RunConfig& config, const CliOptions& cli, CLI::App* cmd) {
    if (cli.delimiter == "\\t" || cli.delimiter == "tab") {
        config.csv.delimiter = '\t';
    } else if (cli.delimiter.size() == 1) {
        config.csv.delimiter = cli.delimiter[0];
    } else {
        throw ValidationError("delimiter must be a single character");
    }
    config.csv.normalize = parse_normalization(cli.normalize);
    if (!cli.methods.empty()) {
        config.methods.clear();
        for (const auto& m : cli.methods) config.methods.push_back(parse_method(m));
    }
    if (!cli.criteria.empty()) {
        config.criteria.clear();
        for (const auto& c : cli.criteria) config.criteria.push_back(parse_criterion(c));
    }
    if (!cli.selection_rankings.empty()) {
        config.selection_rankings.clear();
        for (const auto& m : cli.selection_rankings) config.selection_rankings.push_back(parse_method(m));
    }
    for (const auto& s : cli.subsets) config.cv_subsets.push_back(parse_subset(s));
    config.r2_reference = cli.r2_reference == "train_mean" ? R2Reference::TrainMean : R2Reference::TestMean;
    if (cli.r2_reference != "train_mean" && cli.r2_reference != "test_mean") {
        throw ValidationError("--r2-reference must be test_mean or train_mean");
    }
    if (cmd->count("--seed") > 0) config.seed = cli.seed;
    if (cli.burn_in >= 0) config.gibbs_burn_in = cli.burn_in;
    if (config.output_dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        config.output_dir = env && *env ? env : "vselect_out";
    }
}

void print_summary(const Report& report, std::ostream& os) {
    os << "dataset: N=" << report.n_rows << " R=" << report.n_features << " target=" << report.target << '\n';
    for (const auto& e : report.rankings) {
        os << method_name(e.ranking.method) << ":";
        const auto& order = e.ranking.order;
        for (std::size_t i = 0; i < std::min<std::size_t>(order.size(), 20); ++i) os << ' ' << order[i] + 1;
        os << (order.size() > 20 ? " ..." : "") << '\n';
    }
    for (const auto& e : report.order_selection) {
        os << criterion_name(e.selection.criterion) << " (" << e.ranking << "): m* = " << e.selection.m_star << '\n';
    }
    for (const auto& e : report.best_sequences) {
        os << "best m=" << e.m << ": " << e.result.subset.to_string() << " cost=" << format_double(e.result.cost)
           << '\n';
    }
    for (const auto& e : report.inclusion_profiles) {
        const auto& p = e.profile.probabilities;
        const auto top = std::max_element(p.begin(), p.end()) - p.begin();
        os << "gibbs m=" << e.m << ": most included feature " << top + 1 << " (" << format_double(p[top]) << ")\n";
    }
    for (const auto& e : report.cross_validation) {
        os << "cv " << e.subset.to_string() << ": MAE=" << format_double(e.report.mae.mean)
           << " MSE=" << format_double(e.report.mse.mean) << " R2=" << format_double(e.report.r2.mean)
           << (e.report.skip_warning ? " [warning: >1% runs skipped]" : "") << '\n';
    }
    if (report.correlation) os << "correlation edges: " << report.correlation->edges.size() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable selection for multiple linear regression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    struct Command {
        const char* name;
        const char* help;
        std::vector<Stage> stages;
        bool needs_seed;
    };
    const std::vector<Command> commands = {
        {"rank", "Rank all features with the selected methods", {Stage::Rank}, false},
        {"search", "Best subset of each size m", {Stage::Search}, true},
        {"gibbs", "Gibbs inclusion probabilities for each size m", {Stage::Gibbs}, true},
        {"select", "Choose the number of features along rankings", {Stage::Select}, false},
        {"cv", "Monte Carlo cross-validation of fixed subsets", {Stage::Cv}, true},
        {"corr", "Feature correlation graph", {Stage::Corr}, false},
        {"report", "Full pipeline", all_stages(), true},
    };

    std::vector<RunConfig> configs(commands.size());
    std::vector<CliOptions> clis(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
        add_options(sub, configs[i], clis[i], commands[i].needs_seed);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            auto& config = configs[i];
            config.stages = {commands[i].stages.begin(), commands[i].stages.end()};
            finish_config(config, clis[i], subs[i]);
            const auto report = run_pipeline(config);
            print_summary(report, std::cout);
            if (!report.complete) {
                std::cerr << "error: stage '" << report.failed_stage << "' failed: " << report.error
                          << " (partial outputs in " << config.output_dir << ")\n";
                return report.exit_code;
            }
            std::cout << "wrote " << config.output_dir << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitOk;
}
