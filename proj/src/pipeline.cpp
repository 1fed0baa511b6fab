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

#include "vselect/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vselect {

namespace fs = std::filesystem;

std::string_view stage_name(Stage stage) {
    switch (stage) {
        case Stage::Corr: return "corr";
        case Stage::Rank: return "rank";
        case Stage::Select: return "select";
        case Stage::Search: return "search";
        case Stage::Gibbs: return "gibbs";
        case Stage::Cv: return "cv";
    }
    return "unknown";
}

Stage parse_stage(std::string_view name) {
    for (auto s : all_stages()) {
        if (name == stage_name(s)) return s;
    }
    throw ValidationError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages = {Stage::Corr, Stage::Rank,  Stage::Select,
                                              Stage::Search, Stage::Gibbs, Stage::Cv};
    return stages;
}

void RunConfig::validate() const {
    if (stages.empty()) throw ValidationError("no stages requested");
    const bool needs_seed = stages.contains(Stage::Search) || stages.contains(Stage::Gibbs) || stages.contains(Stage::Cv);
    if (needs_seed && !seed) throw ValidationError("--seed is required for search, gibbs and cv");
    if ((stages.contains(Stage::Search) || stages.contains(Stage::Gibbs)) && m_values.empty()) {
        throw ValidationError("search and gibbs need at least one subset size m");
    }
    if (stages.contains(Stage::Cv) && cv_subsets.empty() && !stages.contains(Stage::Search)) {
        throw ValidationError("cv needs --subset or a search stage to supply subsets");
    }
    if (!(p_norm > 0.0) || !(alpha > 0.0)) throw ValidationError("p_norm and alpha must be positive");
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    if (runs < 1 || cv_runs < 1 || max_sweeps < 1 || gibbs_sweeps < 1 || gibbs_chains < 1) {
        throw ValidationError("run, sweep and chain counts must be positive");
    }
    if (!(pvalue_alpha > 0.0 && pvalue_alpha < 1.0)) throw ValidationError("p-value threshold must lie in (0, 1)");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("train fraction must lie in (0, 1)");
}

namespace {

void add_ranking(Report& report, Ranking ranking) {
    RankingEntry entry;
    entry.elbow = elbow_annotation(ranking.error_curve.mae);
    entry.ranking = std::move(ranking);
    report.rankings.push_back(std::move(entry));
}

const Ranking& ensure_ranking(Report& report, const Dataset& ds, RankingMethod method, double pvalue_alpha) {
    for (const auto& e : report.rankings) {
        if (e.ranking.method == method) return e.ranking;
    }
    add_ranking(report, method == RankingMethod::PValue ? rank_pvalues(ds, pvalue_alpha) : rank(ds, method));
    return report.rankings.back().ranking;
}

}  // namespace

Report run_pipeline(const RunConfig& config) {
    config.validate();
    const auto ds = ingest_csv(config.dataset_path, config.csv);
    return run_pipeline(config, ds);
}

Report run_pipeline(const RunConfig& config, const Dataset& ds) {
    config.validate();
    Report report;
    report.seed = config.seed;
    report.config = config_to_json(config);
    report.config_hash = config_hash(config);
    report.target = config.csv.target_column;
    report.n_rows = ds.n_rows();
    report.n_features = ds.n_features();
    report.labels = ds.labels();

    auto run_stage = [&](Stage stage, auto&& body) {
        if (!report.complete || !config.stages.contains(stage)) return;
        try {
            body();
        } catch (const Error& e) {
            report.complete = false;
            report.failed_stage = std::string(stage_name(stage));
            report.error = e.what();
            report.exit_code = e.exit_code();
        } catch (const std::exception& e) {
            report.complete = false;
            report.failed_stage = std::string(stage_name(stage));
            report.error = e.what();
            report.exit_code = kExitComputation;
        }
    };

    run_stage(Stage::Corr, [&] { report.correlation = correlation_graph(ds, config.corr_threshold); });

    run_stage(Stage::Rank, [&] {
        for (auto method : config.methods) ensure_ranking(report, ds, method, config.pvalue_alpha);
    });

    run_stage(Stage::Select, [&] {
        for (auto criterion : config.criteria) {
            if (criterion == Criterion::PValue) {
                const auto& pv = ensure_ranking(report, ds, RankingMethod::PValue, config.pvalue_alpha);
                report.order_selection.push_back(
                    {std::string(method_name(RankingMethod::PValue)), pvalue_stopping(ds, pv, config.pvalue_alpha)});
                continue;
            }
            for (auto method : config.selection_rankings) {
                // Copy: ensure_ranking may grow report.rankings.
                const Ranking ranking = ensure_ranking(report, ds, method, config.pvalue_alpha);
                report.order_selection.push_back(
                    {std::string(method_name(method)), select_order(ds, ranking, criterion, config.param_offset)});
            }
        }
    });

    run_stage(Stage::Search, [&] {
        for (int m : config.m_values) {
            BestSequenceEntry entry;
            entry.m = m;
            if (config.exhaustive) {
                entry.method = "exhaustive";
                entry.result = exhaustive_best_subset(ds, m, config.cost());
            } else {
                entry.method = "multi_restart";
                RestartOptions opts;
                opts.runs = config.runs;
                opts.seed = *config.seed;
                opts.alternating.max_sweeps = config.max_sweeps;
                opts.alternating.cost = config.cost();
                opts.threads = config.threads;
                entry.result = multi_restart_search(ds, m, opts);
            }
            report.best_sequences.push_back(std::move(entry));
        }
    });

    run_stage(Stage::Gibbs, [&] {
        for (int m : config.m_values) {
            GibbsConfig g;
            g.m = m;
            g.eta = config.eta;
            g.cost = config.cost();
            g.sweeps = config.gibbs_sweeps;
            g.burn_in = config.gibbs_burn_in;
            g.seed = *config.seed;
            InclusionEntry entry;
            entry.m = m;
            entry.eta = config.eta;
            entry.sweeps = config.gibbs_sweeps;
            entry.burn_in = g.resolved_burn_in();
            entry.chains = config.gibbs_chains;
            entry.profile = pooled_inclusion(ds, g, config.gibbs_chains, config.threads);
            report.inclusion_profiles.push_back(std::move(entry));
        }
    });

    run_stage(Stage::Cv, [&] {
        std::vector<FeatureSubset> subsets = config.cv_subsets;
        if (subsets.empty()) {
            for (const auto& b : report.best_sequences) subsets.push_back(b.result.subset);
        }
        if (subsets.empty()) throw ValidationError("no subsets to cross-validate");
        for (const auto& subset : subsets) {
            CvOptions opts;
            opts.train_fraction = config.train_fraction;
            opts.runs = config.cv_runs;
            opts.seed = *config.seed;
            opts.threads = config.threads;
            opts.r2_reference = config.r2_reference;
            report.cross_validation.push_back({subset, monte_carlo_cv(ds, subset, opts)});

            const auto model = fit_named_model(ds, subset);
            report.named_models.push_back({model.subset, model.fit.intercept, model.coefficients, model.fit.mae,
                                           model.fit.mse, model.fit.rmse, model.fit.r_squared});
        }
    });

    if (!config.output_dir.empty()) write_outputs(report, config.output_dir);
    return report;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string join_one_based(const FeatureSubset& s) {
    std::string out;
    for (int k : s.indices()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(k + 1);
    }
    return out;
}

}  // namespace

void write_outputs(const Report& report, const std::string& output_dir) {
    const fs::path dir(output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + output_dir + "': " + ec.message());

    write_file(dir / "report.json", serialize_report(report));

    if (!report.rankings.empty()) {
        std::ostringstream os;
        os << "method,M,MAE\n";
        for (const auto& e : report.rankings) {
            const auto& curve = e.ranking.error_curve.mae;
            for (std::size_t m = 0; m < curve.size(); ++m) {
                os << method_name(e.ranking.method) << ',' << m + 1 << ',' << format_double(curve[m]) << '\n';
            }
        }
        write_file(dir / "error_curves.csv", os.str());
    }
    if (!report.best_sequences.empty()) {
        std::ostringstream os;
        os << "m,cost,subset\n";
        for (const auto& e : report.best_sequences) {
            os << e.m << ',' << format_double(e.result.cost) << ',' << join_one_based(e.result.subset) << '\n';
        }
        write_file(dir / "best_sequences.csv", os.str());
    }
    if (!report.inclusion_profiles.empty()) {
        std::ostringstream os;
        os << "m,feature,probability,uniform\n";
        for (const auto& e : report.inclusion_profiles) {
            const auto& p = e.profile.probabilities;
            for (std::size_t k = 0; k < p.size(); ++k) {
                os << e.m << ',' << k + 1 << ',' << format_double(p[k]) << ','
                   << format_double(e.profile.uniform_reference) << '\n';
            }
        }
        write_file(dir / "inclusion_profiles.csv", os.str());
    }
    if (!report.order_selection.empty()) {
        std::ostringstream os;
        os << "ranking,criterion,M,value\n";
        for (const auto& e : report.order_selection) {
            const auto& c = e.selection.curve;
            for (std::size_t m = 0; m < c.size(); ++m) {
                os << e.ranking << ',' << criterion_name(e.selection.criterion) << ',' << m + 1 << ','
                   << format_double(c[m]) << '\n';
            }
        }
        write_file(dir / "criterion_curves.csv", os.str());
    }
    if (report.correlation) {
        std::ostringstream os;
        os << "i,j,rho\n";
        for (const auto& e : report.correlation->edges) {
            os << e.i + 1 << ',' << e.j + 1 << ',' << format_double(e.rho) << '\n';
        }
        write_file(dir / "correlation_edges.csv", os.str());
    }
}

}  // namespace vselect
