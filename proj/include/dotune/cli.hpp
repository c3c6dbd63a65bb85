/*
 * cli.hpp
 *
 * This source file is part of the dotune project
 *
 * Copyright 2026 the dotune authors
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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dotune/external.hpp"
#include "dotune/fixtures.hpp"
#include "dotune/orchestrator.hpp"
#include "dotune/replicate.hpp"

namespace dotune::cli {

//! Configuration errors exit with status 2; runtime failures with 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline nlohmann::json parse_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
}

//! Columns of numbers from a CSV/whitespace file; a non-numeric first line
//! is treated as a header and skipped.
inline std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        bool bad = false;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) bad = true;
            } catch (...) {
                bad = true;
            }
        }
        if (bad && first) {
            first = false;
            continue;  // header
        }
        if (bad) throw ConfigError(path + ": non-numeric data");
        if (!row.empty()) rows.push_back(std::move(row));
        first = false;
    }
    return rows;
}

inline std::vector<double> read_numeric_column(const std::string& path) {
    std::vector<double> out;
    for (auto& row : read_numeric_rows(path))
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

struct TargetSpec {
    std::string kind;  // "synthetic" | "external"
    std::optional<SyntheticSurface> surface;
    std::string command;
    BenchMode mode = BenchMode::ThroughputWindow;
    MetricDirection direction = MetricDirection::Maximize;
    double timeout_s = 600.0;

    std::unique_ptr<Target> make() const {
        if (kind == "synthetic") return std::make_unique<SyntheticTarget>(*surface);
        return std::make_unique<ExternalCommandTarget>(command, mode, direction, timeout_s);
    }
};

inline SyntheticSurface load_surface(const std::string& name_or_path) {
    try {
        return builtin_surface(name_or_path);
    } catch (const std::invalid_argument&) {
        if (!std::filesystem::exists(name_or_path))
            throw ConfigError("unknown fixture name and no such file: " + name_or_path);
        return surface_from_json(parse_json_file(name_or_path));
    }
}

inline TargetSpec parse_target_spec(const nlohmann::json& j) {
    TargetSpec spec;
    if (j.is_string()) {
        spec.kind = "synthetic";
        spec.surface = load_surface(j.get<std::string>());
        return spec;
    }
    if (!j.is_object()) throw ConfigError("target spec must be a string or object");
    spec.kind = j.at("kind").get<std::string>();
    if (spec.kind == "synthetic") {
        spec.surface = load_surface(j.at("fixture").get<std::string>());
    } else if (spec.kind == "external") {
        spec.command = j.at("command").get<std::string>();
        spec.mode = bench_mode_from_string(j.at("mode").get<std::string>());
        spec.direction = j.at("direction").get<std::string>() == "minimize"
                             ? MetricDirection::Minimize
                             : MetricDirection::Maximize;
        if (j.contains("timeout_s")) spec.timeout_s = j["timeout_s"].get<double>();
    } else {
        throw ConfigError("unknown target kind: " + spec.kind);
    }
    return spec;
}

inline BenchPolicy parse_bench(const nlohmann::json& j, BenchPolicy base) {
    if (j.contains("mode")) base.mode = bench_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("t_max")) base.t_max = j["t_max"].get<double>();
    if (j.contains("steady_window")) base.steady_window = j["steady_window"].get<double>();
    if (j.contains("t_cut")) base.t_cut = j["t_cut"].get<double>();
    if (j.contains("subset_fraction")) base.subset_fraction = j["subset_fraction"].get<double>();
    if (j.contains("adaptive")) base.adaptive = j["adaptive"].get<bool>();
    return base;
}

inline std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

//! Resolved tune invocation, ready to run per seed.
struct TunePlan {
    KnobCatalog catalog;
    TargetSpec target;
    Strategy strategy = Strategy::Dot;
    TuneParams params;
    std::vector<std::string> subset;  // bo-fixed
    std::vector<std::uint64_t> seeds;
    std::string out_dir = "out";
};

inline TunePlan resolve_tune_config(const nlohmann::json& cfg, std::optional<std::uint64_t> seed,
                                    std::optional<int> n_seeds,
                                    std::optional<std::string> out_dir) {
    TunePlan plan;
    plan.target = parse_target_spec(cfg.at("target"));

    if (cfg.contains("catalog") && !cfg["catalog"].is_null()) {
        const auto path = cfg["catalog"].get<std::string>();
        if (!std::filesystem::exists(path)) throw ConfigError("no such catalog file: " + path);
        plan.catalog = catalog_from_json(parse_json_file(path));
        if (plan.target.kind == "synthetic") {
            for (const auto& k : plan.catalog.knobs())
                if (!plan.target.surface->catalog.contains(k.name))
                    throw ConfigError("catalog knob not in fixture: " + k.name);
            if (plan.catalog.size() != plan.target.surface->catalog.size())
                throw ConfigError("catalog and fixture knob sets differ");
        }
    } else if (plan.target.kind == "synthetic") {
        plan.catalog = plan.target.surface->catalog;
    } else {
        throw ConfigError("external targets require a catalog file");
    }

    plan.strategy = strategy_from_string(cfg.value("strategy", std::string("dot")));

    if (cfg.contains("params")) {
        const auto& p = cfg["params"];
        if (p.contains("k0")) plan.params.k0 = p["k0"].get<int>();
        if (p.contains("delta_k")) plan.params.delta_k = p["delta_k"].get<int>();
        if (p.contains("budget")) plan.params.budget = p["budget"].get<int>();
        if (p.contains("policy"))
            plan.params.policy = policy_kind_from_string(p["policy"].get<std::string>());
        if (p.contains("delta")) plan.params.delta = p["delta"].get<double>();
        if (p.contains("rfecv")) plan.params.rfecv = p["rfecv"].get<bool>();
    }
    if (cfg.contains("bench")) plan.params.bench = parse_bench(cfg["bench"], plan.params.bench);

    // ranking: "catalog" keeps the file's, "random" permutes, "true" uses the
    // simulator's ground truth, an array is taken verbatim
    std::uint64_t base_seed = seed ? *seed
                                   : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>()
                                                           : fresh_seed());
    if (!seed && !cfg.contains("seed"))
        std::cerr << "seed: " << base_seed << "\n";

    if (cfg.contains("ranking") && !cfg["ranking"].is_null()) {
        const auto& r = cfg["ranking"];
        if (r.is_array()) {
            plan.catalog.set_ranking(r.get<std::vector<std::string>>());
        } else {
            const auto mode = r.get<std::string>();
            if (mode == "random") {
                auto names = plan.catalog.effective_ranking();
                Rng rng(substream_seed(base_seed, "ranking"));
                rng.shuffle(names);
                plan.catalog.set_ranking(names);
            } else if (mode == "true") {
                if (plan.target.kind != "synthetic")
                    throw ConfigError("ranking \"true\" needs a synthetic target");
                plan.catalog.set_ranking(true_ranking(*plan.target.surface));
            } else if (mode != "catalog") {
                throw ConfigError("unknown ranking mode: " + mode);
            }
        }
    }

    if (plan.strategy == Strategy::BoFixed) {
        if (cfg.contains("subset") && !cfg["subset"].is_null()) {
            const auto& s = cfg["subset"];
            if (s.is_array()) {
                plan.subset = s.get<std::vector<std::string>>();
            } else if (s.is_number_integer()) {
                auto ranking = plan.catalog.effective_ranking();
                const auto k = std::min<std::size_t>(s.get<std::size_t>(), ranking.size());
                plan.subset.assign(ranking.begin(),
                                   ranking.begin() + static_cast<std::ptrdiff_t>(k));
            } else if (s.is_string() && s.get<std::string>() == "all") {
                plan.subset = plan.catalog.effective_ranking();
            } else {
                throw ConfigError("subset must be an array, an integer, or \"all\"");
            }
        } else {
            plan.subset = plan.catalog.effective_ranking();
        }
    }

    const int n = n_seeds ? *n_seeds : cfg.value("seeds", 1);
    if (n < 1) throw ConfigError("seeds must be >= 1");
    for (int i = 0; i < n; ++i) plan.seeds.push_back(base_seed + static_cast<std::uint64_t>(i));
    plan.out_dir = out_dir ? *out_dir : cfg.value("out", std::string("out"));
    return plan;
}

inline RunLog run_strategy(const TunePlan& plan, Target& target, const TuneParams& params) {
    switch (plan.strategy) {
        case Strategy::Dot: return dot_tune(plan.catalog, target, params);
        case Strategy::BoFixed:
            return bo_fixed_tune(plan.catalog, plan.subset, target, params);
        case Strategy::Incremental: return incremental_tune(plan.catalog, target, params);
        case Strategy::StatisticalElimination:
            return statistical_elimination_tune(plan.catalog, target, params);
    }
    throw std::logic_error("bad strategy");
}

inline ReplicationReport report_from_logs(const std::vector<RunLog>& logs,
                                          MetricDirection direction) {
    ReplicationReport rep;
    for (const auto& log : logs) {
        rep.seeds.push_back(log.seed);
        rep.best_scores.push_back(log.best_score);
        rep.best_raw_metrics.push_back(log.best_raw_metric);
        auto series = best_raw_series(log, direction);
        ConvergenceResult conv;
        if (series.size() > 100) {
            conv = direction == MetricDirection::Maximize ? convergence_oltp(series)
                                                          : convergence_olap(series);
        } else {
            conv.iteration = series.empty() ? 0 : series.size() - 1;
        }
        rep.converged.push_back(conv.converged);
        rep.convergence_iterations.push_back(static_cast<double>(conv.iteration));
        double wall = 0.0;
        for (std::size_t i = 0; i <= conv.iteration && i < log.iterations.size(); ++i)
            wall += log.iterations[i].wall_ms;
        rep.convergence_wall_ms.push_back(wall);
    }
    rep.best_score_agg = aggregate(rep.best_scores);
    rep.convergence_iteration_agg = aggregate(rep.convergence_iterations);
    rep.convergence_wall_ms_agg = aggregate(rep.convergence_wall_ms);
    return rep;
}

}  // namespace detail

inline int cmd_tune(const std::string& config_path, std::optional<std::uint64_t> seed,
                    std::optional<int> seeds, std::optional<std::string> out_dir) {
    auto cfg = detail::parse_json_file(config_path);
    auto plan = detail::resolve_tune_config(cfg, seed, seeds, out_dir);

    std::vector<RunLog> logs;
    for (std::uint64_t s : plan.seeds) {
        auto target = plan.target.make();
        target->reset();
        TuneParams params = plan.params;
        params.seed = s;
        RunLog log = detail::run_strategy(plan, *target, params);
        detail::write_file(plan.out_dir + "/run-" + std::to_string(s) + ".jsonl",
                           to_jsonl(log));
        detail::write_file(plan.out_dir + "/summary-" + std::to_string(s) + ".json",
                           summary_json(log).dump(2) + "\n");
        logs.push_back(std::move(log));
    }
    if (logs.size() > 1) {
        auto target = plan.target.make();
        auto rep = detail::report_from_logs(logs, target->direction());
        detail::write_file(plan.out_dir + "/replication.json", to_json(rep).dump(2) + "\n");
    }
    std::cout << "wrote " << logs.size() << " run(s) to " << plan.out_dir << "\n";
    return 0;
}

inline int cmd_rank(const std::optional<std::string>& catalog_path,
                    const std::optional<std::string>& target_spec,
                    const std::optional<std::string>& samples_file, std::size_t samples,
                    const std::string& sampler, std::optional<std::uint64_t> seed_opt,
                    const std::optional<std::string>& out_csv,
                    const std::optional<std::string>& ranking_out) {
    const std::uint64_t seed = seed_opt ? *seed_opt : detail::fresh_seed();
    if (!seed_opt) std::cerr << "seed: " << seed << "\n";

    KnobCatalog catalog;
    std::optional<detail::TargetSpec> target;
    if (target_spec) {
        target = detail::parse_target_spec(nlohmann::json(*target_spec));
        catalog = target->surface->catalog;
    }
    if (catalog_path) catalog = catalog_from_json(detail::parse_json_file(*catalog_path));
    if (catalog.size() == 0) throw ConfigError("rank needs --catalog or a synthetic --target");

    std::vector<Configuration> configs;
    std::vector<double> metrics;
    if (samples_file) {
        std::istringstream in(detail::read_file(*samples_file));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            configs.push_back(configuration_from_json(catalog, j.at("config")));
            metrics.push_back(j.at("metric").get<double>());
        }
        if (configs.empty()) throw ConfigError("samples file is empty: " + *samples_file);
    } else {
        if (!target) throw ConfigError("rank needs --target or --samples-file");
        if (samples < 5) throw ConfigError("need at least 5 samples");
        std::vector<std::string> all_names;
        for (const auto& k : catalog.knobs()) all_names.push_back(k.name);
        Rng rng(substream_seed(seed, "rank"));
        Rng target_rng = rng.substream("target");
        configs = sampler == "lhs" ? sample_lhs(catalog, all_names, samples, rng)
                                   : sample_random(catalog, all_names, samples, rng);
        auto tgt = target->make();
        BenchPolicy policy;
        policy.mode = tgt->mode();
        for (const auto& c : configs)
            metrics.push_back(full_fidelity_metric(*tgt, c, policy, target_rng));
    }

    Rng forest_rng(substream_seed(seed, "forest"));
    auto ranked = forest_importance_ranking(catalog, configs, metrics, forest_rng);
    std::ostringstream csv;
    csv << "knob,importance\n";
    for (const auto& [name, importance] : ranked) csv << name << "," << importance << "\n";
    if (out_csv)
        detail::write_file(*out_csv, csv.str());
    else
        std::cout << csv.str();
    if (ranking_out) {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& [name, _] : ranked) names.push_back(name);
        detail::write_file(*ranking_out, names.dump(2) + "\n");
    }
    return 0;
}

inline int cmd_stats(const std::string& sub, const std::vector<std::string>& files,
                     const std::string& mode, std::size_t window) {
    nlohmann::json out;
    if (sub == "welch") {
        if (files.size() != 2) throw ConfigError("stats welch needs two files");
        auto a = detail::read_numeric_column(files[0]);
        auto b = detail::read_numeric_column(files[1]);
        auto r = welch_t_test(a, b);
        out = {{"t", r.t}, {"dof", r.dof}, {"p", r.p}};
    } else if (sub == "friedman") {
        if (files.size() != 1) throw ConfigError("stats friedman needs one matrix file");
        auto rows = detail::read_numeric_rows(files[0]);
        auto r = friedman_test(rows);
        out = {{"chi2", r.chi2}, {"p", r.p}, {"mean_ranks", r.mean_ranks}};
    } else if (sub == "jaccard") {
        if (files.size() != 2) throw ConfigError("stats jaccard needs two set files");
        auto parse_set = [](const std::string& path) {
            auto j = detail::parse_json_file(path);
            std::set<std::string> s;
            for (const auto& item : j) s.insert(item.get<std::string>());
            return s;
        };
        out = {{"jaccard", jaccard(parse_set(files[0]), parse_set(files[1]))}};
    } else if (sub == "converge") {
        if (files.size() != 1) throw ConfigError("stats converge needs one series file");
        auto series = detail::read_numeric_column(files[0]);
        ConvergenceResult r;
        if (mode == "olap")
            r = convergence_olap(series, window);
        else
            r = convergence_oltp(series, window);
        out = {{"iteration", r.iteration},
               {"converged", r.converged},
               {"t_star", r.t_star},
               {"optimum", r.optimum}};
    } else {
        throw ConfigError("unknown stats subcommand: " + sub);
    }
    std::cout << out.dump() << "\n";
    return 0;
}

inline int cmd_study(const std::string& spec_path, std::optional<std::uint64_t> seed_opt,
                     std::optional<std::string> out_opt) {
    auto spec = detail::parse_json_file(spec_path);
    const std::uint64_t seed = seed_opt ? *seed_opt
                                        : (spec.contains("seed")
                                               ? spec["seed"].get<std::uint64_t>()
                                               : detail::fresh_seed());
    if (!seed_opt && !spec.contains("seed")) std::cerr << "seed: " << seed << "\n";

    auto target_spec = detail::parse_target_spec(spec.at("target"));
    if (target_spec.kind != "synthetic")
        throw ConfigError("studies run against synthetic targets");
    auto target = target_spec.make();
    const KnobCatalog& catalog = target_spec.surface->catalog;
    BenchPolicy policy;
    policy.mode = target->mode();
    if (spec.contains("bench")) policy = detail::parse_bench(spec["bench"], policy);
    const std::string out_path =
        out_opt ? *out_opt : spec.value("out", std::string("study.csv"));

    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "stability") {
        auto sizes = spec.value("sizes", std::vector<std::size_t>{100, 200});
        auto samplers = spec.value("samplers", std::vector<std::string>{"lhs", "random"});
        auto n_seeds = spec.value("seeds", static_cast<std::size_t>(5));
        auto top_k = spec.value("top_k", static_cast<std::size_t>(20));
        auto cells =
            stability_study(catalog, *target, sizes, samplers, n_seeds, seed, policy, top_k);
        std::ostringstream csv, matrix;
        csv << "sampler,size,mean_jaccard,sd_jaccard\n";
        matrix << "sampler,size,seed_i,seed_j,jaccard\n";
        for (const auto& c : cells) {
            csv << c.sampler << "," << c.sample_size << "," << c.mean_jaccard << ","
                << c.sd_jaccard << "\n";
            for (std::size_t i = 0; i < c.top_sets.size(); ++i)
                for (std::size_t j = 0; j < c.top_sets.size(); ++j)
                    matrix << c.sampler << "," << c.sample_size << "," << i << "," << j << ","
                           << jaccard(c.top_sets[i], c.top_sets[j]) << "\n";
        }
        detail::write_file(out_path, csv.str());
        detail::write_file(out_path + ".pairwise.csv", matrix.str());
        std::cout << "wrote " << out_path << "\n";
        return 0;
    }
    if (kind == "mape") {
        auto t_cuts = spec.value("t_cuts", std::vector<double>{10, 20, 40, 60});
        auto runs = spec.value("runs", static_cast<std::size_t>(500));
        auto rows = mape_study(catalog, *target, t_cuts, runs, seed, policy);
        std::ostringstream csv;
        csv << "t_cut,statistic,value\n";
        for (const auto& r : rows)
            csv << r.t_cut << "," << r.statistic << "," << r.value << "\n";
        detail::write_file(out_path, csv.str());
        std::cout << "wrote " << out_path << "\n";
        return 0;
    }
    throw ConfigError("unknown study kind: " + kind);
}

//! CLI entry point shared by the binary and the tests.
inline int run(std::vector<std::string> args) {
    CLI::App app{"dotune: dynamic knob-set autotuning for black-box systems"};
    app.require_subcommand(1);

    // tune
    auto* tune = app.add_subcommand("tune", "run a tuning strategy from a config file");
    std::string tune_config;
    tune->add_option("--config", tune_config, "run-config JSON file")->required();
    std::optional<std::uint64_t> tune_seed;
    tune->add_option("--seed", tune_seed, "master seed");
    std::optional<int> tune_seeds;
    tune->add_option("--seeds", tune_seeds, "number of replicated runs");
    std::optional<std::string> tune_out;
    tune->add_option("--out", tune_out, "output directory");

    // rank
    auto* rank = app.add_subcommand("rank", "forest-rank knob importance");
    std::optional<std::string> rank_catalog, rank_target, rank_samples_file, rank_out,
        rank_ranking_out;
    std::size_t rank_samples = 200;
    std::string rank_sampler = "lhs";
    std::optional<std::uint64_t> rank_seed;
    rank->add_option("--catalog", rank_catalog, "catalog JSON file");
    rank->add_option("--target", rank_target, "synthetic fixture name or path");
    rank->add_option("--samples-file", rank_samples_file,
                     "JSONL of {\"config\":..., \"metric\":...} rows");
    rank->add_option("--samples", rank_samples, "number of configurations to draw");
    rank->add_option("--sampler", rank_sampler, "lhs|random")
        ->check(CLI::IsMember({"lhs", "random"}));
    rank->add_option("--seed", rank_seed, "seed");
    rank->add_option("--out", rank_out, "CSV output path (stdout if omitted)");
    rank->add_option("--ranking-out", rank_ranking_out,
                     "write the ranked name permutation as JSON");

    // stats
    auto* stats = app.add_subcommand("stats", "statistical tests and detectors");
    std::string stats_sub, stats_mode = "oltp";
    std::vector<std::string> stats_files;
    std::size_t stats_window = 100;
    stats->add_option("sub", stats_sub, "welch|friedman|jaccard|converge")->required();
    stats->add_option("files", stats_files, "input files")->required();
    stats->add_option("--mode", stats_mode, "oltp|olap (converge)")
        ->check(CLI::IsMember({"oltp", "olap"}));
    stats->add_option("--window", stats_window, "stall window (converge)");

    // study
    auto* study = app.add_subcommand("study", "ranking-stability or probe-error study");
    std::string study_spec;
    std::optional<std::uint64_t> study_seed;
    std::optional<std::string> study_out;
    study->add_option("spec", study_spec, "study spec JSON file")->required();
    study->add_option("--seed", study_seed, "seed");
    study->add_option("--out", study_out, "output CSV path");

    std::vector<const char*> argv;
    std::string prog = "dotune";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*tune) return cmd_tune(tune_config, tune_seed, tune_seeds, tune_out);
        if (*rank)
            return cmd_rank(rank_catalog, rank_target, rank_samples_file, rank_samples,
                            rank_sampler, rank_seed, rank_out, rank_ranking_out);
        if (*stats) return cmd_stats(stats_sub, stats_files, stats_mode, stats_window);
        if (*study) return cmd_study(study_spec, study_seed, study_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

}  // namespace dotune::cli
