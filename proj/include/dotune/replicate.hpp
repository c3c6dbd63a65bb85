/*
 * replicate.hpp
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

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dotune/adaptive.hpp"
#include "dotune/forest.hpp"
#include "dotune/orchestrator.hpp"
#include "dotune/sampling.hpp"
#include "dotune/stats.hpp"

namespace dotune {

struct Aggregate {
    double mean = 0.0;
    double sd = 0.0;
    double cv = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

//! Mean, sample SD, CV, and a normal-approximation 95% CI.
inline Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    a.mean = sample_mean(xs);
    a.sd = std::sqrt(sample_variance(xs));
    a.cv = a.mean != 0.0 ? a.sd / std::fabs(a.mean) : 0.0;
    const double half = 1.96 * a.sd / std::sqrt(static_cast<double>(xs.size()));
    a.ci_lo = a.mean - half;
    a.ci_hi = a.mean + half;
    return a;
}

struct ReplicationReport {
    std::vector<std::uint64_t> seeds;
    std::vector<double> best_scores;
    std::vector<double> best_raw_metrics;
    std::vector<double> convergence_iterations;
    std::vector<double> convergence_wall_ms;
    std::vector<bool> converged;
    Aggregate best_score_agg;
    Aggregate convergence_iteration_agg;
    Aggregate convergence_wall_ms_agg;
};

using TargetFactory = std::function<std::unique_ptr<Target>()>;
using StrategyRunner =
    std::function<RunLog(const KnobCatalog&, Target&, const TuneParams&)>;

//! Best-so-far raw-metric series (full-fidelity records only, carried
//! forward), the input the convergence detectors are defined on.
inline std::vector<double> best_raw_series(const RunLog& log, MetricDirection dir) {
    std::vector<double> out;
    out.reserve(log.iterations.size());
    bool has = false;
    double best = 0.0;
    for (const auto& r : log.iterations) {
        if (r.fidelity == Fidelity::Full) {
            if (!has) {
                best = r.raw_metric;
                has = true;
            } else {
                best = dir == MetricDirection::Maximize ? std::max(best, r.raw_metric)
                                                        : std::min(best, r.raw_metric);
            }
        }
        out.push_back(has ? best : r.raw_metric);
    }
    return out;
}

//! Runs one strategy under n distinct seeds, each against a freshly reset
//! target, and aggregates best score, convergence iteration, and the wall
//! time spent reaching it.
inline ReplicationReport replicate(const KnobCatalog& catalog, const TargetFactory& make_target,
                                   const StrategyRunner& run, const TuneParams& base_params,
                                   const std::vector<std::uint64_t>& seeds) {
    ReplicationReport rep;
    rep.seeds = seeds;
    for (std::uint64_t seed : seeds) {
        auto target = make_target();
        target->reset();
        TuneParams params = base_params;
        params.seed = seed;
        RunLog log = run(catalog, *target, params);

        rep.best_scores.push_back(log.best_score);
        rep.best_raw_metrics.push_back(log.best_raw_metric);

        auto series = best_raw_series(log, target->direction());
        ConvergenceResult conv;
        if (series.size() > 100) {
            conv = target->direction() == MetricDirection::Maximize
                       ? convergence_oltp(series)
                       : convergence_olap(series);
        } else {
            conv.iteration = series.empty() ? 0 : series.size() - 1;
            conv.converged = false;
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

inline nlohmann::json to_json(const Aggregate& a) {
    return {{"mean", a.mean}, {"sd", a.sd}, {"cv", a.cv}, {"ci95", {a.ci_lo, a.ci_hi}}};
}

inline nlohmann::json to_json(const ReplicationReport& r) {
    return {{"seeds", r.seeds},
            {"best_scores", r.best_scores},
            {"best_raw_metrics", r.best_raw_metrics},
            {"convergence_iterations", r.convergence_iterations},
            {"convergence_wall_ms", r.convergence_wall_ms},
            {"converged", r.converged},
            {"best_score", to_json(r.best_score_agg)},
            {"convergence_iteration", to_json(r.convergence_iteration_agg)},
            {"convergence_wall_ms_agg", to_json(r.convergence_wall_ms_agg)}};
}

// ---- ranking stability study -------------------------------------------

struct StabilityCell {
    std::string sampler;
    std::size_t sample_size = 0;
    double mean_jaccard = 0.0;
    double sd_jaccard = 0.0;
    std::vector<std::set<std::string>> top_sets;
    std::vector<double> pairwise;  // upper-triangle values, row-major
};

//! Full-budget measurement used by the ranking studies (no early cut).
inline double full_fidelity_metric(Target& target, const Configuration& config,
                                   const BenchPolicy& policy, Rng& rng) {
    BenchPolicy full = policy;
    full.adaptive = false;
    full.mode = target.mode();
    return evaluate_config(target, config, std::nullopt, full, rng).raw_metric;
}

//! Forest importance of every catalog knob on (configs, metric) samples,
//! sorted most important first (catalog order on ties).
inline std::vector<std::pair<std::string, double>> forest_importance_ranking(
    const KnobCatalog& catalog, const std::vector<Configuration>& configs,
    const std::vector<double>& metrics, Rng& rng, std::size_t n_trees = 100) {
    std::vector<std::string> all_names;
    for (const auto& k : catalog.knobs()) all_names.push_back(k.name);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(configs.size()),
                      static_cast<Eigen::Index>(catalog.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(configs.size()));
    for (std::size_t i = 0; i < configs.size(); ++i) {
        auto x = encode(catalog, all_names, configs[i]);
        for (std::size_t j = 0; j < x.size(); ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
        y(static_cast<Eigen::Index>(i)) = metrics[i];
    }
    Forest forest = Forest::fit(X, y, n_trees, rng);
    const auto& imp = forest.importance();
    std::vector<std::size_t> order(catalog.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
    std::vector<std::pair<std::string, double>> ranked;
    for (std::size_t i : order) ranked.emplace_back(all_names[i], imp[i]);
    return ranked;
}

//! Importance-based top-k knob names from a forest fit on (configs, metric).
inline std::vector<std::string> forest_rank(const KnobCatalog& catalog,
                                            const std::vector<Configuration>& configs,
                                            const std::vector<double>& metrics, Rng& rng,
                                            std::size_t n_trees = 100) {
    std::vector<std::string> names;
    for (auto& [name, _] : forest_importance_ranking(catalog, configs, metrics, rng, n_trees))
        names.push_back(name);
    return names;
}

//! For each sampler and sample size: draw the design n_seeds times, rank
//! knobs with a forest, and measure how consistently the same top-k set
//! comes back (pairwise Jaccard across seeds, identical pairs excluded).
inline std::vector<StabilityCell> stability_study(const KnobCatalog& catalog, Target& target,
                                                  const std::vector<std::size_t>& sizes,
                                                  const std::vector<std::string>& samplers,
                                                  std::size_t n_seeds, std::uint64_t base_seed,
                                                  const BenchPolicy& policy,
                                                  std::size_t top_k = 20,
                                                  std::size_t n_trees = 100) {
    std::vector<std::string> all_names;
    for (const auto& k : catalog.knobs()) all_names.push_back(k.name);

    std::vector<StabilityCell> cells;
    for (const auto& sampler : samplers) {
        for (std::size_t size : sizes) {
            StabilityCell cell;
            cell.sampler = sampler;
            cell.sample_size = size;
            for (std::size_t s = 0; s < n_seeds; ++s) {
                Rng rng(substream_seed(base_seed + s, "study-" + sampler));
                Rng target_rng = rng.substream("target");
                Rng forest_rng = rng.substream("forest");
                auto configs = sampler == "lhs" ? sample_lhs(catalog, all_names, size, rng)
                                                : sample_random(catalog, all_names, size, rng);
                std::vector<double> metrics;
                metrics.reserve(configs.size());
                for (const auto& c : configs)
                    metrics.push_back(full_fidelity_metric(target, c, policy, target_rng));
                auto ranked = forest_rank(catalog, configs, metrics, forest_rng, n_trees);
                cell.top_sets.emplace_back(ranked.begin(),
                                           ranked.begin() + static_cast<std::ptrdiff_t>(
                                                                std::min(top_k, ranked.size())));
            }
            std::vector<double> js;
            for (std::size_t i = 0; i < cell.top_sets.size(); ++i)
                for (std::size_t j = i + 1; j < cell.top_sets.size(); ++j)
                    js.push_back(jaccard(cell.top_sets[i], cell.top_sets[j]));
            cell.pairwise = js;
            cell.mean_jaccard = js.empty() ? 1.0 : sample_mean(js);
            cell.sd_jaccard = js.empty() ? 0.0 : std::sqrt(sample_variance(js));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

// ---- partial-vs-full benchmarking error study ---------------------------

struct MapeRow {
    double t_cut = 0.0;
    std::string statistic;  // "mean", "p50", "p90", "p95"
    double value = 0.0;
};

//! Absolute-percentage-error sweep of probe-window means against the steady
//! window, over random configurations of a throughput target.
inline std::vector<MapeRow> mape_study(const KnobCatalog& catalog, Target& target,
                                       const std::vector<double>& t_cuts, std::size_t runs,
                                       std::uint64_t seed, const BenchPolicy& policy) {
    if (target.mode() != BenchMode::ThroughputWindow)
        throw std::invalid_argument("mape_study: throughput targets only");
    std::vector<std::string> all_names;
    for (const auto& k : catalog.knobs()) all_names.push_back(k.name);

    Rng rng(substream_seed(seed, "mape"));
    Rng target_rng = rng.substream("target");
    auto configs = sample_random(catalog, all_names, runs, rng);

    const auto seconds = static_cast<std::size_t>(std::llround(policy.t_max));
    const auto steady = static_cast<std::size_t>(std::llround(policy.steady_window));
    std::vector<std::vector<double>> apes(t_cuts.size());
    for (const auto& config : configs) {
        auto series = target.throughput_series(config, policy.t_max, target_rng);
        const double full = adaptive_detail::window_mean(series, seconds - steady, seconds);
        for (std::size_t t = 0; t < t_cuts.size(); ++t) {
            const auto cut = static_cast<std::size_t>(std::llround(t_cuts[t]));
            const double partial = adaptive_detail::window_mean(series, 0, cut);
            apes[t].push_back(std::fabs(partial - full) / std::fabs(full));
        }
    }

    auto percentile = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        const auto idx = static_cast<std::size_t>(
            std::ceil(q * static_cast<double>(v.size()))) - 1;
        return v[std::min(idx, v.size() - 1)];
    };

    std::vector<MapeRow> rows;
    for (std::size_t t = 0; t < t_cuts.size(); ++t) {
        rows.push_back({t_cuts[t], "mean", sample_mean(apes[t])});
        rows.push_back({t_cuts[t], "p50", percentile(apes[t], 0.50)});
        rows.push_back({t_cuts[t], "p90", percentile(apes[t], 0.90)});
        rows.push_back({t_cuts[t], "p95", percentile(apes[t], 0.95)});
    }
    return rows;
}

}  // namespace dotune
