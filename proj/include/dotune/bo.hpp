/*
 * bo.hpp
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

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dotune/acquisition.hpp"
#include "dotune/adaptive.hpp"
#include "dotune/gp.hpp"
#include "dotune/observation.hpp"
#include "dotune/runlog.hpp"
#include "dotune/sampling.hpp"
#include "dotune/target.hpp"

namespace dotune {

//! Raised when the target keeps failing; the run returns its partial log.
class PersistentTargetFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Maps raw benchmark metrics onto the internal higher-is-better score
//! scale. Minimize metrics use score = C / metric with C pinned to the first
//! full measurement; partial batch probes are extrapolated to full scale by
//! the subset fraction first.
struct ScoreMapper {
    MetricDirection direction = MetricDirection::Maximize;
    double subset_fraction = 0.4;
    std::optional<double> c;

    double score(const Measurement& m) {
        if (direction == MetricDirection::Maximize) return m.raw_metric;
        double full_scale = m.raw_metric;
        if (m.fidelity == Fidelity::Partial) full_scale /= subset_fraction;
        if (!c) c = full_scale;
        return *c / std::max(full_scale, 1e-12);
    }
};

//! Everything one tuning run owns: observations, the log, named random
//! substreams, and the incumbent trackers shared across epochs.
struct RunState {
    const KnobCatalog& catalog;
    Target& target;
    BenchPolicy bench;
    ScoreMapper mapper;
    Rng bo_rng;
    Rng forest_rng;
    Rng policy_rng;
    Rng target_rng;
    ObservationSet obs;
    RunLog log;

    std::int64_t next_iteration = 0;
    std::optional<double> best_full_raw;  // adaptive-benchmarking gate, original units
    double best_full_score = -std::numeric_limits<double>::infinity();
    bool has_best_full = false;
    double best_any_score = -std::numeric_limits<double>::infinity();
    Configuration best_config;
    int consecutive_failures = 0;

    // hyperparameter reuse between refits
    std::optional<GpHyperparams> last_hp;
    Eigen::Index last_fit_rows = 0;
    std::vector<std::string> last_subset;

    RunState(const KnobCatalog& cat, Target& tgt, BenchPolicy bench_policy, std::uint64_t seed,
             std::string strategy_name)
        : catalog(cat),
          target(tgt),
          bench(bench_policy),
          bo_rng(substream_seed(seed, "bo")),
          forest_rng(substream_seed(seed, "forest")),
          policy_rng(substream_seed(seed, "policy")),
          target_rng(substream_seed(seed, "target")) {
        bench.mode = target.mode();
        bench.check();
        mapper.direction = target.direction();
        mapper.subset_fraction = bench.subset_fraction;
        log.strategy = std::move(strategy_name);
        log.seed = seed;
        best_config = catalog.default_config();
    }

    double current_best_score_or(double fallback) const {
        if (has_best_full) return best_full_score;
        if (best_any_score > -std::numeric_limits<double>::infinity()) return best_any_score;
        return fallback;
    }
};

struct BoEpochResult {
    double y_star = -std::numeric_limits<double>::infinity();
    bool y_star_is_full = false;
    Configuration best_config_epoch;
    int evaluations = 0;
};

namespace bo_detail {

//! Direction-aware incumbent update for the adaptive gate.
inline void update_gate(std::optional<double>& best, MetricDirection dir, double raw) {
    if (!best) {
        best = raw;
        return;
    }
    if (dir == MetricDirection::Maximize)
        best = std::max(*best, raw);
    else
        best = std::min(*best, raw);
}

inline double failure_penalty(const ObservationSet& obs) {
    if (obs.empty()) return 0.0;
    double worst = obs[0].score, mean = 0.0;
    for (const auto& o : obs) {
        worst = std::min(worst, o.score);
        mean += o.score;
    }
    mean /= static_cast<double>(obs.size());
    double sd = 1.0;
    if (obs.size() >= 2) {
        double ss = 0.0;
        for (const auto& o : obs) ss += (o.score - mean) * (o.score - mean);
        sd = std::sqrt(ss / static_cast<double>(obs.size() - 1));
        if (sd <= 0.0) sd = 1.0;
    }
    return worst - 3.0 * sd;
}

//! Refits hyperparameters on a growth schedule and reuses them in between;
//! every call still rebuilds the posterior on the current rows.
inline GpSurrogate fit_surrogate(RunState& st, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const std::vector<std::string>& subset) {
    const bool same_subset = st.last_subset == subset && st.last_hp &&
                             st.last_hp->log_length_scales.size() == X.cols();
    const bool need_refit = !same_subset || X.rows() >= st.last_fit_rows + st.last_fit_rows / 2;
    if (!need_refit) return GpSurrogate::with_hyperparams(X, y, *st.last_hp);

    GpFitOptions opts;
    if (same_subset) {
        opts.restarts = 2;
        opts.max_iterations = 30;
        opts.warm_start = st.last_hp;
    } else {
        opts.restarts = 8;
        opts.max_iterations = 60;
    }
    GpSurrogate gp = GpSurrogate::fit(X, y, opts, st.bo_rng);
    st.last_hp = gp.hyperparams();
    st.last_fit_rows = X.rows();
    st.last_subset = subset;
    return gp;
}

}  // namespace bo_detail

//! One epoch of Bayesian optimization over `subset`, with off-subset knobs
//! pinned at `base`. Starts from the projection of all prior observations;
//! when fewer than two projected rows exist the first min(10, E) evaluations
//! are random (cold start). Every evaluation goes through the adaptive
//! benchmark allocator and lands in the shared observation set and log.
inline BoEpochResult bo_run(RunState& st, const std::vector<std::string>& subset,
                            const Configuration& base, int iterations, int epoch,
                            std::optional<int> action_for_epoch) {
    if (iterations < 1) throw std::invalid_argument("bo_run: iterations must be >= 1");
    const auto ordered = st.catalog.normalize_subset(subset);
    if (ordered.empty()) throw std::invalid_argument("bo_run: empty subset");

    ProjectedData proj = project(st.obs, st.catalog, ordered, base);
    Eigen::MatrixXd X = proj.X;
    Eigen::VectorXd y = proj.y;
    double proj_best = -std::numeric_limits<double>::infinity();
    bool proj_best_full = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const bool full = proj.fidelity[static_cast<std::size_t>(i)] == Fidelity::Full;
        if ((full && !proj_best_full) || ((full || !proj_best_full) && y(i) > proj_best)) {
            proj_best = y(i);
            proj_best_full = full;
        }
    }

    int cold = X.rows() < 2 ? std::min(10, iterations) : 0;
    BoEpochResult result;
    for (int i = 0; i < iterations; ++i) {
        Configuration config;
        if (i < cold || X.rows() < 2) {
            config = overlay(base, ordered, sample_random(st.catalog, ordered, 1, st.bo_rng)[0]);
        } else {
            GpSurrogate gp = bo_detail::fit_surrogate(st, X, y, ordered);
            const Configuration& incumbent = st.has_best_full ? st.best_config : base;
            const double ei_best = st.current_best_score_or(proj_best);
            config = bo_propose(gp, st.catalog, ordered, base, incumbent, ei_best, st.bo_rng);
        }

        const auto t0 = std::chrono::steady_clock::now();
        Measurement m;
        bool failed = false;
        try {
            m = evaluate_config(st.target, config, st.best_full_raw, st.bench, st.target_rng);
        } catch (const TargetError&) {
            failed = true;
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        double score;
        if (failed) {
            st.consecutive_failures += 1;
            score = bo_detail::failure_penalty(st.obs);
            m = Measurement{0.0, Fidelity::Partial, 0.0};
            if (st.consecutive_failures >= 10)
                st.log.aborted = true;
        } else {
            st.consecutive_failures = 0;
            score = st.mapper.score(m);
            st.log.score_scale_c = st.mapper.c;
            if (m.fidelity == Fidelity::Full)
                bo_detail::update_gate(st.best_full_raw, st.mapper.direction, m.raw_metric);
        }

        Observation obs;
        obs.config = config;
        obs.score = score;
        obs.fidelity = m.fidelity;
        obs.raw_metric = m.raw_metric;
        obs.active_set = ordered;
        obs.iteration = st.next_iteration++;
        obs.wall_ms = wall_ms;
        st.obs.append(obs);

        // grow the projected design with the new row (retained by construction)
        X.conservativeResize(X.rows() + 1, static_cast<Eigen::Index>(ordered.size()));
        auto xrow = encode(st.catalog, ordered, config);
        for (std::size_t c = 0; c < xrow.size(); ++c)
            X(X.rows() - 1, static_cast<Eigen::Index>(c)) = xrow[c];
        y.conservativeResize(y.size() + 1);
        y(y.size() - 1) = score;

        if (!failed && m.fidelity == Fidelity::Full) {
            if (!st.has_best_full || score > st.best_full_score) {
                st.has_best_full = true;
                st.best_full_score = score;
                st.best_config = config;
                st.log.best_config = config;
                st.log.best_score = score;
                st.log.best_raw_metric = m.raw_metric;
                st.log.has_best = true;
            }
        }
        if (!failed) st.best_any_score = std::max(st.best_any_score, score);

        const bool counts_for_epoch = !failed;
        if (counts_for_epoch) {
            const bool full = m.fidelity == Fidelity::Full;
            if ((full && !result.y_star_is_full) ||
                ((full || !result.y_star_is_full) && score > result.y_star)) {
                result.y_star = score;
                result.y_star_is_full = full;
                result.best_config_epoch = config;
            }
        }

        IterationRecord rec;
        rec.iter = obs.iteration;
        rec.epoch = epoch;
        rec.strategy = st.log.strategy;
        rec.action = action_for_epoch;
        rec.active_knobs = ordered;
        rec.config = config;
        rec.raw_metric = m.raw_metric;
        rec.score = score;
        rec.fidelity = m.fidelity;
        rec.best_score = st.current_best_score_or(score);
        rec.wall_ms = wall_ms;
        rec.bench_cost = m.cost;
        st.log.iterations.push_back(std::move(rec));
        result.evaluations += 1;

        if (st.log.aborted)
            throw PersistentTargetFailure("target failed 10 consecutive evaluations");
    }
    if (result.best_config_epoch.values.empty()) result.best_config_epoch = base;
    return result;
}

}  // namespace dotune
