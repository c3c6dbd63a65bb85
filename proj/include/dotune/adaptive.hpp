/*
 * adaptive.hpp
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

#include <cmath>
#include <numeric>
#include <optional>

#include "dotune/bench.hpp"
#include "dotune/target.hpp"

namespace dotune {

namespace adaptive_detail {

inline double window_mean(const std::vector<double>& series, std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += series[i];
    return sum / static_cast<double>(hi - lo);
}

}  // namespace adaptive_detail

//! OLTP-style evaluation with an early cut: run to t_cut, and only continue
//! to the full t_max when the probe average already beats the incumbent.
//! The first-ever evaluation (no incumbent) always runs the full budget so
//! the gate has a full-fidelity reference.
inline Measurement evaluate_throughput_adaptive(Target& target, const Configuration& config,
                                                std::optional<double> best_full_metric,
                                                const BenchPolicy& policy, Rng& rng) {
    if (policy.mode != BenchMode::ThroughputWindow)
        throw std::invalid_argument("evaluate_throughput_adaptive: wrong bench mode");
    policy.check();

    if (target.phase_based()) {
        if (best_full_metric && policy.adaptive) {
            Measurement probe = target.measure_phase(config, policy, BenchPhase::Probe, rng);
            if (!(probe.raw_metric > *best_full_metric))
                return {probe.raw_metric, Fidelity::Partial, policy.t_cut};
            Measurement full = target.measure_phase(config, policy, BenchPhase::Full, rng);
            return {full.raw_metric, Fidelity::Full, policy.t_cut + policy.t_max};
        }
        Measurement full = target.measure_phase(config, policy, BenchPhase::Full, rng);
        return {full.raw_metric, Fidelity::Full, policy.t_max};
    }

    // The probe is the prefix of the same run, so continuing costs t_max total.
    const auto seconds = static_cast<std::size_t>(std::llround(policy.t_max));
    auto series = target.throughput_series(config, policy.t_max, rng);
    if (series.size() != seconds) throw TargetError("target returned short throughput series");
    if (best_full_metric && policy.adaptive) {
        const auto cut = static_cast<std::size_t>(std::llround(policy.t_cut));
        const double probe_mean = adaptive_detail::window_mean(series, 0, cut);
        if (!(probe_mean > *best_full_metric))
            return {probe_mean, Fidelity::Partial, policy.t_cut};
    }
    const auto steady = static_cast<std::size_t>(std::llround(policy.steady_window));
    const double full_mean = adaptive_detail::window_mean(series, seconds - steady, seconds);
    return {full_mean, Fidelity::Full, policy.t_max};
}

//! OLAP-style evaluation: time a random query subset first and only run the
//! complete set when the probe beats the best known total time.
inline Measurement evaluate_batch_adaptive(Target& target, const Configuration& config,
                                           std::optional<double> best_full_time,
                                           const BenchPolicy& policy, Rng& rng) {
    if (policy.mode != BenchMode::QuerySubset)
        throw std::invalid_argument("evaluate_batch_adaptive: wrong bench mode");
    policy.check();

    if (target.phase_based()) {
        if (best_full_time && policy.adaptive) {
            Measurement probe = target.measure_phase(config, policy, BenchPhase::Probe, rng);
            if (!(probe.raw_metric < *best_full_time))
                return {probe.raw_metric, Fidelity::Partial, probe.raw_metric};
            Measurement full = target.measure_phase(config, policy, BenchPhase::Full, rng);
            return {full.raw_metric, Fidelity::Full, probe.raw_metric + full.raw_metric};
        }
        Measurement full = target.measure_phase(config, policy, BenchPhase::Full, rng);
        return {full.raw_metric, Fidelity::Full, full.raw_metric};
    }

    const std::size_t q = target.query_count();
    if (q == 0) throw TargetError("batch target reports no queries");
    std::vector<std::size_t> all(q);
    std::iota(all.begin(), all.end(), 0);

    if (!best_full_time || !policy.adaptive) {
        const double t_full = target.batch_time(config, all, rng);
        return {t_full, Fidelity::Full, t_full};
    }
    const auto k = static_cast<std::size_t>(
        std::ceil(policy.subset_fraction * static_cast<double>(q)));
    auto subset = rng.sample_without_replacement(q, std::max<std::size_t>(1, k));
    const double t_partial = target.batch_time(config, subset, rng);
    if (t_partial < *best_full_time) {
        const double t_full = target.batch_time(config, all, rng);
        return {t_full, Fidelity::Full, t_partial + t_full};
    }
    return {t_partial, Fidelity::Partial, t_partial};
}

//! Dispatches on the policy's bench mode.
inline Measurement evaluate_config(Target& target, const Configuration& config,
                                   std::optional<double> best_full_metric,
                                   const BenchPolicy& policy, Rng& rng) {
    return policy.mode == BenchMode::ThroughputWindow
               ? evaluate_throughput_adaptive(target, config, best_full_metric, policy, rng)
               : evaluate_batch_adaptive(target, config, best_full_metric, policy, rng);
}

}  // namespace dotune
