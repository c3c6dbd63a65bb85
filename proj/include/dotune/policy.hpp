/*
 * policy.hpp
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
#include <optional>
#include <stdexcept>

#include "dotune/rng.hpp"

namespace dotune {

//! Two-action bandit state: success/failure counts per action, all starting
//! at 1 (smoothed rates), plus the one-shot init flag.
struct LrtState {
    double s0 = 1.0;
    double f0 = 1.0;
    double s1 = 1.0;
    double f1 = 1.0;
    bool init = true;
    double delta = 0.001;  // reward threshold on the per-call gain
};

//! Action 0 = stay/shrink, action 1 = expand.
struct PolicyDecision {
    int action = 0;
    std::optional<double> gain;     // g, per-call relative improvement
    std::optional<int> reward;      // 1[g > delta]
    std::optional<double> lambda;   // log success-rate ratio; absent on init
    bool init_step = false;
};

namespace policy_detail {

//! Binary reward from the epoch's relative per-call gain, then bump the
//! chosen action's success or failure count.
inline void apply_reward(LrtState& state, PolicyDecision& d, double best_past,
                         double epoch_best, double iterations) {
    if (!(best_past > 0.0))
        throw std::invalid_argument(
            "policy: best-past score must be positive on the higher-is-better scale");
    const double g = (epoch_best - best_past) / (best_past * iterations);
    const int r = g > state.delta ? 1 : 0;
    if (d.action == 1) {
        if (r) state.s1 += 1.0; else state.f1 += 1.0;
    } else {
        if (r) state.s0 += 1.0; else state.f0 += 1.0;
    }
    d.gain = g;
    d.reward = r;
}

}  // namespace policy_detail

//! One likelihood-ratio step: compare smoothed success rates via
//! lambda = ln(p1/p0), act on its sign, then credit the chosen action with
//! this epoch's binary reward. The first call is a fair coin and touches
//! neither counts nor rewards.
inline PolicyDecision lrt_step(LrtState& state, double best_past, double epoch_best,
                               int iterations, Rng& rng) {
    if (iterations < 1) throw std::invalid_argument("lrt_step: iterations must be >= 1");
    PolicyDecision d;
    if (state.init) {
        state.init = false;
        d.action = rng.bernoulli(0.5) ? 1 : 0;
        d.init_step = true;
        return d;
    }
    const double p0 = state.s0 / (state.s0 + state.f0);
    const double p1 = state.s1 / (state.s1 + state.f1);
    const double lambda = std::log(p1 / p0);
    d.action = lambda > 0.0 ? 1 : 0;
    d.lambda = lambda;
    policy_detail::apply_reward(state, d, best_past, epoch_best, iterations);
    return d;
}

//! Binary Thompson sampling ablation: draw theta_i ~ Beta(s_i, f_i) and take
//! the argmax; reward bookkeeping matches lrt_step.
inline PolicyDecision thompson_step(LrtState& state, double best_past, double epoch_best,
                                    int iterations, Rng& rng) {
    if (iterations < 1) throw std::invalid_argument("thompson_step: iterations must be >= 1");
    PolicyDecision d;
    const double theta0 = rng.beta(state.s0, state.f0);
    const double theta1 = rng.beta(state.s1, state.f1);
    d.action = theta1 > theta0 ? 1 : 0;
    if (state.init) {
        state.init = false;
        d.init_step = true;
        return d;
    }
    policy_detail::apply_reward(state, d, best_past, epoch_best, iterations);
    return d;
}

//! Pure incremental exploration ablation: expand until the catalog runs out.
//! Maintains no counts.
inline PolicyDecision always_expand_step(bool knobs_remaining) {
    PolicyDecision d;
    d.action = knobs_remaining ? 1 : 0;
    return d;
}

}  // namespace dotune
