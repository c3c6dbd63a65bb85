/*
 * acquisition.hpp
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
#include <stdexcept>
#include <vector>

#include "dotune/gp.hpp"
#include "dotune/knobs.hpp"
#include "dotune/sampling.hpp"
#include "dotune/special_functions.hpp"

namespace dotune {

//! Expected improvement for maximization: E[max(0, f(x) - best)].
inline double expected_improvement(double mean, double variance, double best_so_far) {
    if (variance <= 0.0) return std::max(0.0, mean - best_so_far);
    const double sd = std::sqrt(variance);
    const double z = (mean - best_so_far) / sd;
    const double ei = (mean - best_so_far) * normal_cdf(z) + sd * normal_pdf(z);
    return std::max(0.0, ei);
}

//! Index of the acquisition argmax over a candidate pool (first on ties).
inline std::size_t argmax_expected_improvement(const GpSurrogate& gp,
                                               const Eigen::MatrixXd& candidates,
                                               double best_so_far) {
    if (candidates.rows() == 0) throw std::invalid_argument("empty candidate pool");
    Eigen::VectorXd mean, var;
    gp.predict_batch(candidates, mean, var);
    std::size_t best_idx = 0;
    double best_ei = -1.0;
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
        const double ei = expected_improvement(mean(i), var(i), best_so_far);
        if (ei > best_ei) {
            best_ei = ei;
            best_idx = static_cast<std::size_t>(i);
        }
    }
    return best_idx;
}

struct ProposalOptions {
    std::size_t random_pool = 2048;
    std::size_t perturbed_pool = 256;
    double perturbation_sd = 0.1;  // in encoded [0,1] coordinates
};

//! Overlays subset values from `src` onto a copy of `base`.
inline Configuration overlay(const Configuration& base, const std::vector<std::string>& subset,
                             const Configuration& src) {
    Configuration out = base;
    for (const auto& name : subset) out.values[name] = src.at(name);
    return out;
}

//! Next configuration to evaluate: acquisition argmax over a pool of random
//! candidates plus perturbations of the incumbent. Off-subset knobs hold
//! their values in `base`; candidates are decoded to valid grid values before
//! scoring so the acquisition sees only realizable points.
inline Configuration bo_propose(const GpSurrogate& gp, const KnobCatalog& catalog,
                                const std::vector<std::string>& subset,
                                const Configuration& base, const Configuration& incumbent,
                                double best_so_far, Rng& rng,
                                const ProposalOptions& opts = {}) {
    auto ordered = catalog.normalize_subset(subset);
    if (gp.dim() != static_cast<Eigen::Index>(ordered.size()))
        throw std::invalid_argument("bo_propose: model dimension does not match subset");

    std::vector<Configuration> pool;
    pool.reserve(opts.random_pool + opts.perturbed_pool);
    if (opts.random_pool > 0) {
        for (auto& c : sample_random(catalog, ordered, opts.random_pool, rng))
            pool.push_back(overlay(base, ordered, c));
    }
    if (opts.perturbed_pool > 0) {
        auto inc = encode(catalog, ordered, incumbent);
        for (std::size_t i = 0; i < opts.perturbed_pool; ++i) {
            Configuration c = base;
            for (std::size_t j = 0; j < ordered.size(); ++j) {
                const double u =
                    std::clamp(inc[j] + opts.perturbation_sd * rng.normal(), 0.0, 1.0);
                c.values[ordered[j]] = catalog.spec(ordered[j]).decode_unit(u);
            }
            pool.push_back(std::move(c));
        }
    }
    if (pool.empty()) return overlay(base, ordered, incumbent);

    Eigen::MatrixXd C(static_cast<Eigen::Index>(pool.size()),
                      static_cast<Eigen::Index>(ordered.size()));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        auto x = encode(catalog, ordered, pool[i]);
        for (std::size_t j = 0; j < x.size(); ++j)
            C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
    }
    return pool[argmax_expected_improvement(gp, C, best_so_far)];
}

}  // namespace dotune
