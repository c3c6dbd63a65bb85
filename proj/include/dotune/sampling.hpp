/*
 * sampling.hpp
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

#include <stdexcept>
#include <string>
#include <vector>

#include "dotune/knobs.hpp"
#include "dotune/rng.hpp"

namespace dotune {

inline KnobValue draw_uniform_value(const KnobSpec& spec, Rng& rng) {
    switch (spec.kind) {
        case KnobKind::IntegerRange:
            return rng.uniform_int(static_cast<std::int64_t>(spec.min),
                                   static_cast<std::int64_t>(spec.max));
        case KnobKind::ContinuousRange:
            return rng.uniform(spec.min, spec.max);
        case KnobKind::Boolean:
            return rng.bernoulli(0.5);
        case KnobKind::Enumeration:
            return spec.choices[rng.index(spec.choices.size())];
    }
    throw std::logic_error("bad knob kind");
}

//! n configurations with the subset knobs drawn uniformly over their domains
//! and every other knob at its default.
inline std::vector<Configuration> sample_random(const KnobCatalog& catalog,
                                                const std::vector<std::string>& subset,
                                                std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_random: n must be >= 1");
    if (subset.empty()) throw std::invalid_argument("sample_random: empty subset");
    auto ordered = catalog.normalize_subset(subset);
    const Configuration base = catalog.default_config();
    std::vector<Configuration> out(n, base);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& name : ordered)
            out[i].values[name] = draw_uniform_value(catalog.spec(name), rng);
    return out;
}

namespace detail {

//! Latin-hypercube column for one continuous knob: each of the n equal strata
//! of [0,1] is hit exactly once.
inline std::vector<double> lhs_unit_column(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
    return u;
}

//! Stratified assignment over a finite grid of m values: every value appears
//! floor(n/m) or ceil(n/m) times, the n mod m extras landing on values chosen
//! without replacement.
inline std::vector<std::size_t> lhs_grid_column(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<std::size_t> counts(m, n / m);
    for (std::size_t extra : rng.sample_without_replacement(m, n % m)) counts[extra] += 1;
    std::vector<std::size_t> column;
    column.reserve(n);
    for (std::size_t v = 0; v < m; ++v)
        for (std::size_t c = 0; c < counts[v]; ++c) column.push_back(v);
    rng.shuffle(column);
    return column;
}

}  // namespace detail

//! Latin hypercube design over the subset knobs. Continuous knobs stratify
//! [0,1] with one point per stratum; finite-grid kinds (integer, boolean,
//! enumeration) stratify over their value grid with as-even-as-possible
//! multiplicity. Deterministic per seed.
inline std::vector<Configuration> sample_lhs(const KnobCatalog& catalog,
                                             const std::vector<std::string>& subset,
                                             std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_lhs: n must be >= 1");
    if (subset.empty()) throw std::invalid_argument("sample_lhs: empty subset");
    auto ordered = catalog.normalize_subset(subset);
    const Configuration base = catalog.default_config();
    std::vector<Configuration> out(n, base);
    for (const auto& name : ordered) {
        const auto& spec = catalog.spec(name);
        if (spec.kind == KnobKind::ContinuousRange) {
            auto u = detail::lhs_unit_column(n, rng);
            for (std::size_t i = 0; i < n; ++i)
                out[i].values[name] = spec.min + u[i] * (spec.max - spec.min);
        } else {
            const std::size_t m = spec.grid_size();
            auto idx = detail::lhs_grid_column(n, m, rng);
            for (std::size_t i = 0; i < n; ++i) {
                switch (spec.kind) {
                    case KnobKind::IntegerRange:
                        out[i].values[name] =
                            static_cast<std::int64_t>(spec.min) + static_cast<std::int64_t>(idx[i]);
                        break;
                    case KnobKind::Boolean:
                        out[i].values[name] = idx[i] == 1;
                        break;
                    case KnobKind::Enumeration:
                        out[i].values[name] = spec.choices[idx[i]];
                        break;
                    default: break;
                }
            }
        }
    }
    return out;
}

}  // namespace dotune
