/*
 * observation.hpp
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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dotune/knobs.hpp"

namespace dotune {

enum class Fidelity { Full, Partial };

inline std::string to_string(Fidelity f) { return f == Fidelity::Full ? "full" : "partial"; }

inline Fidelity fidelity_from_string(const std::string& s) {
    if (s == "full") return Fidelity::Full;
    if (s == "partial") return Fidelity::Partial;
    throw std::invalid_argument("unknown fidelity: " + s);
}

//! One evaluated configuration. score is on the internal higher-is-better
//! scale; raw_metric keeps the original units (TPS or seconds).
struct Observation {
    Configuration config;
    double score = 0.0;
    Fidelity fidelity = Fidelity::Full;
    double raw_metric = 0.0;
    std::vector<std::string> active_set;
    std::int64_t iteration = 0;
    double wall_ms = 0.0;
};

//! Append-only store shared by the surrogate, the pruner, and the baselines.
class ObservationSet {
public:
    void append(Observation obs) {
        if (!std::isfinite(obs.score))
            throw std::invalid_argument("observation score must be finite");
        if (!data_.empty() && obs.iteration <= data_.back().iteration)
            throw std::invalid_argument("observation iterations must be strictly increasing");
        data_.push_back(std::move(obs));
    }

    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    const Observation& operator[](std::size_t i) const { return data_[i]; }
    const std::vector<Observation>& all() const { return data_; }

    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

private:
    std::vector<Observation> data_;
};

struct ProjectedData {
    Eigen::MatrixXd X;                 // one row per retained observation
    Eigen::VectorXd y;                 // scores, bit-exact copies
    std::vector<Fidelity> fidelity;
    std::vector<std::size_t> rows;     // indices into the source set
};

//! Projects past observations onto a knob subset. A row is retained iff
//! every knob outside the subset sits at its value in `reference` (catalog
//! defaults unless a caller froze knobs elsewhere); only then is the stored
//! score valid for the lower-dimensional design.
inline ProjectedData project(const ObservationSet& obs, const KnobCatalog& catalog,
                             const std::vector<std::string>& subset,
                             const Configuration& reference) {
    auto ordered = catalog.normalize_subset(subset);
    std::vector<bool> in_subset(catalog.size(), false);
    for (const auto& name : ordered) in_subset[catalog.index_of(name)] = true;

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < catalog.size() && ok; ++k) {
            if (in_subset[k]) continue;
            const auto& name = catalog[k].name;
            if (!(obs[i].config.at(name) == reference.at(name))) ok = false;
        }
        if (ok) keep.push_back(i);
    }

    ProjectedData out;
    out.X.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(ordered.size()));
    out.y.resize(static_cast<Eigen::Index>(keep.size()));
    out.fidelity.reserve(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        auto x = encode(catalog, ordered, obs[keep[r]].config);
        for (std::size_t c = 0; c < x.size(); ++c)
            out.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[c];
        out.y(static_cast<Eigen::Index>(r)) = obs[keep[r]].score;
        out.fidelity.push_back(obs[keep[r]].fidelity);
    }
    out.rows = std::move(keep);
    return out;
}

inline ProjectedData project(const ObservationSet& obs, const KnobCatalog& catalog,
                             const std::vector<std::string>& subset) {
    return project(obs, catalog, subset, catalog.default_config());
}

}  // namespace dotune
