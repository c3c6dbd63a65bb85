/*
 * synthetic.hpp
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

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dotune/target.hpp"

namespace dotune {

enum class EffectShape { MonotoneSaturating, UnimodalPeak, Step };

inline std::string to_string(EffectShape s) {
    switch (s) {
        case EffectShape::MonotoneSaturating: return "monotone-saturating";
        case EffectShape::UnimodalPeak: return "unimodal-peak";
        case EffectShape::Step: return "step";
    }
    return "?";
}

inline EffectShape effect_shape_from_string(const std::string& s) {
    if (s == "monotone-saturating") return EffectShape::MonotoneSaturating;
    if (s == "unimodal-peak") return EffectShape::UnimodalPeak;
    if (s == "step") return EffectShape::Step;
    throw std::invalid_argument("unknown effect shape: " + s);
}

//! Per-knob ground-truth effect on the encoded coordinate u in [0,1],
//! normalized so the shape's maximum is 1 and scaled by weight in the
//! surface. The unimodal peak exists so more-is-better heuristics fail.
struct EffectSpec {
    EffectShape shape = EffectShape::MonotoneSaturating;
    double weight = 0.0;
    double peak = 0.5;       // unimodal only
    double width = 0.25;     // unimodal only
    double threshold = 0.5;  // step only

    double value(double u) const {
        switch (shape) {
            case EffectShape::MonotoneSaturating:
                return (1.0 - std::exp(-4.0 * u)) / (1.0 - std::exp(-4.0));
            case EffectShape::UnimodalPeak: {
                const double z = (u - peak) / width;
                return std::exp(-z * z);
            }
            case EffectShape::Step:
                return u >= threshold ? 1.0 : 0.0;
        }
        return 0.0;
    }
};

struct Interaction {
    std::string a;
    std::string b;
    double weight = 0.0;
};

enum class SurfaceMode { Throughput, BatchTime };

inline std::string to_string(SurfaceMode m) {
    return m == SurfaceMode::Throughput ? "throughput" : "batch-time";
}

inline SurfaceMode surface_mode_from_string(const std::string& s) {
    if (s == "throughput") return SurfaceMode::Throughput;
    if (s == "batch-time") return SurfaceMode::BatchTime;
    throw std::invalid_argument("unknown surface mode: " + s);
}

//! Synthetic performance surface with known knob importances. Non-listed
//! knobs have exactly zero effect. In throughput mode the surface value is
//! the steady-state TPS; in batch mode it is the dimensionless speed factor
//! dividing every query's base time.
struct SyntheticSurface {
    KnobCatalog catalog;
    std::map<std::string, EffectSpec> influential;
    std::vector<Interaction> interactions;
    double base_metric = 1.0;
    double noise_cv = 0.0;  // coefficient of variation, run level and per sample
    SurfaceMode mode = SurfaceMode::Throughput;
    double ramp_seconds = 20.0;  // warm-up ramp from 0.6 to 1.0 (throughput)
    std::vector<double> query_times;  // batch mode, seconds per query

    void check() const {
        for (const auto& [name, spec] : influential) {
            catalog.index_of(name);
            if (spec.weight < 0.0)
                throw std::invalid_argument("effect weight must be >= 0: " + name);
        }
        for (const auto& i : interactions) {
            catalog.index_of(i.a);
            catalog.index_of(i.b);
        }
        if (!(base_metric > 0.0)) throw std::invalid_argument("base_metric must be positive");
        if (noise_cv < 0.0) throw std::invalid_argument("noise_cv must be >= 0");
        if (mode == SurfaceMode::BatchTime && query_times.empty())
            throw std::invalid_argument("batch-time surface needs query_times");
    }
};

namespace synthetic_detail {

inline double effect_at(const SyntheticSurface& s, const std::string& name,
                        const Configuration& config) {
    auto it = s.influential.find(name);
    if (it == s.influential.end()) return 0.0;
    const auto& spec = s.catalog.spec(name);
    return it->second.value(spec.encode_value(config.at(name)));
}

}  // namespace synthetic_detail

//! Dimensionless factor 1 + sum of weighted effects + pairwise interactions.
inline double performance_factor(const SyntheticSurface& s, const Configuration& config) {
    double acc = 1.0;
    for (const auto& [name, spec] : s.influential)
        acc += spec.weight * synthetic_detail::effect_at(s, name, config);
    for (const auto& i : s.interactions)
        acc += i.weight * synthetic_detail::effect_at(s, i.a, config) *
               synthetic_detail::effect_at(s, i.b, config);
    return acc;
}

//! Noiseless surface value: base_metric * performance factor. Higher is
//! better in both modes (batch runs divide query times by it).
inline double surface_eval(const SyntheticSurface& s, const Configuration& config) {
    auto violations = validate(s.catalog, config);
    if (!violations.empty())
        throw std::invalid_argument("surface_eval: invalid config: " + violations.front());
    return s.base_metric * performance_factor(s, config);
}

//! Per-second TPS series: surface value, a run-level noise draw, a linear
//! 0.6 -> 1.0 warm-up ramp, and per-second jitter.
inline std::vector<double> simulate_throughput(const SyntheticSurface& s,
                                               const Configuration& config, double seconds,
                                               Rng& rng) {
    if (s.mode != SurfaceMode::Throughput)
        throw std::invalid_argument("simulate_throughput: not a throughput surface");
    const double level = surface_eval(s, config) * (1.0 + s.noise_cv * rng.normal());
    const auto n = static_cast<std::size_t>(std::llround(seconds));
    std::vector<double> series(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double mid = static_cast<double>(t) + 0.5;
        const double ramp =
            s.ramp_seconds > 0.0 ? std::min(1.0, 0.6 + 0.4 * mid / s.ramp_seconds) : 1.0;
        series[t] = std::max(0.0, level * ramp * (1.0 + s.noise_cv * rng.normal()));
    }
    return series;
}

//! Total seconds to run the given query subset: per-query base times divided
//! by the speed factor, with run-level and per-query noise.
inline double simulate_batch(const SyntheticSurface& s, const Configuration& config,
                             const std::vector<std::size_t>& query_subset, Rng& rng) {
    if (s.mode != SurfaceMode::BatchTime)
        throw std::invalid_argument("simulate_batch: not a batch-time surface");
    const double factor = performance_factor(s, config);
    auto violations = validate(s.catalog, config);
    if (!violations.empty())
        throw std::invalid_argument("simulate_batch: invalid config: " + violations.front());
    const double run_noise = 1.0 + s.noise_cv * rng.normal();
    double total = 0.0;
    for (std::size_t q : query_subset) {
        if (q >= s.query_times.size()) throw std::invalid_argument("query index out of range");
        const double t =
            s.query_times[q] * s.base_metric / factor * run_noise *
            (1.0 + s.noise_cv * rng.normal());
        total += std::max(0.0, t);
    }
    return total;
}

//! Ground-truth importance: weight times the effect range achievable on the
//! knob's own value grid, plus interaction terms scaled by the partner's
//! best achievable effect.
inline std::map<std::string, double> true_importance(const SyntheticSurface& s) {
    auto achievable_range = [&](const std::string& name) -> std::pair<double, double> {
        const auto& spec = s.catalog.spec(name);
        auto it = s.influential.find(name);
        if (it == s.influential.end()) return {0.0, 0.0};
        double lo = 1e300, hi = -1e300;
        const std::size_t grid = spec.grid_size();
        const std::size_t steps = grid > 0 ? std::min<std::size_t>(grid, 4097) : 2001;
        for (std::size_t i = 0; i < steps; ++i) {
            const double u = steps == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(steps - 1);
            const double e = it->second.value(spec.encode_value(spec.decode_unit(u)));
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        return {hi - lo, hi};
    };

    std::map<std::string, double> imp;
    for (const auto& k : s.catalog.knobs()) imp[k.name] = 0.0;
    std::map<std::string, std::pair<double, double>> cache;
    for (const auto& [name, spec] : s.influential) cache[name] = achievable_range(name);
    for (const auto& [name, spec] : s.influential)
        imp[name] += spec.weight * cache[name].first;
    for (const auto& i : s.interactions) {
        imp[i.a] += i.weight * cache[i.a].first * cache[i.b].second;
        imp[i.b] += i.weight * cache[i.b].first * cache[i.a].second;
    }
    return imp;
}

//! Knob names sorted by true importance, most important first; catalog order
//! breaks ties.
inline std::vector<std::string> true_ranking(const SyntheticSurface& s) {
    auto imp = true_importance(s);
    std::vector<std::string> names;
    for (const auto& k : s.catalog.knobs()) names.push_back(k.name);
    std::stable_sort(names.begin(), names.end(),
                     [&](const std::string& a, const std::string& b) { return imp[a] > imp[b]; });
    return names;
}

//! Target adapter over a synthetic surface.
class SyntheticTarget final : public Target {
public:
    explicit SyntheticTarget(SyntheticSurface surface) : surface_(std::move(surface)) {
        surface_.check();
    }

    BenchMode mode() const override {
        return surface_.mode == SurfaceMode::Throughput ? BenchMode::ThroughputWindow
                                                        : BenchMode::QuerySubset;
    }
    MetricDirection direction() const override {
        return surface_.mode == SurfaceMode::Throughput ? MetricDirection::Maximize
                                                        : MetricDirection::Minimize;
    }
    std::size_t query_count() const override { return surface_.query_times.size(); }

    std::vector<double> throughput_series(const Configuration& config, double seconds,
                                          Rng& rng) override {
        return simulate_throughput(surface_, config, seconds, rng);
    }

    double batch_time(const Configuration& config, const std::vector<std::size_t>& queries,
                      Rng& rng) override {
        return simulate_batch(surface_, config, queries, rng);
    }

    const SyntheticSurface& surface() const { return surface_; }

private:
    SyntheticSurface surface_;
};

// ---- JSON (de)serialization --------------------------------------------

inline nlohmann::json to_json(const SyntheticSurface& s) {
    nlohmann::json infl = nlohmann::json::object();
    for (const auto& [name, e] : s.influential) {
        nlohmann::json je{{"shape", to_string(e.shape)}, {"weight", e.weight}};
        if (e.shape == EffectShape::UnimodalPeak) {
            je["peak"] = e.peak;
            je["width"] = e.width;
        }
        if (e.shape == EffectShape::Step) je["threshold"] = e.threshold;
        infl[name] = std::move(je);
    }
    nlohmann::json inter = nlohmann::json::array();
    for (const auto& i : s.interactions) inter.push_back({i.a, i.b, i.weight});
    nlohmann::json jknobs = nlohmann::json::array();
    for (const auto& k : s.catalog.knobs()) jknobs.push_back(to_json(k));
    nlohmann::json j{{"knobs", std::move(jknobs)},
                     {"influential", std::move(infl)},
                     {"interactions", std::move(inter)},
                     {"base_metric", s.base_metric},
                     {"noise_cv", s.noise_cv},
                     {"mode", to_string(s.mode)},
                     {"ramp_seconds", s.ramp_seconds},
                     {"query_times", s.query_times}};
    return j;
}

inline SyntheticSurface surface_from_json(const nlohmann::json& j) {
    SyntheticSurface s;
    std::vector<KnobSpec> knobs;
    for (const auto& item : j.at("knobs")) knobs.push_back(knob_spec_from_json(item));
    s.catalog = KnobCatalog(std::move(knobs));
    if (j.contains("influential")) {
        for (auto it = j["influential"].begin(); it != j["influential"].end(); ++it) {
            EffectSpec e;
            e.shape = effect_shape_from_string(it.value().at("shape").get<std::string>());
            e.weight = it.value().at("weight").get<double>();
            if (it.value().contains("peak")) e.peak = it.value()["peak"].get<double>();
            if (it.value().contains("width")) e.width = it.value()["width"].get<double>();
            if (it.value().contains("threshold"))
                e.threshold = it.value()["threshold"].get<double>();
            s.influential[it.key()] = e;
        }
    }
    if (j.contains("interactions")) {
        for (const auto& item : j["interactions"])
            s.interactions.push_back(
                {item.at(0).get<std::string>(), item.at(1).get<std::string>(),
                 item.at(2).get<double>()});
    }
    s.base_metric = j.at("base_metric").get<double>();
    s.noise_cv = j.at("noise_cv").get<double>();
    s.mode = surface_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("ramp_seconds")) s.ramp_seconds = j["ramp_seconds"].get<double>();
    if (j.contains("query_times")) s.query_times = j["query_times"].get<std::vector<double>>();
    s.check();
    return s;
}

}  // namespace dotune
