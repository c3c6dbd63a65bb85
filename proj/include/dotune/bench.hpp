/*
 * bench.hpp
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

#include <span>
#include <stdexcept>
#include <string>

#include "dotune/observation.hpp"

namespace dotune {

enum class BenchMode { ThroughputWindow, QuerySubset };

inline std::string to_string(BenchMode m) {
    return m == BenchMode::ThroughputWindow ? "throughput-window" : "query-subset";
}

inline BenchMode bench_mode_from_string(const std::string& s) {
    if (s == "throughput-window") return BenchMode::ThroughputWindow;
    if (s == "query-subset") return BenchMode::QuerySubset;
    throw std::invalid_argument("unknown bench mode: " + s);
}

//! Benchmark budget policy. Throughput mode runs a probe window of t_cut
//! seconds against a t_max-second canonical run scored on the final
//! steady_window seconds; query mode probes a fraction of the query set.
struct BenchPolicy {
    BenchMode mode = BenchMode::ThroughputWindow;
    double t_max = 90.0;
    double steady_window = 30.0;
    double t_cut = 40.0;
    double subset_fraction = 0.40;
    bool adaptive = true;

    void check() const {
        if (!(t_cut > 0.0) || !(t_cut <= t_max))
            throw std::invalid_argument("bench policy: need 0 < t_cut <= t_max");
        if (!(steady_window > 0.0) || !(steady_window <= t_max))
            throw std::invalid_argument("bench policy: need 0 < steady_window <= t_max");
        if (!(subset_fraction > 0.0) || !(subset_fraction <= 1.0))
            throw std::invalid_argument("bench policy: need 0 < subset_fraction <= 1");
    }
};

//! A benchmark result: the metric in original units, whether it came from
//! the full budget, and the benchmarking seconds it consumed.
struct Measurement {
    double raw_metric = 0.0;
    Fidelity fidelity = Fidelity::Full;
    double cost = 0.0;
};

//! Mean absolute percentage error between paired partial and full metrics,
//! as a fraction.
inline double mape(std::span<const double> partial, std::span<const double> full) {
    if (partial.size() != full.size() || partial.empty())
        throw std::invalid_argument("mape: need equal-length nonempty vectors");
    double total = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full[i] == 0.0) throw std::invalid_argument("mape: full entries must be nonzero");
        total += std::fabs(partial[i] - full[i]) / std::fabs(full[i]);
    }
    return total / static_cast<double>(full.size());
}

}  // namespace dotune
