/*
 * target.hpp
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

#include "dotune/bench.hpp"
#include "dotune/knobs.hpp"
#include "dotune/rng.hpp"

namespace dotune {

enum class MetricDirection { Maximize, Minimize };

inline std::string to_string(MetricDirection d) {
    return d == MetricDirection::Maximize ? "maximize" : "minimize";
}

enum class BenchPhase { Probe, Full };

//! Raised when an evaluation backend fails (crash, timeout, bad output).
class TargetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Evaluation backend. Simulator-style targets expose a per-second
//! throughput series or per-query batch times; externally mediated targets
//! answer discrete probe/full requests instead.
class Target {
public:
    virtual ~Target() = default;

    virtual BenchMode mode() const = 0;
    virtual MetricDirection direction() const = 0;
    virtual std::size_t query_count() const { return 0; }

    //! Per-second TPS series of a run lasting `seconds`.
    virtual std::vector<double> throughput_series(const Configuration&, double /*seconds*/,
                                                  Rng&) {
        throw TargetError("target does not produce throughput series");
    }

    //! Total seconds to execute the given query indices.
    virtual double batch_time(const Configuration&, const std::vector<std::size_t>& /*queries*/,
                              Rng&) {
        throw TargetError("target does not execute query batches");
    }

    //! True when the backend is driven via probe/full requests rather than
    //! raw series (the external-command adapter).
    virtual bool phase_based() const { return false; }

    virtual Measurement measure_phase(const Configuration&, const BenchPolicy&, BenchPhase,
                                      Rng&) {
        throw TargetError("target does not support phase-based measurement");
    }

    //! Clears any cross-run state; the replication harness calls this so
    //! every seed starts from a rebooted system.
    virtual void reset() {}
};

}  // namespace dotune
