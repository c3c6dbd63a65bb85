/*
 * runlog.hpp
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

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dotune/observation.hpp"
#include "dotune/policy.hpp"

namespace dotune {

//! One line of the run log; serialized as JSONL for downstream analysis.
struct IterationRecord {
    std::int64_t iter = 0;
    int epoch = 0;
    std::string strategy;
    std::optional<int> action;  // decision that shaped this epoch; absent on the first
    std::vector<std::string> active_knobs;
    Configuration config;
    double raw_metric = 0.0;
    double score = 0.0;
    Fidelity fidelity = Fidelity::Full;
    double best_score = 0.0;
    double wall_ms = 0.0;
    double bench_cost = 0.0;  // simulated benchmark seconds; kept out of the JSONL schema
};

struct EpochRecord {
    int epoch = 0;
    std::vector<std::string> active_before;
    std::vector<std::string> active_after_rfecv;
    std::optional<PolicyDecision> decision;
    int length = 0;
    double y_star = 0.0;
    std::optional<double> best_before;  // b entering the policy step; absent on epoch 0
};

struct RunLog {
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<IterationRecord> iterations;
    std::vector<EpochRecord> epochs;
    Configuration best_config;
    double best_score = 0.0;
    double best_raw_metric = 0.0;
    bool has_best = false;
    std::optional<double> score_scale_c;  // C in score = C / raw for minimize metrics
    bool aborted = false;

    double total_bench_seconds() const {
        double total = 0.0;
        for (const auto& r : iterations) total += r.bench_cost;
        return total;
    }

    std::vector<double> best_score_series() const {
        std::vector<double> s;
        s.reserve(iterations.size());
        for (const auto& r : iterations) s.push_back(r.best_score);
        return s;
    }
};

inline nlohmann::json to_json(const IterationRecord& r) {
    nlohmann::json j{{"iter", r.iter},
                     {"epoch", r.epoch},
                     {"strategy", r.strategy},
                     {"active_knobs", r.active_knobs},
                     {"config", to_json(r.config)},
                     {"raw_metric", r.raw_metric},
                     {"score", r.score},
                     {"fidelity", to_string(r.fidelity)},
                     {"best_score", r.best_score},
                     {"wall_ms", r.wall_ms}};
    j["action"] = r.action ? nlohmann::json(*r.action) : nlohmann::json();
    return j;
}

inline IterationRecord iteration_record_from_json(const KnobCatalog& catalog,
                                                  const nlohmann::json& j) {
    IterationRecord r;
    r.iter = j.at("iter").get<std::int64_t>();
    r.epoch = j.at("epoch").get<int>();
    r.strategy = j.at("strategy").get<std::string>();
    if (!j.at("action").is_null()) r.action = j.at("action").get<int>();
    r.active_knobs = j.at("active_knobs").get<std::vector<std::string>>();
    r.config = configuration_from_json(catalog, j.at("config"));
    r.raw_metric = j.at("raw_metric").get<double>();
    r.score = j.at("score").get<double>();
    r.fidelity = fidelity_from_string(j.at("fidelity").get<std::string>());
    r.best_score = j.at("best_score").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

inline std::string to_jsonl(const RunLog& log) {
    std::ostringstream out;
    for (const auto& r : log.iterations) out << to_json(r).dump() << '\n';
    return out.str();
}

inline nlohmann::json summary_json(const RunLog& log) {
    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& e : log.epochs) {
        nlohmann::json je{{"epoch", e.epoch},
                          {"active_before", e.active_before},
                          {"active_after_rfecv", e.active_after_rfecv},
                          {"length", e.length},
                          {"y_star", e.y_star}};
        je["best_before"] = e.best_before ? nlohmann::json(*e.best_before) : nlohmann::json();
        if (e.decision) {
            nlohmann::json jd{{"action", e.decision->action},
                              {"init_step", e.decision->init_step}};
            if (e.decision->gain) jd["gain"] = *e.decision->gain;
            if (e.decision->reward) jd["reward"] = *e.decision->reward;
            if (e.decision->lambda) jd["lambda"] = *e.decision->lambda;
            je["decision"] = std::move(jd);
        } else {
            je["decision"] = nlohmann::json();
        }
        epochs.push_back(std::move(je));
    }
    nlohmann::json j{{"strategy", log.strategy},
                     {"seed", log.seed},
                     {"iterations", log.iterations.size()},
                     {"best_score", log.best_score},
                     {"best_raw_metric", log.best_raw_metric},
                     {"best_config", to_json(log.best_config)},
                     {"total_bench_seconds", log.total_bench_seconds()},
                     {"aborted", log.aborted},
                     {"epochs", std::move(epochs)}};
    j["score_scale_c"] =
        log.score_scale_c ? nlohmann::json(*log.score_scale_c) : nlohmann::json();
    return j;
}

}  // namespace dotune
