/*
 * test_observation.cpp
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

#include <catch2/catch_amalgamated.hpp>

#include "dotune/observation.hpp"

using namespace dotune;

namespace {

KnobCatalog catalog3() {
    KnobSpec a;
    a.name = "a";
    a.kind = KnobKind::IntegerRange;
    a.min = 0;
    a.max = 100;
    a.default_value = std::int64_t{10};
    KnobSpec b;
    b.name = "b";
    b.kind = KnobKind::ContinuousRange;
    b.min = 0;
    b.max = 1;
    b.default_value = 0.5;
    KnobSpec c;
    c.name = "c";
    c.kind = KnobKind::Boolean;
    c.default_value = false;
    return KnobCatalog({a, b, c});
}

Observation make_obs(const KnobCatalog& cat, std::int64_t iter, double score,
                     std::optional<std::int64_t> a = std::nullopt,
                     std::optional<bool> c = std::nullopt) {
    Observation o;
    o.config = cat.default_config();
    if (a) o.config.values["a"] = *a;
    if (c) o.config.values["c"] = *c;
    o.score = score;
    o.raw_metric = score;
    o.iteration = iter;
    return o;
}

}  // namespace

TEST_CASE("observation iterations must strictly increase") {
    auto cat = catalog3();
    ObservationSet obs;
    obs.append(make_obs(cat, 0, 1.0));
    obs.append(make_obs(cat, 1, 2.0));
    REQUIRE_THROWS_AS(obs.append(make_obs(cat, 1, 3.0)), std::invalid_argument);
    REQUIRE_THROWS_AS(obs.append(make_obs(cat, 0, 3.0)), std::invalid_argument);
    Observation bad = make_obs(cat, 5, std::numeric_limits<double>::quiet_NaN());
    REQUIRE_THROWS_AS(obs.append(bad), std::invalid_argument);
}

TEST_CASE("projection keeps rows whose off-subset knobs sit at defaults") {
    auto cat = catalog3();
    ObservationSet obs;
    obs.append(make_obs(cat, 0, 1.5, 42));          // only subset knob moved
    obs.append(make_obs(cat, 1, 2.5, 7, true));     // off-subset knob c moved
    obs.append(make_obs(cat, 2, 3.5));              // defaults everywhere

    auto proj = project(obs, cat, {"a"});
    REQUIRE(proj.X.rows() == 2);
    REQUIRE(proj.X.cols() == 1);
    REQUIRE(proj.rows == std::vector<std::size_t>{0, 2});
    REQUIRE(proj.y(0) == 1.5);  // scores reproduced bit-exactly
    REQUIRE(proj.y(1) == 3.5);
    REQUIRE(proj.X(0, 0) == 0.42);
}

TEST_CASE("projection onto the sampled subset retains every row") {
    auto cat = catalog3();
    ObservationSet obs;
    for (int i = 0; i < 5; ++i) obs.append(make_obs(cat, i, i + 0.5, 10 + i));
    auto proj = project(obs, cat, {"a"});
    REQUIRE(static_cast<std::size_t>(proj.X.rows()) == obs.size());
}

TEST_CASE("projection of an empty set is an empty matrix") {
    auto cat = catalog3();
    ObservationSet obs;
    auto proj = project(obs, cat, {"a", "b"});
    REQUIRE(proj.X.rows() == 0);
    REQUIRE(proj.X.cols() == 2);
    REQUIRE(proj.y.size() == 0);
}

TEST_CASE("projection honors a frozen reference configuration") {
    auto cat = catalog3();
    Configuration frozen = cat.default_config();
    frozen.values["c"] = true;

    ObservationSet obs;
    obs.append(make_obs(cat, 0, 1.0, 3, true));   // matches frozen c
    obs.append(make_obs(cat, 1, 2.0, 4, false));  // default c, not frozen value
    auto proj = project(obs, cat, {"a"}, frozen);
    REQUIRE(proj.rows == std::vector<std::size_t>{0});
}

TEST_CASE("projection never exceeds the source row count") {
    auto cat = catalog3();
    ObservationSet obs;
    for (int i = 0; i < 8; ++i)
        obs.append(make_obs(cat, i, i, 5 + i, i % 2 == 0));
    auto proj = project(obs, cat, {"a", "c"});
    REQUIRE(static_cast<std::size_t>(proj.X.rows()) <= obs.size());
    // both subset columns encoded in catalog order
    REQUIRE(proj.X.cols() == 2);
}
