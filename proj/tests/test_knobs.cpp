/*
 * test_knobs.cpp
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

#include "dotune/knobs.hpp"
#include "dotune/rng.hpp"

using namespace dotune;

namespace {

KnobCatalog small_catalog() {
    KnobSpec a;
    a.name = "threads";
    a.kind = KnobKind::IntegerRange;
    a.min = 1;
    a.max = 64;
    a.default_value = std::int64_t{4};
    KnobSpec b;
    b.name = "ratio";
    b.kind = KnobKind::ContinuousRange;
    b.min = 0.0;
    b.max = 100.0;
    b.default_value = 25.0;
    KnobSpec c;
    c.name = "enabled";
    c.kind = KnobKind::Boolean;
    c.default_value = true;
    KnobSpec d;
    d.name = "method";
    d.kind = KnobKind::Enumeration;
    d.choices = {"fsync", "O_DSYNC", "O_DIRECT"};
    d.default_value = std::string("fsync");
    return KnobCatalog({a, b, c, d});
}

}  // namespace

TEST_CASE("validate reports out-of-range values") {
    auto cat = small_catalog();
    auto cfg = cat.default_config();
    cfg.values["threads"] = std::int64_t{65};
    auto violations = validate(cat, cfg);
    REQUIRE(violations.size() == 1);
    REQUIRE(violations[0].find("out of range") != std::string::npos);
}

TEST_CASE("validate accepts an all-defaults configuration") {
    auto cat = small_catalog();
    REQUIRE(validate(cat, cat.default_config()).empty());
}

TEST_CASE("validate reports missing assignments and unknown knobs") {
    auto cat = small_catalog();
    auto cfg = cat.default_config();
    cfg.values.erase("ratio");
    auto violations = validate(cat, cfg);
    REQUIRE(violations.size() == 1);
    REQUIRE(violations[0].find("missing assignment") != std::string::npos);

    cfg = cat.default_config();
    cfg.values["bogus"] = std::int64_t{1};
    violations = validate(cat, cfg);
    REQUIRE(violations.size() == 1);
    REQUIRE(violations[0].find("unknown knob") != std::string::npos);
}

TEST_CASE("encode maps domains onto [0,1]") {
    KnobSpec k;
    k.name = "x";
    k.kind = KnobKind::IntegerRange;
    k.min = 0;
    k.max = 100;
    k.default_value = std::int64_t{0};
    KnobCatalog cat({k});
    Configuration cfg;
    cfg.values["x"] = std::int64_t{0};
    REQUIRE(encode(cat, {"x"}, cfg)[0] == 0.0);
    cfg.values["x"] = std::int64_t{100};
    REQUIRE(encode(cat, {"x"}, cfg)[0] == 1.0);

    auto small = small_catalog();
    Configuration c2 = small.default_config();
    c2.values["enabled"] = true;
    REQUIRE(encode(small, {"enabled"}, c2)[0] == 1.0);
    c2.values["enabled"] = false;
    REQUIRE(encode(small, {"enabled"}, c2)[0] == 0.0);
    c2.values["method"] = std::string("O_DSYNC");
    REQUIRE(encode(small, {"method"}, c2)[0] == Catch::Approx(0.5));
}

TEST_CASE("encode rejects invalid values") {
    auto cat = small_catalog();
    auto cfg = cat.default_config();
    cfg.values["threads"] = std::int64_t{999};
    REQUIRE_THROWS_AS(encode(cat, {"threads"}, cfg), std::invalid_argument);
}

TEST_CASE("encode columns follow catalog order regardless of subset order") {
    auto cat = small_catalog();
    auto cfg = cat.default_config();
    auto x1 = encode(cat, {"ratio", "threads"}, cfg);
    auto x2 = encode(cat, {"threads", "ratio"}, cfg);
    REQUIRE(x1 == x2);
    REQUIRE(x1[0] == Catch::Approx((4.0 - 1.0) / 63.0));  // threads first in catalog
}

TEST_CASE("integer decode round-trips through encode, ties toward min") {
    KnobSpec k;
    k.name = "x";
    k.kind = KnobKind::IntegerRange;
    k.min = 1;
    k.max = 10;
    k.default_value = std::int64_t{1};
    for (std::int64_t v = 1; v <= 10; ++v) {
        Configuration cfg;
        cfg.values["x"] = v;
        KnobCatalog cat({k});
        const double u = encode(cat, {"x"}, cfg)[0];
        REQUIRE(std::get<std::int64_t>(k.decode_unit(u)) == v);
    }
    // exact midpoint between grid values resolves to the lower one
    REQUIRE(std::get<std::int64_t>(k.decode_unit(0.5 / 9.0)) == 1);
    REQUIRE(std::get<bool>(small_catalog().spec("enabled").decode_unit(0.5)) == false);
}

TEST_CASE("catalog invariants are enforced") {
    KnobSpec k;
    k.name = "x";
    k.kind = KnobKind::IntegerRange;
    k.min = 5;
    k.max = 5;
    k.default_value = std::int64_t{5};
    REQUIRE_THROWS_AS(KnobCatalog({k}), std::invalid_argument);  // min < max

    KnobSpec a;
    a.name = "dup";
    a.kind = KnobKind::Boolean;
    a.default_value = false;
    REQUIRE_THROWS_AS(KnobCatalog({a, a}), std::invalid_argument);

    KnobSpec e;
    e.name = "e";
    e.kind = KnobKind::Enumeration;
    e.choices = {"only"};
    e.default_value = std::string("only");
    REQUIRE_THROWS_AS(KnobCatalog({e}), std::invalid_argument);

    KnobSpec bad_default;
    bad_default.name = "y";
    bad_default.kind = KnobKind::IntegerRange;
    bad_default.min = 0;
    bad_default.max = 10;
    bad_default.default_value = std::int64_t{42};
    REQUIRE_THROWS_AS(KnobCatalog({bad_default}), std::invalid_argument);
}

TEST_CASE("ranking must be a permutation of knob names") {
    auto cat = small_catalog();
    REQUIRE_THROWS_AS(cat.set_ranking({"threads"}), std::invalid_argument);
    REQUIRE_THROWS_AS(cat.set_ranking({"threads", "ratio", "enabled", "nope"}),
                      std::invalid_argument);
    cat.set_ranking({"method", "threads", "enabled", "ratio"});
    REQUIRE(cat.effective_ranking()[0] == "method");
}

TEST_CASE("catalog JSON round-trips, both document forms parse") {
    auto cat = small_catalog();
    cat.set_ranking({"method", "threads", "enabled", "ratio"});
    auto j = to_json(cat);
    auto back = catalog_from_json(j);
    REQUIRE(back.size() == cat.size());
    REQUIRE(back.ranking() == cat.ranking());
    REQUIRE(back.spec("method").choices == cat.spec("method").choices);

    // bare-array form
    auto arr = nlohmann::json::array();
    for (const auto& k : cat.knobs()) arr.push_back(to_json(k));
    auto bare = catalog_from_json(arr);
    REQUIRE(bare.size() == cat.size());
    REQUIRE_FALSE(bare.ranking());
}

TEST_CASE("configuration JSON round-trips") {
    auto cat = small_catalog();
    auto cfg = cat.default_config();
    cfg.values["threads"] = std::int64_t{17};
    cfg.values["ratio"] = 62.5;
    cfg.values["enabled"] = false;
    auto back = configuration_from_json(cat, to_json(cfg));
    REQUIRE(back == cfg);
}
