/*
 * test_sampling.cpp
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

#include <map>

#include "dotune/sampling.hpp"

using namespace dotune;

namespace {

KnobSpec make_int(const std::string& name, double lo, double hi, std::int64_t def) {
    KnobSpec k;
    k.name = name;
    k.kind = KnobKind::IntegerRange;
    k.min = lo;
    k.max = hi;
    k.default_value = def;
    return k;
}

KnobSpec make_cont(const std::string& name, double lo, double hi, double def) {
    KnobSpec k;
    k.name = name;
    k.kind = KnobKind::ContinuousRange;
    k.min = lo;
    k.max = hi;
    k.default_value = def;
    return k;
}

KnobSpec make_bool(const std::string& name) {
    KnobSpec k;
    k.name = name;
    k.kind = KnobKind::Boolean;
    k.default_value = false;
    return k;
}

KnobSpec make_enum(const std::string& name, std::vector<std::string> choices) {
    KnobSpec k;
    k.name = name;
    k.kind = KnobKind::Enumeration;
    k.default_value = choices.front();
    k.choices = std::move(choices);
    return k;
}

}  // namespace

TEST_CASE("sample_random rejects an empty subset") {
    KnobCatalog cat({make_int("a", 1, 10, 1)});
    Rng rng(7);
    REQUIRE_THROWS_AS(sample_random(cat, {}, 1, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_lhs(cat, {}, 1, rng), std::invalid_argument);
}

TEST_CASE("sampling is deterministic per seed") {
    KnobCatalog cat({make_int("a", 1, 10, 1), make_cont("b", 0, 1, 0.5), make_bool("c")});
    Rng r1(99), r2(99);
    auto s1 = sample_random(cat, {"a", "b", "c"}, 20, r1);
    auto s2 = sample_random(cat, {"a", "b", "c"}, 20, r2);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) REQUIRE(s1[i] == s2[i]);

    Rng r3(99), r4(99);
    auto l1 = sample_lhs(cat, {"a", "b", "c"}, 20, r3);
    auto l2 = sample_lhs(cat, {"a", "b", "c"}, 20, r4);
    for (std::size_t i = 0; i < l1.size(); ++i) REQUIRE(l1[i] == l2[i]);
}

TEST_CASE("sample_random draws uniformly over an integer domain") {
    KnobCatalog cat({make_int("a", 1, 10, 1)});
    Rng rng(12345);
    auto samples = sample_random(cat, {"a"}, 1000, rng);
    std::map<std::int64_t, int> freq;
    for (const auto& c : samples) freq[std::get<std::int64_t>(c.at("a"))] += 1;
    REQUIRE(freq.size() == 10);
    for (const auto& [value, count] : freq) {
        INFO("value " << value << " count " << count);
        REQUIRE(count >= 60);
        REQUIRE(count <= 140);
    }
}

TEST_CASE("sample_random leaves off-subset knobs at default") {
    KnobCatalog cat({make_int("a", 1, 10, 3), make_cont("b", 0, 1, 0.25)});
    Rng rng(5);
    for (const auto& c : sample_random(cat, {"a"}, 50, rng))
        REQUIRE(std::get<double>(c.at("b")) == 0.25);
}

TEST_CASE("LHS puts one point in each stratum of a continuous knob") {
    KnobCatalog cat({make_cont("x", 0, 1, 0)});
    Rng rng(3);
    auto samples = sample_lhs(cat, {"x"}, 4, rng);
    std::vector<bool> hit(4, false);
    for (const auto& c : samples) {
        const double u = std::get<double>(c.at("x"));
        const auto stratum = static_cast<std::size_t>(std::min(3.0, std::floor(u * 4.0)));
        REQUIRE_FALSE(hit[stratum]);
        hit[stratum] = true;
    }
}

TEST_CASE("LHS stratifies every axis independently") {
    KnobCatalog cat({make_cont("x", 0, 1, 0), make_cont("y", -2, 2, 0)});
    Rng rng(11);
    auto samples = sample_lhs(cat, {"x", "y"}, 4, rng);
    for (const auto& name : {"x", "y"}) {
        std::vector<bool> hit(4, false);
        for (const auto& c : samples) {
            const auto& spec = cat.spec(name);
            const double u = spec.encode_value(c.at(name));
            const auto stratum = static_cast<std::size_t>(std::min(3.0, std::floor(u * 4.0)));
            REQUIRE_FALSE(hit[stratum]);
            hit[stratum] = true;
        }
    }
}

TEST_CASE("LHS splits a boolean knob as evenly as possible") {
    KnobCatalog cat({make_bool("flag")});
    Rng rng(21);
    auto samples = sample_lhs(cat, {"flag"}, 5, rng);
    int t = 0;
    for (const auto& c : samples) t += std::get<bool>(c.at("flag")) ? 1 : 0;
    REQUIRE((t == 2 || t == 3));
}

TEST_CASE("LHS stratification property over mixed kinds") {
    // continuous knobs: one point per stratum; finite grids: multiplicity
    // floor(n/m) or ceil(n/m) per value
    Rng meta(777);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = static_cast<std::size_t>(meta.uniform_int(2, 64));
        const auto d = static_cast<std::size_t>(meta.uniform_int(1, 8));
        std::vector<KnobSpec> specs;
        for (std::size_t k = 0; k < d; ++k) {
            const auto kind = meta.uniform_int(0, 3);
            const std::string name = "k" + std::to_string(k);
            if (kind == 0) specs.push_back(make_cont(name, -1, 1, 0));
            if (kind == 1) specs.push_back(make_int(name, 0, meta.uniform_int(1, 12), 0));
            if (kind == 2) specs.push_back(make_bool(name));
            if (kind == 3) specs.push_back(make_enum(name, {"a", "b", "c"}));
        }
        KnobCatalog cat(specs);
        std::vector<std::string> subset;
        for (const auto& s : specs) subset.push_back(s.name);
        Rng rng(1000 + static_cast<std::uint64_t>(trial));
        auto samples = sample_lhs(cat, subset, n, rng);
        REQUIRE(samples.size() == n);

        for (const auto& spec : specs) {
            if (spec.kind == KnobKind::ContinuousRange) {
                std::vector<int> hits(n, 0);
                for (const auto& c : samples) {
                    const double u = spec.encode_value(c.at(spec.name));
                    auto stratum = static_cast<std::size_t>(std::min(
                        static_cast<double>(n - 1), std::floor(u * static_cast<double>(n))));
                    hits[stratum] += 1;
                }
                for (int h : hits) REQUIRE(h == 1);
            } else {
                const std::size_t m = spec.grid_size();
                std::map<double, std::size_t> counts;
                for (const auto& c : samples) counts[spec.encode_value(c.at(spec.name))] += 1;
                const std::size_t lo = n / m;
                const std::size_t hi = lo + (n % m == 0 ? 0 : 1);
                std::size_t total = 0;
                for (const auto& [u, count] : counts) {
                    REQUIRE(count >= lo);
                    REQUIRE(count <= std::max<std::size_t>(hi, 1));
                    total += count;
                }
                REQUIRE(total == n);
                if (lo > 0) REQUIRE(counts.size() == m);
            }
        }
    }
}
