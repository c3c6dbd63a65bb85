/*
 * test_stats.cpp
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

#include "dotune/rng.hpp"
#include "dotune/stats.hpp"

using namespace dotune;

namespace {

// Literal transcriptions of the convergence definitions, kept deliberately
// naive; the production detectors must agree with these exactly.
ConvergenceResult oracle_oltp(const std::vector<double>& s, std::size_t w, double improve,
                              double band) {
    ConvergenceResult out;
    const std::size_t n = s.size();
    bool found = false;
    std::size_t t_star = 0;
    for (std::size_t t = w; t < n && !found; ++t) {
        double recent = -1e300, prev = -1e300;
        for (std::size_t i = t - w + 1; i <= t; ++i) recent = std::max(recent, s[i]);
        const std::size_t lo = t >= 2 * w ? t - 2 * w + 1 : 0;
        for (std::size_t i = lo; i <= t - w; ++i) prev = std::max(prev, s[i]);
        if ((recent - prev) / prev < improve) {
            t_star = t;
            found = true;
        }
    }
    if (!found) {
        out.converged = false;
        out.iteration = n - 1;
        out.t_star = n - 1;
        double m = -1e300;
        for (double v : s) m = std::max(m, v);
        out.optimum = m;
        return out;
    }
    out.converged = true;
    out.t_star = t_star;
    double p_star = -1e300;
    for (std::size_t i = 0; i < t_star; ++i) p_star = std::max(p_star, s[i]);
    out.optimum = p_star;
    for (std::size_t t = 0; t < n; ++t) {
        if (s[t] >= band * p_star) {
            out.iteration = t;
            break;
        }
    }
    return out;
}

ConvergenceResult oracle_olap(const std::vector<double>& s, std::size_t w, double improve,
                              double band) {
    ConvergenceResult out;
    const std::size_t n = s.size();
    bool found = false;
    std::size_t t_star = 0;
    for (std::size_t t = w; t < n && !found; ++t) {
        double recent = 1e300, prev = 1e300;
        for (std::size_t i = t - w + 1; i <= t; ++i) recent = std::min(recent, s[i]);
        const std::size_t lo = t >= 2 * w ? t - 2 * w + 1 : 0;
        for (std::size_t i = lo; i <= t - w; ++i) prev = std::min(prev, s[i]);
        if ((prev - recent) / prev < improve) {
            t_star = t;
            found = true;
        }
    }
    if (!found) {
        out.converged = false;
        out.iteration = n - 1;
        out.t_star = n - 1;
        double m = 1e300;
        for (double v : s) m = std::min(m, v);
        out.optimum = m;
        return out;
    }
    out.converged = true;
    out.t_star = t_star;
    double e_star = 1e300;
    for (std::size_t i = 0; i < t_star; ++i) e_star = std::min(e_star, s[i]);
    out.optimum = e_star;
    for (std::size_t t = 0; t < n; ++t) {
        if (s[t] <= band * e_star) {
            out.iteration = t;
            break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("welch: identical samples give t = 0, p = 1") {
    std::vector<double> a{1, 2, 3, 4, 5};
    auto r = welch_t_test(a, a);
    REQUIRE(r.t == 0.0);
    REQUIRE(r.p == Catch::Approx(1.0));
}

TEST_CASE("welch matches independent reference computations to 1e-6") {
    {
        auto r = welch_t_test(std::vector<double>{1, 2, 3, 4, 5},
                              std::vector<double>{2, 3, 4, 5, 6});
        REQUIRE(r.t == Catch::Approx(-1.0).margin(1e-6));
        REQUIRE(r.dof == Catch::Approx(8.0).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.346593507087).margin(1e-6));
    }
    {
        auto r = welch_t_test(std::vector<double>{10.2, 9.8, 11.4, 10.9, 10.1, 9.5},
                              std::vector<double>{12.0, 12.8, 11.9, 13.4});
        REQUIRE(r.t == Catch::Approx(-4.827767070000).margin(1e-6));
        REQUIRE(r.dof == Catch::Approx(6.574809114639).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.002267150315).margin(1e-6));
    }
    {
        auto r = welch_t_test(std::vector<double>{0.5, 0.7, 0.2, 0.9, 0.4, 0.6, 0.8, 0.3},
                              std::vector<double>{0.55, 0.65, 0.35});
        REQUIRE(r.t == Catch::Approx(0.269679944985).margin(1e-6));
        REQUIRE(r.dof == Catch::Approx(6.097034264325).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.796301929022).margin(1e-6));
    }
}

TEST_CASE("welch separates far-apart samples") {
    std::vector<double> a{0.0, 0.01, -0.01, 0.02, 0.0};
    std::vector<double> b{1000.0, 1000.01, 999.99, 1000.02, 1000.0};
    auto r = welch_t_test(a, b);
    REQUIRE(r.p < 1e-6);
}

TEST_CASE("welch zero-variance limits and preconditions") {
    std::vector<double> c1{2, 2, 2};
    std::vector<double> c2{3, 3, 3};
    REQUIRE(welch_t_test(c1, c1).p == 1.0);
    REQUIRE(welch_t_test(c1, c2).p == 0.0);
    REQUIRE_THROWS_AS(welch_t_test(std::vector<double>{1}, c1), std::invalid_argument);
}

TEST_CASE("welch symmetry: swapping samples flips t and preserves p") {
    Rng rng(55);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> a, b;
        for (int k = 0; k < 6; ++k) a.push_back(rng.normal());
        for (int k = 0; k < 9; ++k) b.push_back(0.4 + rng.normal() * 2.0);
        auto r1 = welch_t_test(a, b);
        auto r2 = welch_t_test(b, a);
        REQUIRE(r1.t == Catch::Approx(-r2.t).margin(1e-12));
        REQUIRE(r1.p == Catch::Approx(r2.p).margin(1e-12));
        REQUIRE(r1.p > 0.0);
        REQUIRE(r1.p <= 1.0);
    }
}

TEST_CASE("friedman: identical treatments in every block give chi2 = 0, p = 1") {
    std::vector<std::vector<double>> m{{1, 1, 1}, {2, 2, 2}, {5, 5, 5}};
    auto r = friedman_test(m);
    REQUIRE(r.chi2 == 0.0);
    REQUIRE(r.p == Catch::Approx(1.0));
}

TEST_CASE("friedman matches independent reference computations to 1e-6") {
    {
        std::vector<std::vector<double>> m{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {2, 1, 3}};
        auto r = friedman_test(m);
        REQUIRE(r.chi2 == Catch::Approx(6.5).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.038774207832).margin(1e-6));
        REQUIRE(r.mean_ranks[0] == Catch::Approx(1.25));
        REQUIRE(r.mean_ranks[1] == Catch::Approx(1.75));
        REQUIRE(r.mean_ranks[2] == Catch::Approx(3.0));
    }
    {
        std::vector<std::vector<double>> m{{4.2, 5.1, 3.9, 4.0},
                                           {3.8, 5.5, 4.1, 3.9},
                                           {4.0, 5.0, 4.2, 4.1},
                                           {4.5, 5.2, 3.8, 4.4},
                                           {4.1, 4.9, 4.0, 4.2}};
        auto r = friedman_test(m);
        REQUIRE(r.chi2 == Catch::Approx(9.24).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.026264417987).margin(1e-6));
        REQUIRE(r.mean_ranks[1] == Catch::Approx(4.0));
    }
    {
        // with ties inside blocks
        std::vector<std::vector<double>> m{{1.0, 1.0, 2.0},
                                           {2.0, 2.0, 1.0},
                                           {1.5, 1.5, 1.5},
                                           {3.0, 1.0, 2.0},
                                           {2.0, 3.0, 1.0}};
        auto r = friedman_test(m);
        REQUIRE(r.chi2 == Catch::Approx(0.571428571429).margin(1e-6));
        REQUIRE(r.p == Catch::Approx(0.751477293075).margin(1e-6));
    }
}

TEST_CASE("friedman dominant treatment earns the top mean rank") {
    std::vector<std::vector<double>> m(5, std::vector<double>(6));
    Rng rng(9);
    for (auto& row : m) {
        for (std::size_t j = 0; j < 6; ++j) row[j] = rng.normal();
        row[2] += 10.0;  // treatment 2 dominates
    }
    auto r = friedman_test(m);
    for (std::size_t j = 0; j < 6; ++j)
        if (j != 2) REQUIRE(r.mean_ranks[2] > r.mean_ranks[j]);
    REQUIRE(r.mean_ranks[2] == Catch::Approx(6.0));
}

TEST_CASE("friedman is invariant under within-block monotone transforms") {
    std::vector<std::vector<double>> m{{1.0, 3.0, 2.0}, {2.5, 2.6, 2.4}, {9, 7, 8}, {1, 5, 3}};
    auto r1 = friedman_test(m);
    for (auto& row : m)
        for (auto& v : row) v = std::exp(v);  // strictly increasing map
    auto r2 = friedman_test(m);
    REQUIRE(r1.chi2 == Catch::Approx(r2.chi2).margin(1e-12));
    REQUIRE(r1.p == Catch::Approx(r2.p).margin(1e-12));
}

TEST_CASE("friedman rejects degenerate shapes") {
    REQUIRE_THROWS_AS(friedman_test({{1.0, 2.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(friedman_test({{1.0}, {2.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(friedman_test({{1.0, 2.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("jaccard basics") {
    std::set<std::string> a{"a", "b", "c"};
    std::set<std::string> b{"b", "c", "d"};
    REQUIRE(jaccard(a, b) == Catch::Approx(0.5));
    REQUIRE(jaccard(a, a) == 1.0);
    REQUIRE(jaccard(a, {"x", "y"}) == 0.0);
    REQUIRE(jaccard({}, {}) == 1.0);
    REQUIRE(jaccard(a, b) == jaccard(b, a));
}

TEST_CASE("oltp convergence: constant series converges immediately") {
    std::vector<double> s(150, 42.0);
    auto r = convergence_oltp(s);
    REQUIRE(r.converged);
    REQUIRE(r.t_star == 100);
    REQUIRE(r.iteration == 0);
    REQUIRE(r.optimum == Catch::Approx(42.0));
}

TEST_CASE("oltp convergence: sustained growth never converges") {
    std::vector<double> s;
    double v = 100.0;
    for (int t = 0; t < 400; ++t) {
        s.push_back(v);
        v *= std::pow(1.10, 1.0 / 100.0);  // +10% per 100 steps throughout
    }
    auto r = convergence_oltp(s);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iteration == s.size() - 1);
}

TEST_CASE("oltp convergence matches the brute-force oracle on a staircase") {
    std::vector<double> s;
    for (int seg = 0; seg < 4; ++seg)
        for (int i = 0; i < 80; ++i) s.push_back(100.0 + 30.0 * seg);
    auto fast = convergence_oltp(s);
    auto slow = oracle_oltp(s, 100, 0.05, 0.95);
    REQUIRE(fast.converged == slow.converged);
    REQUIRE(fast.t_star == slow.t_star);
    REQUIRE(fast.iteration == slow.iteration);
    REQUIRE(fast.optimum == Catch::Approx(slow.optimum));
}

TEST_CASE("convergence detectors equal the literal oracle on random series") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(101, 400));
        std::vector<double> s;
        double level = rng.uniform(50.0, 150.0);
        for (std::size_t t = 0; t < n; ++t) {
            level *= 1.0 + rng.uniform(-0.005, 0.02);
            s.push_back(level * (1.0 + 0.05 * rng.normal()));
        }
        for (auto& v : s) v = std::max(v, 1.0);

        auto fast = convergence_oltp(s);
        auto slow = oracle_oltp(s, 100, 0.05, 0.95);
        REQUIRE(fast.converged == slow.converged);
        REQUIRE(fast.t_star == slow.t_star);
        REQUIRE(fast.iteration == slow.iteration);
        REQUIRE(fast.optimum == slow.optimum);

        auto fast2 = convergence_olap(s);
        auto slow2 = oracle_olap(s, 100, 0.01, 1.01);
        REQUIRE(fast2.converged == slow2.converged);
        REQUIRE(fast2.t_star == slow2.t_star);
        REQUIRE(fast2.iteration == slow2.iteration);
        REQUIRE(fast2.optimum == slow2.optimum);
    }
}

TEST_CASE("olap convergence mirrors the oltp structure") {
    std::vector<double> s(150, 80.0);
    auto r = convergence_olap(s);
    REQUIRE(r.converged);
    REQUIRE(r.t_star == 100);
    REQUIRE(r.iteration == 0);

    std::vector<double> shrink;
    double v = 100.0;
    for (int t = 0; t < 400; ++t) {
        shrink.push_back(v);
        v *= std::pow(0.90, 1.0 / 100.0);  // -10% per 100 steps: keeps improving
    }
    REQUIRE_FALSE(convergence_olap(shrink).converged);

    REQUIRE_THROWS_AS(convergence_olap(std::vector<double>(50, 1.0)), std::invalid_argument);
    REQUIRE_THROWS_AS(convergence_oltp(std::vector<double>(100, 1.0)), std::invalid_argument);
}
