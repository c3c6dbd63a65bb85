/*
 * test_special_functions.cpp
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

#include "dotune/special_functions.hpp"

using namespace dotune;

// Reference values frozen from an independent statistical library.
TEST_CASE("regularized incomplete beta matches reference points to 1e-10") {
    REQUIRE(incomplete_beta(0.5, 0.5, 0.3) == Catch::Approx(0.369010119565545).margin(1e-10));
    REQUIRE(incomplete_beta(2.0, 3.0, 0.5) == Catch::Approx(0.6875).margin(1e-10));
    REQUIRE(incomplete_beta(5.5, 1.25, 0.9) == Catch::Approx(0.665625889264117).margin(1e-10));
    REQUIRE(incomplete_beta(10.0, 10.0, 0.25) == Catch::Approx(0.008903279303922).margin(1e-10));
    REQUIRE(incomplete_beta(0.5, 5.0, 0.01) == Catch::Approx(0.242841890898437).margin(1e-10));
    REQUIRE(incomplete_beta(2.0, 2.0, 0.0) == 0.0);
    REQUIRE(incomplete_beta(2.0, 2.0, 1.0) == 1.0);
}

TEST_CASE("regularized incomplete gamma matches reference points to 1e-10") {
    REQUIRE(incomplete_gamma(0.5, 0.2) == Catch::Approx(0.472910743134462).margin(1e-10));
    REQUIRE(incomplete_gamma(1.5, 2.0) == Catch::Approx(0.738535870050889).margin(1e-10));
    REQUIRE(incomplete_gamma(3.0, 0.5) == Catch::Approx(0.014387677966971).margin(1e-10));
    REQUIRE(incomplete_gamma(10.0, 10.0) == Catch::Approx(0.542070285528148).margin(1e-10));
    REQUIRE(incomplete_gamma(2.5, 20.0) == Catch::Approx(0.999999850663210).margin(1e-10));
    REQUIRE(incomplete_gamma(1.0, 0.0) == 0.0);
}

TEST_CASE("student t and chi-square CDFs match reference points") {
    REQUIRE(student_t_cdf(1.8, 6.5) == Catch::Approx(0.940923634724058).margin(1e-10));
    REQUIRE(student_t_cdf(0.0, 3.0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(student_t_cdf(-1.8, 6.5) ==
            Catch::Approx(1.0 - 0.940923634724058).margin(1e-10));
    REQUIRE(chi_square_cdf(7.32, 5.0) == Catch::Approx(0.802091615403551).margin(1e-10));
    REQUIRE(chi_square_cdf(0.0, 5.0) == 0.0);
}

TEST_CASE("normal pdf and cdf basics") {
    REQUIRE(normal_pdf(0.0) == Catch::Approx(0.3989422804014327).margin(1e-15));
    REQUIRE(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(normal_cdf(1.959963984540054) == Catch::Approx(0.975).margin(1e-9));
}

TEST_CASE("special functions reject bad parameters") {
    REQUIRE_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(incomplete_gamma(-1.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(student_t_cdf(1.0, 0.0), std::invalid_argument);
}
