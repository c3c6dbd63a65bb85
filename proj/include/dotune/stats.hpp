/*
 * stats.hpp
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
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dotune/special_functions.hpp"

namespace dotune {

inline double sample_mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
};

//! Welch's two-tailed t-test with Welch-Satterthwaite degrees of freedom.
//! Two equal constant samples give p=1; constant but different give p=0
//! (limit behavior, avoids dividing by a zero standard error).
inline WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test: need at least 2 samples per group");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = sample_mean(a), mb = sample_mean(b);
    const double va = sample_variance(a), vb = sample_variance(b);
    if (va == 0.0 && vb == 0.0) {
        if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
        const double inf = std::numeric_limits<double>::infinity();
        return {ma > mb ? inf : -inf, na + nb - 2.0, 0.0};
    }
    const double sa = va / na, sb = vb / nb;
    const double se = std::sqrt(sa + sb);
    const double t = (ma - mb) / se;
    const double dof = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    const double p = 2.0 * student_t_cdf(-std::fabs(t), dof);
    return {t, dof, p};
}

struct FriedmanResult {
    double chi2 = 0.0;
    double p = 1.0;
    std::vector<double> mean_ranks;
};

namespace detail {

//! Ranks one block, average ranks on ties.
inline std::vector<double> rank_row(std::span<const double> row) {
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return row[i] < row[j]; });
    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

//! Friedman test over a blocks x treatments score matrix, with the standard
//! tie correction; also reports the mean rank per treatment.
inline FriedmanResult friedman_test(const std::vector<std::vector<double>>& scores) {
    const std::size_t n = scores.size();
    if (n < 2) throw std::invalid_argument("friedman_test: need >= 2 blocks");
    const std::size_t k = scores[0].size();
    if (k < 2) throw std::invalid_argument("friedman_test: need >= 2 treatments");
    for (const auto& row : scores)
        if (row.size() != k) throw std::invalid_argument("friedman_test: ragged matrix");

    std::vector<double> rank_sums(k, 0.0);
    double tie_term = 0.0;  // sum over blocks of sum(t^3 - t)
    for (const auto& row : scores) {
        auto ranks = detail::rank_row(row);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
        std::vector<double> sorted(row.begin(), row.end());
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }

    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    double ssbn = 0.0;
    for (double r : rank_sums) ssbn += r * r;
    const double correction = 1.0 - tie_term / (dk * (dk * dk - 1.0) * dn);
    double chi2;
    if (correction <= 0.0) {
        chi2 = 0.0;  // every block fully tied
    } else {
        chi2 = (12.0 / (dn * dk * (dk + 1.0)) * ssbn - 3.0 * dn * (dk + 1.0)) / correction;
        if (chi2 < 0.0) chi2 = 0.0;
    }
    FriedmanResult out;
    out.chi2 = chi2;
    out.p = 1.0 - chi_square_cdf(chi2, dk - 1.0);
    out.mean_ranks.resize(k);
    for (std::size_t j = 0; j < k; ++j) out.mean_ranks[j] = rank_sums[j] / dn;
    return out;
}

//! Jaccard index |A∩B| / |A∪B|; J(∅,∅) = 1 by convention.
inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

struct ConvergenceResult {
    std::size_t iteration = 0;  // first index inside the near-optimal band
    bool converged = false;
    std::size_t t_star = 0;     // first index where the improvement stalls
    double optimum = 0.0;       // P* (throughput) or E* (batch time)
};

namespace detail {

inline double window_max(std::span<const double> s, std::size_t lo, std::size_t hi) {
    double m = s[lo];
    for (std::size_t i = lo + 1; i <= hi; ++i) m = std::max(m, s[i]);
    return m;
}

inline double window_min(std::span<const double> s, std::size_t lo, std::size_t hi) {
    double m = s[lo];
    for (std::size_t i = lo + 1; i <= hi; ++i) m = std::min(m, s[i]);
    return m;
}

}  // namespace detail

//! Convergence point of a throughput run: t* is the first index (0-based,
//! after `window` steps) where the best of the last `window` steps improves
//! by less than `improve` relative to the best of the `window` before it
//! (consecutive disjoint windows); the answer is the first index reaching
//! `band` of P* = max before t*. Not finding t* flags the run unconverged.
inline ConvergenceResult convergence_oltp(std::span<const double> max_tps,
                                          std::size_t window = 100, double improve = 0.05,
                                          double band = 0.95) {
    const std::size_t n = max_tps.size();
    if (n <= window) throw std::invalid_argument("convergence_oltp: series too short");
    ConvergenceResult out;
    for (std::size_t t = window; t < n; ++t) {
        const std::size_t prev_lo = t >= 2 * window ? t - 2 * window + 1 : 0;
        const double prev = detail::window_max(max_tps, prev_lo, t - window);
        const double recent = detail::window_max(max_tps, t - window + 1, t);
        if ((recent - prev) / prev < improve) {
            out.t_star = t;
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        out.iteration = n - 1;
        out.t_star = n - 1;
        out.optimum = detail::window_max(max_tps, 0, n - 1);
        return out;
    }
    out.optimum = detail::window_max(max_tps, 0, out.t_star - 1);
    for (std::size_t t = 0; t < n; ++t) {
        if (max_tps[t] >= band * out.optimum) {
            out.iteration = t;
            break;
        }
    }
    return out;
}

//! Batch-time analogue: 1% stall threshold and a <= 1.01 * E* band.
inline ConvergenceResult convergence_olap(std::span<const double> best_time,
                                          std::size_t window = 100, double improve = 0.01,
                                          double band = 1.01) {
    const std::size_t n = best_time.size();
    if (n <= window) throw std::invalid_argument("convergence_olap: series too short");
    ConvergenceResult out;
    for (std::size_t t = window; t < n; ++t) {
        const std::size_t prev_lo = t >= 2 * window ? t - 2 * window + 1 : 0;
        const double prev = detail::window_min(best_time, prev_lo, t - window);
        const double recent = detail::window_min(best_time, t - window + 1, t);
        if ((prev - recent) / prev < improve) {
            out.t_star = t;
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        out.iteration = n - 1;
        out.t_star = n - 1;
        out.optimum = detail::window_min(best_time, 0, n - 1);
        return out;
    }
    out.optimum = detail::window_min(best_time, 0, out.t_star - 1);
    for (std::size_t t = 0; t < n; ++t) {
        if (best_time[t] <= band * out.optimum) {
            out.iteration = t;
            break;
        }
    }
    return out;
}

}  // namespace dotune
