/*
 * rfecv.hpp
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
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dotune/forest.hpp"
#include "dotune/rng.hpp"

namespace dotune {

struct RfecvOptions {
    std::size_t min_knobs = 10;   // pruning floor, keeps BO diversity
    std::size_t min_rows = 15;    // below this, CV folds carry no signal
    std::size_t k_folds = 5;
    std::size_t n_trees = 40;
    TreeParams tree_params{};
};

namespace detail {

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
    return out;
}

}  // namespace detail

//! Mean out-of-fold R^2 of forests trained on the given column subset.
inline double cv_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const std::vector<int>& columns, std::size_t k_folds, Rng& rng,
                       std::size_t n_trees = 40, const TreeParams& params = {}) {
    if (columns.empty()) throw std::invalid_argument("cv_score: empty feature subset");
    if (k_folds < 2) throw std::invalid_argument("cv_score: need k_folds >= 2");
    const std::size_t n = static_cast<std::size_t>(X.rows());
    if (n < k_folds) throw std::invalid_argument("cv_score: more folds than rows");

    Eigen::MatrixXd Xs = detail::select_columns(X, columns);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    double total = 0.0;
    std::size_t start = 0;
    for (std::size_t fold = 0; fold < k_folds; ++fold) {
        const std::size_t fold_size = n / k_folds + (fold < n % k_folds ? 1 : 0);
        const std::size_t stop = start + fold_size;

        Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(n - fold_size), Xs.cols());
        Eigen::VectorXd ytr(static_cast<Eigen::Index>(n - fold_size));
        Eigen::Index r = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= start && i < stop) continue;
            Xtr.row(r) = Xs.row(static_cast<Eigen::Index>(order[i]));
            ytr(r) = y(static_cast<Eigen::Index>(order[i]));
            ++r;
        }
        Forest forest = Forest::fit(Xtr, ytr, n_trees, rng, params);

        double test_mean = 0.0;
        for (std::size_t i = start; i < stop; ++i)
            test_mean += y(static_cast<Eigen::Index>(order[i]));
        test_mean /= static_cast<double>(fold_size);
        double ss_res = 0.0, ss_tot = 0.0;
        for (std::size_t i = start; i < stop; ++i) {
            const double truth = y(static_cast<Eigen::Index>(order[i]));
            const double pred = forest.predict(Xs.row(static_cast<Eigen::Index>(order[i])));
            ss_res += (truth - pred) * (truth - pred);
            ss_tot += (truth - test_mean) * (truth - test_mean);
        }
        total += ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-12 ? 1.0 : 0.0);
        start = stop;
    }
    return total / static_cast<double>(k_folds);
}

//! Recursive feature elimination with cross-validation: drops the least
//! important feature one per round, scores every candidate size, and returns
//! the subset with the best mean CV score (ties resolved toward the larger
//! subset). Never prunes below min_knobs, and leaves the set untouched when
//! fewer than min_rows samples are available.
inline std::vector<std::string> rfecv_select(const std::vector<std::string>& current_set,
                                             const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                             Rng& rng, const RfecvOptions& opts = {}) {
    if (static_cast<std::size_t>(X.cols()) != current_set.size())
        throw std::invalid_argument("rfecv_select: column count must match current_set");
    if (current_set.size() <= opts.min_knobs) return current_set;
    if (static_cast<std::size_t>(X.rows()) < opts.min_rows) return current_set;

    std::vector<int> active(current_set.size());
    std::iota(active.begin(), active.end(), 0);

    std::vector<std::pair<double, std::vector<int>>> trace;  // recorded largest size first
    for (;;) {
        trace.emplace_back(
            cv_score(X, y, active, opts.k_folds, rng, opts.n_trees, opts.tree_params), active);
        if (active.size() <= opts.min_knobs) break;
        Forest forest =
            Forest::fit(detail::select_columns(X, active), y, opts.n_trees, rng, opts.tree_params);
        const auto& imp = forest.importance();
        std::size_t drop = 0;
        for (std::size_t j = 1; j < active.size(); ++j)
            if (imp[j] <= imp[drop]) drop = j;  // ties drop the later, lower-ranked column
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    const std::vector<int>* best = &trace.front().second;
    double best_score = trace.front().first;
    for (const auto& [score, subset] : trace) {
        if (score > best_score) {
            best_score = score;
            best = &subset;
        }
    }
    std::vector<std::string> out;
    out.reserve(best->size());
    for (int c : *best) out.push_back(current_set[static_cast<std::size_t>(c)]);
    return out;
}

}  // namespace dotune
