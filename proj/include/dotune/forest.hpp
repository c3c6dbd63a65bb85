/*
 * forest.hpp
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
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dotune/rng.hpp"

namespace dotune {

struct TreeParams {
    int max_depth = 12;
    int min_leaf = 3;
    int max_features = 0;  // 0 -> round(sqrt(d)) features per split
};

//! CART regression tree: greedy variance-reduction splits, leaves predict
//! the mean of their training targets.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
        double impurity_decrease = 0.0;  // variance reduction, weighted by sample fraction
        int n_samples = 0;
    };

    static RegressionTree fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Rng& rng,
                              const TreeParams& params = {},
                              const std::vector<int>* sample_indices = nullptr) {
        if (X.rows() < 2) throw std::invalid_argument("tree_fit: need at least 2 rows");
        if (y.size() != X.rows()) throw std::invalid_argument("tree_fit: y length mismatch");
        RegressionTree tree;
        std::vector<int> idx;
        if (sample_indices) {
            idx = *sample_indices;
        } else {
            idx.resize(static_cast<std::size_t>(X.rows()));
            std::iota(idx.begin(), idx.end(), 0);
        }
        Builder b{X, y, rng, params, static_cast<double>(idx.size()), tree.nodes_};
        b.build(idx, 0, static_cast<int>(idx.size()), 0);
        return tree;
    }

    double predict(const Eigen::RowVectorXd& x) const {
        int node = 0;
        for (;;) {
            const Node& n = nodes_[static_cast<std::size_t>(node)];
            if (n.feature < 0) return n.value;
            node = x(n.feature) <= n.threshold ? n.left : n.right;
        }
    }

    //! Adds this tree's total impurity decrease per feature into acc.
    void accumulate_importance(std::vector<double>& acc) const {
        for (const auto& n : nodes_)
            if (n.feature >= 0) acc[static_cast<std::size_t>(n.feature)] += n.impurity_decrease;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    struct Builder {
        const Eigen::MatrixXd& X;
        const Eigen::VectorXd& y;
        Rng& rng;
        const TreeParams& params;
        double n_total;
        std::vector<Node>& nodes;

        int build(std::vector<int>& idx, int lo, int hi, int depth) {
            const int n = hi - lo;
            double sum = 0.0, sum_sq = 0.0;
            for (int i = lo; i < hi; ++i) {
                sum += y(idx[static_cast<std::size_t>(i)]);
                sum_sq += y(idx[static_cast<std::size_t>(i)]) * y(idx[static_cast<std::size_t>(i)]);
            }
            const double mean = sum / n;
            const double sse = std::max(0.0, sum_sq - sum * sum / n);

            const int node_id = static_cast<int>(nodes.size());
            nodes.push_back({});
            nodes[static_cast<std::size_t>(node_id)].n_samples = n;
            nodes[static_cast<std::size_t>(node_id)].value = mean;

            if (depth >= params.max_depth || n < 2 * params.min_leaf || sse <= 1e-12) {
                return node_id;
            }

            int best_feature = -1, best_pos = -1;
            double best_gain = 0.0, best_threshold = 0.0;
            const int d = static_cast<int>(X.cols());
            int n_feat = params.max_features > 0
                             ? std::min(params.max_features, d)
                             : std::max(1, static_cast<int>(std::lround(std::sqrt(d))));
            auto features = rng.sample_without_replacement(static_cast<std::size_t>(d),
                                                           static_cast<std::size_t>(n_feat));

            std::vector<std::pair<double, int>> vals(static_cast<std::size_t>(n));
            std::vector<int> best_sorted;
            for (std::size_t f : features) {
                for (int i = lo; i < hi; ++i)
                    vals[static_cast<std::size_t>(i - lo)] = {
                        X(idx[static_cast<std::size_t>(i)], static_cast<Eigen::Index>(f)),
                        idx[static_cast<std::size_t>(i)]};
                std::sort(vals.begin(), vals.end());
                double left_sum = 0.0, left_sq = 0.0;
                for (int i = 0; i + 1 < n; ++i) {
                    const double yi = y(vals[static_cast<std::size_t>(i)].second);
                    left_sum += yi;
                    left_sq += yi * yi;
                    const int nl = i + 1, nr = n - nl;
                    if (nl < params.min_leaf || nr < params.min_leaf) continue;
                    if (vals[static_cast<std::size_t>(i)].first ==
                        vals[static_cast<std::size_t>(i + 1)].first)
                        continue;
                    const double right_sum = sum - left_sum;
                    const double right_sq = sum_sq - left_sq;
                    const double sse_l = left_sq - left_sum * left_sum / nl;
                    const double sse_r = right_sq - right_sum * right_sum / nr;
                    const double gain = sse - sse_l - sse_r;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(f);
                        best_threshold = 0.5 * (vals[static_cast<std::size_t>(i)].first +
                                                vals[static_cast<std::size_t>(i + 1)].first);
                        best_pos = nl;
                        best_sorted.resize(static_cast<std::size_t>(n));
                        for (int q = 0; q < n; ++q)
                            best_sorted[static_cast<std::size_t>(q)] =
                                vals[static_cast<std::size_t>(q)].second;
                    }
                }
            }

            if (best_feature < 0 || best_gain <= 1e-12) {
                return node_id;  // no usable split; stays a leaf
            }

            std::copy(best_sorted.begin(), best_sorted.end(), idx.begin() + lo);
            nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
            nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
            nodes[static_cast<std::size_t>(node_id)].impurity_decrease = best_gain / n_total;
            const int left = build(idx, lo, lo + best_pos, depth + 1);
            const int right = build(idx, lo + best_pos, hi, depth + 1);
            nodes[static_cast<std::size_t>(node_id)].left = left;
            nodes[static_cast<std::size_t>(node_id)].right = right;
            return node_id;
        }
    };

    std::vector<Node> nodes_;
};

//! Bagged CART forest; importance is the per-feature impurity decrease
//! averaged over trees and normalized to sum 1 when any split exists.
class Forest {
public:
    static Forest fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t n_trees,
                      Rng& rng, const TreeParams& params = {}) {
        if (X.rows() < 5) throw std::invalid_argument("forest_fit: need at least 5 rows");
        if (n_trees < 1) throw std::invalid_argument("forest_fit: need at least 1 tree");
        Forest forest;
        forest.trees_.reserve(n_trees);
        const int n = static_cast<int>(X.rows());
        std::vector<double> acc(static_cast<std::size_t>(X.cols()), 0.0);
        for (std::size_t t = 0; t < n_trees; ++t) {
            Rng tree_rng(rng.next_u64());
            std::vector<int> bootstrap(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                bootstrap[static_cast<std::size_t>(i)] =
                    static_cast<int>(tree_rng.uniform_int(0, n - 1));
            forest.trees_.push_back(RegressionTree::fit(X, y, tree_rng, params, &bootstrap));
            forest.trees_.back().accumulate_importance(acc);
        }
        double total = 0.0;
        for (double& a : acc) {
            a /= static_cast<double>(n_trees);
            total += a;
        }
        if (total > 0.0)
            for (double& a : acc) a /= total;
        forest.importance_ = std::move(acc);
        return forest;
    }

    double predict(const Eigen::RowVectorXd& x) const {
        double sum = 0.0;
        for (const auto& t : trees_) sum += t.predict(x);
        return sum / static_cast<double>(trees_.size());
    }

    const std::vector<double>& importance() const { return importance_; }
    const std::vector<RegressionTree>& trees() const { return trees_; }

private:
    std::vector<RegressionTree> trees_;
    std::vector<double> importance_;
};

}  // namespace dotune
