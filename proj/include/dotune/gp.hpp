/*
 * gp.hpp
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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "dotune/rng.hpp"

namespace dotune {

//! Matern-5/2 kernel with per-dimension length-scales; variances are stored
//! in log space so gradient ascent stays unconstrained in sign.
struct GpHyperparams {
    Eigen::VectorXd log_length_scales;
    double log_signal_variance = 0.0;
    double log_noise_variance = std::log(0.05);

    Eigen::VectorXd length_scales() const { return log_length_scales.array().exp(); }
    double signal_variance() const { return std::exp(log_signal_variance); }
    double noise_variance() const { return std::exp(log_noise_variance); }
};

struct GpFitOptions {
    int restarts = 8;
    int max_iterations = 80;
    std::optional<GpHyperparams> warm_start;  // takes the place of one random restart
    double log_lower = std::log(1e-3);
    double log_upper = std::log(1e3);
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

namespace gp_detail {

constexpr double kSqrt5 = 2.2360679774997896964091736687747;
// Signal variance is floored rather than allowed to vanish so that fits on
// flat score regions succeed instead of erroring.
constexpr double kSignalVarianceFloor = 1e-12;

//! Squared scaled distances between rows of A and rows of B.
inline Eigen::MatrixXd scaled_sq_dist(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                      const Eigen::VectorXd& inv_ls) {
    Eigen::MatrixXd As = A * inv_ls.asDiagonal();
    Eigen::MatrixXd Bs = B * inv_ls.asDiagonal();
    Eigen::VectorXd an = As.rowwise().squaredNorm();
    Eigen::VectorXd bn = Bs.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * As * Bs.transpose());
    d2.colwise() += an;
    d2.rowwise() += bn.transpose();
    return d2.cwiseMax(0.0);
}

inline Eigen::MatrixXd matern52(const Eigen::MatrixXd& d2, double signal_var) {
    Eigen::ArrayXXd s = (d2.array().sqrt()) * kSqrt5;
    return (signal_var * (1.0 + s + s.square() / 3.0) * (-s).exp()).matrix();
}

struct CholWithJitter {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

//! Regularizes the kernel matrix with 1e-8 * trace-mean on the diagonal,
//! doubling up to 1e-2 * trace-mean until the factorization succeeds.
inline CholWithJitter cholesky_with_jitter(const Eigen::MatrixXd& K) {
    const double trace_mean = K.trace() / static_cast<double>(K.rows());
    double jitter = 1e-8 * trace_mean;
    const double max_jitter = 1e-2 * trace_mean;
    Eigen::MatrixXd Kj = K;
    for (;;) {
        Kj = K;
        Kj.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(Kj);
        if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
        if (jitter >= max_jitter)
            throw std::runtime_error("gp: kernel matrix not positive definite even with jitter");
        jitter *= 2.0;
    }
}

}  // namespace gp_detail

//! Gaussian-process regression surrogate. Immutable once built; scores are
//! standardized internally and de-standardized on prediction.
class GpSurrogate {
public:
    //! Marginal likelihood of (X, y) under hp, optionally with the gradient
    //! w.r.t. each log-hyperparameter (length-scales, then signal, then noise).
    static double log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const GpHyperparams& hp,
                                          Eigen::VectorXd* grad = nullptr) {
        const auto n = X.rows();
        const auto d = X.cols();
        const Eigen::VectorXd ls = hp.length_scales();
        const Eigen::VectorXd inv_ls = ls.cwiseInverse();
        const double sf2 = std::max(hp.signal_variance(), gp_detail::kSignalVarianceFloor);
        const double sn2 = hp.noise_variance();

        Eigen::MatrixXd d2 = gp_detail::scaled_sq_dist(X, X, inv_ls);
        Eigen::MatrixXd Ks = gp_detail::matern52(d2, sf2);
        Eigen::MatrixXd K = Ks;
        K.diagonal().array() += sn2;
        auto chol = gp_detail::cholesky_with_jitter(K);

        Eigen::VectorXd alpha = chol.llt.solve(y);
        const double log_det =
            2.0 * chol.llt.matrixLLT().diagonal().array().log().sum();
        const double lml = -0.5 * y.dot(alpha) - 0.5 * log_det -
                           0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
        if (grad) {
            Eigen::MatrixXd Kinv =
                chol.llt.solve(Eigen::MatrixXd::Identity(n, n));
            Eigen::MatrixXd M = alpha * alpha.transpose() - Kinv;
            grad->resize(d + 2);
            // dK/dlog(ls_j) = (5/3) sf2 exp(-s) (1+s) diff_j^2 / ls_j^2
            Eigen::ArrayXXd s = d2.array().sqrt() * gp_detail::kSqrt5;
            Eigen::ArrayXXd g_common = (5.0 / 3.0) * sf2 * (-s).exp() * (1.0 + s);
            for (Eigen::Index j = 0; j < d; ++j) {
                Eigen::ArrayXXd diff =
                    (X.col(j).replicate(1, n) - X.col(j).transpose().replicate(n, 1)).array();
                const double inv2 = inv_ls(j) * inv_ls(j);
                (*grad)(j) = 0.5 * (M.array() * g_common * diff.square() * inv2).sum();
            }
            (*grad)(d) = 0.5 * (M.array() * Ks.array()).sum();
            (*grad)(d + 1) = 0.5 * sn2 * M.trace();
        }
        return lml;
    }

    //! Hyperparameters by multi-start projected gradient ascent on the
    //! marginal likelihood; deterministic for a given rng state.
    static GpSurrogate fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const GpFitOptions& opts, Rng& rng) {
        check_training(X, y);
        GpSurrogate gp;
        gp.standardize(y);
        Eigen::VectorXd ys = (y.array() - gp.y_mean_).matrix() / gp.y_sd_;

        const auto d = X.cols();
        GpHyperparams best;
        double best_lml = -std::numeric_limits<double>::infinity();
        for (int start = 0; start < std::max(1, opts.restarts); ++start) {
            GpHyperparams hp = initial_point(X, opts, rng, start);
            double lml = ascend(X, ys, hp, opts);
            if (lml > best_lml) {
                best_lml = lml;
                best = hp;
            }
        }
        best.log_signal_variance =
            std::max(best.log_signal_variance, std::log(gp_detail::kSignalVarianceFloor));
        gp.finish(X, ys, best);
        return gp;
    }

    //! Builds the posterior for fixed hyperparameters (no optimization).
    static GpSurrogate with_hyperparams(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const GpHyperparams& hp) {
        check_training(X, y);
        if (hp.log_length_scales.size() != X.cols())
            throw std::invalid_argument("gp: hyperparameter dimension mismatch");
        GpSurrogate gp;
        gp.standardize(y);
        Eigen::VectorXd ys = (y.array() - gp.y_mean_).matrix() / gp.y_sd_;
        gp.finish(X, ys, hp);
        return gp;
    }

    GpPrediction predict(const Eigen::VectorXd& x) const {
        if (x.size() != X_.cols()) throw std::invalid_argument("gp: query dimension mismatch");
        Eigen::MatrixXd C = x.transpose();
        Eigen::VectorXd mean(1), var(1);
        predict_batch(C, mean, var);
        return {mean(0), var(0)};
    }

    //! Posterior of the latent function at each row of C.
    void predict_batch(const Eigen::MatrixXd& C, Eigen::VectorXd& mean,
                       Eigen::VectorXd& variance) const {
        if (C.cols() != X_.cols()) throw std::invalid_argument("gp: query dimension mismatch");
        const Eigen::VectorXd inv_ls = hp_.length_scales().cwiseInverse();
        const double sf2 = std::max(hp_.signal_variance(), gp_detail::kSignalVarianceFloor);
        Eigen::MatrixXd Kc = gp_detail::matern52(gp_detail::scaled_sq_dist(X_, C, inv_ls), sf2);
        mean = (Kc.transpose() * alpha_).array() * y_sd_ + y_mean_;
        Eigen::MatrixXd V = chol_.matrixL().solve(Kc);
        variance = (sf2 - V.colwise().squaredNorm().transpose().array())
                       .max(0.0)
                       .matrix() * (y_sd_ * y_sd_);
    }

    const GpHyperparams& hyperparams() const { return hp_; }
    double log_marginal() const { return lml_; }
    Eigen::Index size() const { return X_.rows(); }
    Eigen::Index dim() const { return X_.cols(); }
    double y_mean() const { return y_mean_; }
    double y_sd() const { return y_sd_; }

private:
    static void check_training(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
        if (X.rows() < 2) throw std::invalid_argument("gp: need at least 2 training rows");
        if (X.cols() < 1) throw std::invalid_argument("gp: need at least 1 column");
        if (y.size() != X.rows()) throw std::invalid_argument("gp: y length mismatch");
        if (!X.allFinite() || !y.allFinite())
            throw std::invalid_argument("gp: training data must be finite");
    }

    void standardize(const Eigen::VectorXd& y) {
        y_mean_ = y.mean();
        const double var =
            (y.array() - y_mean_).square().sum() / static_cast<double>(y.size());
        const double sd = std::sqrt(var);
        y_sd_ = sd > 0.0 ? sd : 1.0;
    }

    static GpHyperparams initial_point(const Eigen::MatrixXd& X, const GpFitOptions& opts,
                                       Rng& rng, int start) {
        const auto d = X.cols();
        GpHyperparams hp;
        hp.log_length_scales.resize(d);
        if (start == 0) {
            // moment heuristic: length-scale of twice the column spread
            for (Eigen::Index j = 0; j < d; ++j) {
                const double m = X.col(j).mean();
                const double sd =
                    std::sqrt((X.col(j).array() - m).square().sum() /
                              static_cast<double>(X.rows()));
                hp.log_length_scales(j) = std::log(std::clamp(2.0 * sd + 1e-3, 0.05, 5.0));
            }
            hp.log_signal_variance = 0.0;
            hp.log_noise_variance = std::log(0.05);
        } else if (start == 1 && opts.warm_start &&
                   opts.warm_start->log_length_scales.size() == d) {
            hp = *opts.warm_start;
        } else {
            for (Eigen::Index j = 0; j < d; ++j)
                hp.log_length_scales(j) = rng.uniform(std::log(0.05), std::log(3.0));
            hp.log_signal_variance = rng.uniform(std::log(0.2), std::log(5.0));
            hp.log_noise_variance = rng.uniform(std::log(1e-4), std::log(0.5));
        }
        clamp_to_bounds(hp, opts);
        return hp;
    }

    static void clamp_to_bounds(GpHyperparams& hp, const GpFitOptions& opts) {
        for (Eigen::Index j = 0; j < hp.log_length_scales.size(); ++j)
            hp.log_length_scales(j) =
                std::clamp(hp.log_length_scales(j), opts.log_lower, opts.log_upper);
        hp.log_signal_variance =
            std::clamp(hp.log_signal_variance, opts.log_lower, opts.log_upper);
        hp.log_noise_variance =
            std::clamp(hp.log_noise_variance, opts.log_lower, opts.log_upper);
    }

    static Eigen::VectorXd pack(const GpHyperparams& hp) {
        Eigen::VectorXd t(hp.log_length_scales.size() + 2);
        t.head(hp.log_length_scales.size()) = hp.log_length_scales;
        t(t.size() - 2) = hp.log_signal_variance;
        t(t.size() - 1) = hp.log_noise_variance;
        return t;
    }

    static GpHyperparams unpack(const Eigen::VectorXd& t) {
        GpHyperparams hp;
        hp.log_length_scales = t.head(t.size() - 2);
        hp.log_signal_variance = t(t.size() - 2);
        hp.log_noise_variance = t(t.size() - 1);
        return hp;
    }

    //! Projected gradient ascent with an adaptive step; returns the final
    //! marginal likelihood and leaves hp at the accepted point.
    static double ascend(const Eigen::MatrixXd& X, const Eigen::VectorXd& ys,
                         GpHyperparams& hp, const GpFitOptions& opts) {
        Eigen::VectorXd theta = pack(hp);
        Eigen::VectorXd grad;
        double lml = log_marginal_likelihood(X, ys, unpack(theta), &grad);
        double step = 0.1;
        for (int it = 0; it < opts.max_iterations; ++it) {
            bool accepted = false;
            for (int half = 0; half < 25; ++half) {
                Eigen::VectorXd cand =
                    (theta + step * grad).cwiseMax(opts.log_lower).cwiseMin(opts.log_upper);
                Eigen::VectorXd cand_grad;
                double cand_lml;
                try {
                    cand_lml = log_marginal_likelihood(X, ys, unpack(cand), &cand_grad);
                } catch (const std::runtime_error&) {
                    step *= 0.5;
                    continue;
                }
                if (cand_lml > lml) {
                    const double gain = cand_lml - lml;
                    theta = cand;
                    grad = cand_grad;
                    lml = cand_lml;
                    step *= 1.3;
                    accepted = true;
                    if (gain < 1e-8 * (1.0 + std::fabs(lml))) it = opts.max_iterations;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        hp = unpack(theta);
        return lml;
    }

    void finish(const Eigen::MatrixXd& X, const Eigen::VectorXd& ys, const GpHyperparams& hp) {
        X_ = X;
        hp_ = hp;
        const Eigen::VectorXd inv_ls = hp.length_scales().cwiseInverse();
        const double sf2 = std::max(hp.signal_variance(), gp_detail::kSignalVarianceFloor);
        Eigen::MatrixXd K = gp_detail::matern52(gp_detail::scaled_sq_dist(X, X, inv_ls), sf2);
        K.diagonal().array() += hp.noise_variance();
        auto chol = gp_detail::cholesky_with_jitter(K);
        chol_ = std::move(chol.llt);
        alpha_ = chol_.solve(ys);
        const double log_det = 2.0 * chol_.matrixLLT().diagonal().array().log().sum();
        lml_ = -0.5 * ys.dot(alpha_) - 0.5 * log_det -
               0.5 * static_cast<double>(X.rows()) * std::log(2.0 * M_PI);
    }

    Eigen::MatrixXd X_;
    Eigen::VectorXd alpha_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
    GpHyperparams hp_;
    double y_mean_ = 0.0;
    double y_sd_ = 1.0;
    double lml_ = 0.0;
};

}  // namespace dotune
