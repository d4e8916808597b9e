// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/features.hpp"

#include <algorithm>
#include <map>

#include <Eigen/SVD>

#include "moc/errors.hpp"
#include "moc/rng.hpp"

namespace moc::models {

namespace {

void check_reps(const Timeline& timeline, std::span<const SparseVec> reps) {
    if (reps.size() != timeline.posts.size()) {
        throw AlignmentError("timeline \"" + timeline.timeline_id + "\" has " +
                             std::to_string(timeline.posts.size()) + " posts but " +
                             std::to_string(reps.size()) + " representation vectors");
    }
}

SparseVec centroid_of(std::span<const SparseVec> reps, std::size_t begin, std::size_t end) {
    std::map<std::uint32_t, double> sum;
    for (std::size_t i = begin; i < end; ++i) {
        for (const auto& [idx, v] : reps[i].entries) sum[idx] += v;
    }
    SparseVec out;
    out.entries.reserve(sum.size());
    const double n = static_cast<double>(end - begin);
    for (const auto& [idx, v] : sum) out.entries.emplace_back(idx, v / n);
    return out;
}

}  // namespace

TimelineFeatures fsd_features(const Timeline& timeline, std::span<const SparseVec> reps,
                              std::span<const int> n_list, FsdMode mode) {
    check_reps(timeline, reps);
    for (int n : n_list) {
        if (n < 1) throw DomainError("FSD history sizes must be positive");
    }

    TimelineFeatures out;
    out.timeline_id = timeline.timeline_id;
    out.dim = n_list.size() + 1;  // each n plus the full preceding history
    out.per_post.reserve(reps.size());

    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::vector<double> values(out.dim, 0.0);
        if (i > 0) {
            for (std::size_t f = 0; f < out.dim; ++f) {
                const std::size_t span =
                    f < n_list.size() ? std::min<std::size_t>(static_cast<std::size_t>(n_list[f]), i)
                                      : i;
                const std::size_t begin = i - span;
                if (mode == FsdMode::centroid) {
                    values[f] = cosine(reps[i], centroid_of(reps, begin, i));
                } else {
                    double best = -1.0;
                    for (std::size_t j = begin; j < i; ++j) {
                        best = std::max(best, cosine(reps[i], reps[j]));
                    }
                    values[f] = best;
                }
            }
        }
        out.per_post.push_back(from_dense(values));
    }
    return out;
}

ProcrustesResult scd_procrustes(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& cur) {
    if (prev.rows() != cur.rows() || prev.cols() != cur.cols()) {
        throw AlignmentError("Procrustes inputs must have matching shapes");
    }
    if (prev.rows() < 1 || prev.cols() < 1) {
        throw DomainError("Procrustes inputs must be non-empty");
    }

    ProcrustesResult out;
    const Eigen::MatrixXd m = prev.transpose() * cur;
    if (m.norm() == 0.0) {
        out.omega = Eigen::MatrixXd::Identity(prev.cols(), prev.cols());
        out.degenerate = true;
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.omega = svd.matrixU() * svd.matrixV().transpose();
    }
    out.errors = prev * out.omega - cur;
    return out;
}

TimelineFeatures scd_op_features(const Timeline& timeline, std::span<const SparseVec> reps) {
    check_reps(timeline, reps);
    std::size_t dim = 0;
    for (const SparseVec& r : reps) {
        if (!r.entries.empty()) dim = std::max<std::size_t>(dim, r.entries.back().first + 1);
    }
    if (dim == 0) dim = 1;

    TimelineFeatures out;
    out.timeline_id = timeline.timeline_id;
    out.dim = dim;
    out.per_post.assign(reps.size(), SparseVec{});
    if (reps.size() < 2) return out;

    Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(reps.size() - 1),
                                                 static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd cur = prev;
    for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
        for (const auto& [idx, v] : reps[i].entries) prev(static_cast<Eigen::Index>(i), idx) = v;
        for (const auto& [idx, v] : reps[i + 1].entries) {
            cur(static_cast<Eigen::Index>(i), idx) = v;
        }
    }

    const ProcrustesResult aligned = scd_procrustes(prev, cur);
    for (std::size_t i = 1; i < reps.size(); ++i) {
        const Eigen::VectorXd row = aligned.errors.row(static_cast<Eigen::Index>(i - 1));
        out.per_post[i] = from_dense(std::span<const double>(row.data(),
                                                             static_cast<std::size_t>(row.size())));
    }
    return out;
}

void RidgeForecaster::fit(std::span<const std::vector<SparseVec>> train_sequences,
                          std::size_t dim) {
    if (k_ < 1) throw DomainError("forecast history k must be positive");
    if (dim < 1) throw DomainError("representation dimension must be positive");
    dim_ = dim;
    const auto in_dim = static_cast<Eigen::Index>(static_cast<std::size_t>(k_) * dim);
    const auto out_dim = static_cast<Eigen::Index>(dim);

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(in_dim, in_dim);
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(in_dim, out_dim);
    Eigen::VectorXd x(in_dim);
    Eigen::VectorXd y(out_dim);
    for (const std::vector<SparseVec>& seq : train_sequences) {
        if (seq.size() <= static_cast<std::size_t>(k_)) continue;
        for (std::size_t t = static_cast<std::size_t>(k_); t < seq.size(); ++t) {
            x.setZero();
            for (std::size_t j = 0; j < static_cast<std::size_t>(k_); ++j) {
                const SparseVec& v = seq[t - static_cast<std::size_t>(k_) + j];
                for (const auto& [idx, val] : v.entries) {
                    if (idx >= dim) throw DomainError("training vector index exceeds dimension");
                    x(static_cast<Eigen::Index>(j * dim + idx)) = val;
                }
            }
            y.setZero();
            for (const auto& [idx, val] : seq[t].entries) {
                if (idx >= dim) throw DomainError("training vector index exceeds dimension");
                y(static_cast<Eigen::Index>(idx)) = val;
            }
            gram.noalias() += x * x.transpose();
            cross.noalias() += x * y.transpose();
        }
    }

    gram.diagonal().array() += lambda_;
    if (lambda_ == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible()) {
            throw SingularSystem("normal equations are singular; use a positive ridge lambda");
        }
        coef_ = lu.solve(cross);
    } else {
        coef_ = gram.ldlt().solve(cross);
    }
    if (!coef_.allFinite()) throw SingularSystem("ridge solution is not finite");
    fitted_ = true;
}

TimelineFeatures RidgeForecaster::transform(const Timeline& timeline,
                                            std::span<const SparseVec> reps) const {
    if (!fitted_) throw Error("forecaster used before fitting");
    check_reps(timeline, reps);
    if (reps.size() <= static_cast<std::size_t>(k_)) {
        throw InsufficientHistory("timeline \"" + timeline.timeline_id + "\" has " +
                                  std::to_string(reps.size()) + " posts; forecaster needs more than " +
                                  std::to_string(k_));
    }

    TimelineFeatures out;
    out.timeline_id = timeline.timeline_id;
    out.dim = dim_;
    out.per_post.assign(reps.size(), SparseVec{});

    Eigen::VectorXd x(static_cast<Eigen::Index>(static_cast<std::size_t>(k_) * dim_));
    for (std::size_t t = static_cast<std::size_t>(k_); t < reps.size(); ++t) {
        x.setZero();
        for (std::size_t j = 0; j < static_cast<std::size_t>(k_); ++j) {
            const SparseVec& v = reps[t - static_cast<std::size_t>(k_) + j];
            for (const auto& [idx, val] : v.entries) {
                if (idx < dim_) x(static_cast<Eigen::Index>(j * dim_ + idx)) = val;
            }
        }
        Eigen::VectorXd pred = coef_.transpose() * x;
        for (const auto& [idx, val] : reps[t].entries) {
            if (idx < dim_) pred(static_cast<Eigen::Index>(idx)) -= val;
        }
        pred = -pred;  // actual - predicted
        out.per_post[t] =
            from_dense(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())));
    }
    return out;
}

std::vector<SparseVec> context_windows(std::span<const SparseVec> per_post, std::size_t dim,
                                       std::size_t radius) {
    std::vector<SparseVec> out;
    out.reserve(per_post.size());
    if (radius == 0) {
        out.assign(per_post.begin(), per_post.end());
        return out;
    }
    const std::size_t n = per_post.size();
    for (std::size_t i = 0; i < n; ++i) {
        SparseVec v;
        for (std::size_t block = 0; block < 2 * radius + 1; ++block) {
            const std::int64_t j =
                static_cast<std::int64_t>(i) + static_cast<std::int64_t>(block) -
                static_cast<std::int64_t>(radius);
            if (j < 0 || j >= static_cast<std::int64_t>(n)) continue;
            const std::uint32_t offset = static_cast<std::uint32_t>(block * dim);
            for (const auto& [idx, val] : per_post[static_cast<std::size_t>(j)].entries) {
                v.entries.emplace_back(offset + idx, val);
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SparseVec> project_gaussian(std::span<const SparseVec> reps, std::size_t in_dim,
                                        std::size_t out_dim, std::uint64_t seed) {
    if (out_dim == 0) throw DomainError("projection dimension must be positive");
    Rng rng(seed);
    // Row-major in_dim x out_dim projection matrix, entries N(0, 1/out_dim).
    std::vector<double> matrix(in_dim * out_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(out_dim));
    for (double& v : matrix) v = rng.normal() * scale;

    std::vector<SparseVec> out;
    out.reserve(reps.size());
    std::vector<double> dense(out_dim);
    for (const SparseVec& r : reps) {
        std::fill(dense.begin(), dense.end(), 0.0);
        for (const auto& [idx, val] : r.entries) {
            if (idx >= in_dim) throw DomainError("representation index exceeds declared dimension");
            const double* row = matrix.data() + static_cast<std::size_t>(idx) * out_dim;
            for (std::size_t j = 0; j < out_dim; ++j) dense[j] += val * row[j];
        }
        out.push_back(from_dense(dense));
    }
    return out;
}

Eigen::MatrixXd to_dense(std::span<const SparseVec> rows, std::size_t dim) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [idx, v] : rows[i].entries) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx)) = v;
        }
    }
    return m;
}

}  // namespace moc::models
