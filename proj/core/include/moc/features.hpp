// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moc/tfidf.hpp"
#include "moc/types.hpp"

namespace moc::models {

/// Per-post feature vectors for one timeline, index-aligned with its
/// posts.
struct TimelineFeatures {
    std::string timeline_id;
    std::vector<SparseVec> per_post;
    std::size_t dim = 0;
};

enum class FsdMode {
    centroid,
    nearest,
};

/// First-story-detection novelty features: for each post, the cosine
/// similarity against the centroid (or nearest neighbour) of the previous
/// n posts for every n in n_list, plus one feature for the full preceding
/// history. The first post has no history and gets the 0 sentinel.
TimelineFeatures fsd_features(const Timeline& timeline, std::span<const SparseVec> reps,
                              std::span<const int> n_list, FsdMode mode);

struct ProcrustesResult {
    Eigen::MatrixXd omega;   // orthogonal, prev * omega ~ cur
    Eigen::MatrixXd errors;  // prev * omega - cur, one row per pair
    bool degenerate = false;
};

/// Orthogonal Procrustes alignment: omega minimizes |A omega - B| over
/// orthogonal matrices via the SVD of A^T B. Fully degenerate input
/// (A^T B == 0) falls back to the identity with the degenerate flag set.
ProcrustesResult scd_procrustes(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& cur);

/// Semantic-change features from aligning consecutive post vectors: the
/// element-wise residual of post i-1 mapped onto post i under the
/// timeline's Procrustes transform. Post 0 gets a zero vector.
TimelineFeatures scd_op_features(const Timeline& timeline, std::span<const SparseVec> reps);

/// Ridge forecaster of the next post vector from the k previous ones,
/// solved in closed form (X^T X + lambda I)^-1 X^T Y.
class RidgeForecaster {
public:
    RidgeForecaster(int k, double lambda) : k_(k), lambda_(lambda) {}

    /// Fits on training sequences; sequences shorter than k + 1 vectors
    /// contribute nothing. Throws SingularSystem when the normal
    /// equations cannot be solved (lambda = 0 on degenerate data).
    void fit(std::span<const std::vector<SparseVec>> train_sequences, std::size_t dim);

    /// Residual features actual - predicted per post; the first k posts
    /// get zero vectors. Throws InsufficientHistory when the timeline has
    /// at most k posts, and Error if fit was never called.
    TimelineFeatures transform(const Timeline& timeline, std::span<const SparseVec> reps) const;

    int k() const noexcept { return k_; }
    const Eigen::MatrixXd& coefficients() const { return coef_; }
    bool fitted() const noexcept { return fitted_; }

private:
    int k_;
    double lambda_;
    std::size_t dim_ = 0;
    Eigen::MatrixXd coef_;  // (k * dim) x dim
    bool fitted_ = false;
};

/// Concatenates each post's features with those of the radius preceding
/// and following posts, zero-padded at the boundaries. radius = 0 returns
/// the input unchanged.
std::vector<SparseVec> context_windows(std::span<const SparseVec> per_post, std::size_t dim,
                                       std::size_t radius);

/// Seeded Gaussian random projection of sparse vectors onto out_dim dense
/// coordinates (entries N(0, 1/out_dim)), preserving similarities
/// approximately. Makes high-dimensional tf-idf representations tractable
/// for the alignment- and forecast-based change models, whose cost grows
/// with the representation dimension. Deterministic per seed.
std::vector<SparseVec> project_gaussian(std::span<const SparseVec> reps, std::size_t in_dim,
                                        std::size_t out_dim, std::uint64_t seed);

Eigen::MatrixXd to_dense(std::span<const SparseVec> rows, std::size_t dim);

}  // namespace moc::models
