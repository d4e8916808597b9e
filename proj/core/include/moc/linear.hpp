// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moc/tfidf.hpp"

namespace moc::models {

enum class LossKind {
    cross_entropy,
    focal,
};

/// Alpha-weighted focal loss -a_t (1-p)^gamma ln(p) for the probability p
/// assigned to the true class. gamma = 0 with a_t = 1 is exactly
/// cross-entropy. Throws DomainError unless p in (0, 1].
double focal_loss(double p, double a_t, double gamma);

struct TrainParams {
    LossKind loss = LossKind::cross_entropy;
    double focal_gamma = 2.0;
    /// Per-class focal weights a_t. Empty means derive sqrt(1 / p_t) from
    /// the training class frequencies.
    std::vector<double> focal_alpha;
    int epochs = 40;
    std::size_t batch_size = 64;
    double learning_rate = 0.5;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

/// Multinomial softmax classifier over sparse features.
class LinearModel {
public:
    LinearModel() = default;
    LinearModel(std::size_t n_classes, std::size_t dim);

    std::vector<double> logits(const SparseVec& x) const;
    std::vector<double> probabilities(const SparseVec& x) const;
    std::size_t predict(const SparseVec& x) const;

    std::size_t n_classes() const noexcept { return n_classes_; }
    std::size_t dim() const noexcept { return dim_; }

    double weight(std::size_t cls, std::size_t feature) const;
    double& weight(std::size_t cls, std::size_t feature);
    double bias(std::size_t cls) const { return bias_[cls]; }
    double& bias(std::size_t cls) { return bias_[cls]; }

private:
    std::size_t n_classes_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> weights_;  // n_classes x dim, row-major
    std::vector<double> bias_;
};

std::vector<double> softmax(std::span<const double> logits);

/// Loss of one example given its softmax probabilities.
double example_loss(std::span<const double> probs, std::size_t y, const TrainParams& params);

/// Gradient of the per-example loss with respect to the logits.
std::vector<double> logit_gradient(std::span<const double> probs, std::size_t y,
                                   const TrainParams& params);

/// Mini-batch gradient descent, deterministic per seed. Throws
/// TrainingDiverged when the running loss stops being finite.
LinearModel train_linear(std::span<const SparseVec> features, std::span<const std::size_t> targets,
                         std::size_t n_classes, std::size_t dim, const TrainParams& params);

/// Resolves the focal alpha weights actually used for a training set:
/// explicit values if provided, else sqrt(1 / p_t) from class frequencies
/// (classes absent from the data get weight 1).
std::vector<double> resolve_focal_alpha(std::span<const std::size_t> targets,
                                        std::size_t n_classes, const TrainParams& params);

}  // namespace moc::models
