// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moc/features.hpp"
#include "moc/io.hpp"
#include "moc/linear.hpp"
#include "moc/types.hpp"

namespace moc::models {

enum class ModelKind {
    majority,
    random,
    linear_ce,
    linear_focal,
    fsd,
    scd_op,
    scd_fp,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// Predicts None for every post.
std::vector<LabelSequence> majority_baseline(std::span<const Timeline> timelines);

/// Per-post i.i.d. draw from the class priors (indexed by Label value),
/// deterministic per seed and independent of timeline order. Throws
/// InvalidDistribution unless the priors are a probability vector.
std::vector<LabelSequence> random_baseline(std::span<const Timeline> timelines,
                                           const std::array<double, kNumLabels>& priors,
                                           std::uint64_t seed);

/// Empirical label distribution of a gold standard, indexed by Label.
std::array<double, kNumLabels> label_distribution(std::span<const LabelSequence> sequences);

/// Trains the context-window linear classifier on per-timeline features
/// under a fold split: the model (and nothing else) sees only training
/// folds, and every timeline is predicted exactly once by the model that
/// never saw it. radius = 0 recovers the pure post-level classifier.
std::vector<LabelSequence> sequence_classifier(std::span<const TimelineFeatures> features,
                                               std::span<const LabelSequence> gold,
                                               const FoldAssignment& folds, std::size_t radius,
                                               const TrainParams& params);

struct BaselineConfig {
    ModelKind kind = ModelKind::majority;
    int folds = 5;
    std::uint64_t seed = 0;
    std::size_t context_radius = 0;
    TrainParams train;
    // fsd
    FsdMode fsd_mode = FsdMode::centroid;
    std::vector<int> fsd_n_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    // scd-fp
    int forecast_k = 3;
    double ridge_lambda = 1.0;
    /// Representations wider than this are Gaussian-projected down before
    /// the alignment/forecast models, whose cost grows with the dimension.
    std::size_t scd_projection_dim = 64;
    /// Priors for the random baseline; empty means use the gold label
    /// distribution.
    std::optional<std::array<double, kNumLabels>> priors;
};

/// Runs one baseline end to end and returns a prediction per timeline, in
/// input order. Supervised models cross-validate: tf-idf vocabulary,
/// forecaster, and classifier are fitted per training fold. When
/// external_vectors is non-null those vectors replace tf-idf post
/// representations (they must cover every post).
std::vector<LabelSequence> run_baseline(std::span<const Timeline> timelines,
                                        std::span<const LabelSequence> gold,
                                        const BaselineConfig& config,
                                        const std::vector<VectorRecord>* external_vectors = nullptr);

struct BigramWeight {
    std::string bigram;
    double weight = 0.0;
};

/// Binary logistic regression on bigram indicators separating identified
/// (tp) from missed (fn) texts; bigrams sorted by descending signed
/// coefficient. Throws InsufficientData when either side is empty.
std::vector<BigramWeight> error_correlation_bigrams(std::span<const std::string> tp_texts,
                                                    std::span<const std::string> fn_texts,
                                                    const TrainParams& params = {});

}  // namespace moc::models
