// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "moc/errors.hpp"
#include "moc/rng.hpp"

namespace moc::models {

namespace {

constexpr double kProbFloor = 1e-15;

double true_class_alpha(std::size_t y, const TrainParams& params) {
    if (params.focal_alpha.empty()) return 1.0;
    if (y >= params.focal_alpha.size()) {
        throw DomainError("focal alpha vector shorter than the class count");
    }
    return params.focal_alpha[y];
}

}  // namespace

double focal_loss(double p, double a_t, double gamma) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("focal loss requires a true-class probability in (0, 1]");
    }
    return -a_t * std::pow(1.0 - p, gamma) * std::log(p);
}

LinearModel::LinearModel(std::size_t n_classes, std::size_t dim)
    : n_classes_(n_classes), dim_(dim), weights_(n_classes * dim, 0.0), bias_(n_classes, 0.0) {}

double LinearModel::weight(std::size_t cls, std::size_t feature) const {
    return weights_[cls * dim_ + feature];
}

double& LinearModel::weight(std::size_t cls, std::size_t feature) {
    return weights_[cls * dim_ + feature];
}

std::vector<double> LinearModel::logits(const SparseVec& x) const {
    std::vector<double> z(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c) {
        double sum = bias_[c];
        const double* row = weights_.data() + c * dim_;
        for (const auto& [idx, v] : x.entries) sum += row[idx] * v;
        z[c] = sum;
    }
    return z;
}

std::vector<double> LinearModel::probabilities(const SparseVec& x) const {
    return softmax(logits(x));
}

std::size_t LinearModel::predict(const SparseVec& x) const {
    const std::vector<double> z = logits(x);
    return static_cast<std::size_t>(
        std::distance(z.begin(), std::max_element(z.begin(), z.end())));
}

std::vector<double> softmax(std::span<const double> logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

double example_loss(std::span<const double> probs, std::size_t y, const TrainParams& params) {
    const double p = std::max(probs[y], kProbFloor);
    if (params.loss == LossKind::cross_entropy) return -std::log(p);
    return focal_loss(p, true_class_alpha(y, params), params.focal_gamma);
}

std::vector<double> logit_gradient(std::span<const double> probs, std::size_t y,
                                   const TrainParams& params) {
    std::vector<double> g(probs.size());
    if (params.loss == LossKind::cross_entropy) {
        for (std::size_t j = 0; j < probs.size(); ++j) g[j] = probs[j];
        g[y] -= 1.0;
        return g;
    }
    const double p = std::max(probs[y], kProbFloor);
    const double a = true_class_alpha(y, params);
    const double gamma = params.focal_gamma;
    // dL/dp of -a (1-p)^g ln p, then the softmax Jacobian row for class y.
    const double dl_dp =
        a * (gamma * std::pow(1.0 - p, gamma - 1.0) * std::log(p) -
             std::pow(1.0 - p, gamma) / p);
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double indicator = j == y ? 1.0 : 0.0;
        g[j] = dl_dp * p * (indicator - probs[j]);
    }
    return g;
}

std::vector<double> resolve_focal_alpha(std::span<const std::size_t> targets,
                                        std::size_t n_classes, const TrainParams& params) {
    if (!params.focal_alpha.empty()) {
        if (params.focal_alpha.size() != n_classes) {
            throw DomainError("focal alpha vector must have one entry per class");
        }
        return params.focal_alpha;
    }
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t y : targets) {
        if (y >= n_classes) throw DomainError("target class out of range");
        ++counts[y];
    }
    std::vector<double> alpha(n_classes, 1.0);
    const double total = static_cast<double>(targets.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[c] > 0) alpha[c] = std::sqrt(total / static_cast<double>(counts[c]));
    }
    return alpha;
}

LinearModel train_linear(std::span<const SparseVec> features, std::span<const std::size_t> targets,
                         std::size_t n_classes, std::size_t dim, const TrainParams& params) {
    if (features.size() != targets.size()) {
        throw AlignmentError("feature count " + std::to_string(features.size()) +
                             " does not match target count " + std::to_string(targets.size()));
    }
    if (features.empty()) throw InsufficientData("cannot train on an empty set");
    if (n_classes < 2) throw DomainError("need at least two classes");
    for (std::size_t y : targets) {
        if (y >= n_classes) throw DomainError("target class out of range");
    }
    for (const SparseVec& x : features) {
        if (!x.entries.empty() && x.entries.back().first >= dim) {
            throw DomainError("feature index exceeds the declared dimension");
        }
    }

    TrainParams resolved = params;
    if (params.loss == LossKind::focal) {
        resolved.focal_alpha = resolve_focal_alpha(targets, n_classes, params);
    }

    LinearModel model(n_classes, dim);
    Rng rng(params.seed);
    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> grad_w(n_classes * dim, 0.0);
    std::vector<double> grad_b(n_classes, 0.0);
    const std::size_t batch = std::max<std::size_t>(1, params.batch_size);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += batch) {
            const std::size_t end = std::min(order.size(), begin + batch);
            std::fill(grad_w.begin(), grad_w.end(), 0.0);
            std::fill(grad_b.begin(), grad_b.end(), 0.0);
            for (std::size_t k = begin; k < end; ++k) {
                const SparseVec& x = features[order[k]];
                const std::size_t y = targets[order[k]];
                const std::vector<double> probs = model.probabilities(x);
                epoch_loss += example_loss(probs, y, resolved);
                const std::vector<double> g = logit_gradient(probs, y, resolved);
                for (std::size_t c = 0; c < n_classes; ++c) {
                    if (g[c] == 0.0) continue;
                    double* row = grad_w.data() + c * dim;
                    for (const auto& [idx, v] : x.entries) row[idx] += g[c] * v;
                    grad_b[c] += g[c];
                }
            }
            const double scale = params.learning_rate / static_cast<double>(end - begin);
            const double decay = params.learning_rate * params.l2;
            for (std::size_t c = 0; c < n_classes; ++c) {
                for (std::size_t f = 0; f < dim; ++f) {
                    double& w = model.weight(c, f);
                    w -= scale * grad_w[c * dim + f] + decay * w;
                }
                model.bias(c) -= scale * grad_b[c];
            }
        }
        if (!std::isfinite(epoch_loss)) {
            throw TrainingDiverged("non-finite loss at epoch " + std::to_string(epoch));
        }
    }
    return model;
}

}  // namespace moc::models
