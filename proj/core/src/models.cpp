// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "moc/errors.hpp"
#include "moc/folds.hpp"
#include "moc/rng.hpp"
#include "moc/text.hpp"

namespace moc::models {

namespace {

std::map<std::string, const LabelSequence*> index_sequences(std::span<const LabelSequence> seqs) {
    std::map<std::string, const LabelSequence*> out;
    for (const LabelSequence& s : seqs) {
        if (!out.emplace(s.timeline_id, &s).second) {
            throw AlignmentError("duplicate label sequence for timeline \"" + s.timeline_id +
                                 "\"");
        }
    }
    return out;
}

/// Trains on the given timelines and predicts the test ones; the shared
/// inner step of every cross-validated model.
std::map<std::string, LabelSequence> predict_fold(
    const std::map<std::string, std::vector<SparseVec>>& features,
    const std::map<std::string, const LabelSequence*>& gold,
    const std::vector<std::string>& train_ids, const std::vector<std::string>& test_ids,
    std::size_t dim, const TrainParams& params) {
    std::vector<SparseVec> train_x;
    std::vector<std::size_t> train_y;
    for (const std::string& id : train_ids) {
        const std::vector<SparseVec>& vecs = features.at(id);
        const LabelSequence& seq = *gold.at(id);
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            train_x.push_back(vecs[i]);
            train_y.push_back(static_cast<std::size_t>(seq.labels[i]));
        }
    }
    const LinearModel model = train_linear(train_x, train_y, kNumLabels, dim, params);

    std::map<std::string, LabelSequence> out;
    for (const std::string& id : test_ids) {
        const std::vector<SparseVec>& vecs = features.at(id);
        LabelSequence seq;
        seq.timeline_id = id;
        seq.labels.reserve(vecs.size());
        for (const SparseVec& v : vecs) {
            seq.labels.push_back(static_cast<Label>(model.predict(v)));
        }
        out.emplace(id, std::move(seq));
    }
    return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::majority:
            return "majority";
        case ModelKind::random:
            return "random";
        case ModelKind::linear_ce:
            return "linear-ce";
        case ModelKind::linear_focal:
            return "linear-focal";
        case ModelKind::fsd:
            return "fsd";
        case ModelKind::scd_op:
            return "scd-op";
        case ModelKind::scd_fp:
            return "scd-fp";
    }
    throw DomainError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
    for (ModelKind kind : {ModelKind::majority, ModelKind::random, ModelKind::linear_ce,
                           ModelKind::linear_focal, ModelKind::fsd, ModelKind::scd_op,
                           ModelKind::scd_fp}) {
        if (to_string(kind) == s) return kind;
    }
    throw ConfigError("unknown model \"" + s + "\"");
}

std::vector<LabelSequence> majority_baseline(std::span<const Timeline> timelines) {
    std::vector<LabelSequence> out;
    out.reserve(timelines.size());
    for (const Timeline& t : timelines) {
        out.push_back(LabelSequence{t.timeline_id,
                                    std::vector<Label>(t.posts.size(), Label::O)});
    }
    return out;
}

std::vector<LabelSequence> random_baseline(std::span<const Timeline> timelines,
                                           const std::array<double, kNumLabels>& priors,
                                           std::uint64_t seed) {
    double sum = 0.0;
    for (double p : priors) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvalidDistribution("class priors must be non-negative and finite");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidDistribution("class priors must sum to 1");
    }

    const Rng base(seed);
    std::vector<LabelSequence> out;
    out.reserve(timelines.size());
    for (const Timeline& t : timelines) {
        Rng rng = base.derive(t.timeline_id);
        LabelSequence seq;
        seq.timeline_id = t.timeline_id;
        seq.labels.reserve(t.posts.size());
        for (std::size_t i = 0; i < t.posts.size(); ++i) {
            seq.labels.push_back(static_cast<Label>(rng.discrete(priors)));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

std::array<double, kNumLabels> label_distribution(std::span<const LabelSequence> sequences) {
    std::array<double, kNumLabels> counts{};
    std::size_t total = 0;
    for (const LabelSequence& s : sequences) {
        for (Label l : s.labels) {
            ++counts[static_cast<std::size_t>(l)];
            ++total;
        }
    }
    if (total == 0) throw InsufficientData("no posts to derive a label distribution from");
    for (double& c : counts) c /= static_cast<double>(total);
    return counts;
}

std::vector<LabelSequence> sequence_classifier(std::span<const TimelineFeatures> features,
                                               std::span<const LabelSequence> gold,
                                               const FoldAssignment& folds, std::size_t radius,
                                               const TrainParams& params) {
    const auto gold_by_id = index_sequences(gold);

    std::size_t dim = 1;
    std::map<std::string, const TimelineFeatures*> feats_by_id;
    for (const TimelineFeatures& f : features) {
        if (!feats_by_id.emplace(f.timeline_id, &f).second) {
            throw AlignmentError("duplicate features for timeline \"" + f.timeline_id + "\"");
        }
        dim = std::max(dim, f.dim);
    }

    std::map<std::string, std::vector<SparseVec>> windowed;
    for (const auto& [id, g] : gold_by_id) {
        auto it = feats_by_id.find(id);
        if (it == feats_by_id.end()) {
            throw AlignmentError("no features for timeline \"" + id + "\"");
        }
        if (it->second->per_post.size() != g->labels.size()) {
            throw AlignmentError("timeline \"" + id + "\" has " +
                                 std::to_string(g->labels.size()) + " labels but " +
                                 std::to_string(it->second->per_post.size()) +
                                 " feature vectors");
        }
        if (!folds.fold_of.count(id)) {
            throw ConfigError("timeline \"" + id + "\" missing from the fold assignment");
        }
        windowed.emplace(id, context_windows(it->second->per_post, dim, radius));
    }
    const std::size_t windowed_dim = dim * (2 * radius + 1);

    std::map<std::string, LabelSequence> predicted;
    for (int f = 0; f < folds.k; ++f) {
        std::vector<std::string> train_ids, test_ids;
        for (const auto& [id, fold] : folds.fold_of) {
            if (!gold_by_id.count(id)) continue;
            (fold == f ? test_ids : train_ids).push_back(id);
        }
        if (test_ids.empty()) continue;
        TrainParams fold_params = params;
        fold_params.seed = params.seed + static_cast<std::uint64_t>(f);
        auto fold_pred =
            predict_fold(windowed, gold_by_id, train_ids, test_ids, windowed_dim, fold_params);
        for (auto& [id, seq] : fold_pred) predicted.emplace(id, std::move(seq));
    }

    std::vector<LabelSequence> out;
    out.reserve(gold.size());
    for (const LabelSequence& g : gold) out.push_back(predicted.at(g.timeline_id));
    return out;
}

std::vector<LabelSequence> run_baseline(std::span<const Timeline> timelines,
                                        std::span<const LabelSequence> gold,
                                        const BaselineConfig& config,
                                        const std::vector<VectorRecord>* external_vectors) {
    if (config.kind == ModelKind::majority) return majority_baseline(timelines);
    if (config.kind == ModelKind::random) {
        const std::array<double, kNumLabels> priors =
            config.priors ? *config.priors : label_distribution(gold);
        return random_baseline(timelines, priors, config.seed);
    }

    // Supervised models: everything fold-dependent (vocabulary, projection,
    // forecaster, classifier) is fitted on training folds only.
    const auto gold_by_id = index_sequences(gold);
    std::map<std::string, const Timeline*> timeline_by_id;
    std::vector<std::string> ids;
    for (const Timeline& t : timelines) {
        if (!timeline_by_id.emplace(t.timeline_id, &t).second) {
            throw AlignmentError("duplicate timeline \"" + t.timeline_id + "\"");
        }
        auto it = gold_by_id.find(t.timeline_id);
        if (it == gold_by_id.end()) {
            throw AlignmentError("no gold labels for timeline \"" + t.timeline_id + "\"");
        }
        check_alignment(*it->second, t);
        ids.push_back(t.timeline_id);
    }

    std::map<std::pair<std::string, std::string>, const VectorRecord*> external;
    std::size_t external_dim = 0;
    if (external_vectors) {
        for (const VectorRecord& r : *external_vectors) {
            if (!external.emplace(std::make_pair(r.timeline_id, r.post_id), &r).second) {
                throw AlignmentError("duplicate vector for post \"" + r.post_id +
                                     "\" of timeline \"" + r.timeline_id + "\"");
            }
            if (external_dim == 0) external_dim = r.values.size();
            if (r.values.size() != external_dim) {
                throw AlignmentError("vector for post \"" + r.post_id +
                                     "\" has inconsistent dimension");
            }
        }
        if (external_dim == 0) throw AlignmentError("external vector file is empty");
    }

    const FoldAssignment folds = split_folds(ids, config.folds, config.seed);
    const Rng base(config.seed);

    std::map<std::string, LabelSequence> predicted;
    for (int f = 0; f < folds.k; ++f) {
        std::vector<std::string> train_ids, test_ids;
        for (const std::string& id : ids) {
            (folds.fold_of.at(id) == f ? test_ids : train_ids).push_back(id);
        }
        if (test_ids.empty()) continue;

        // Post representations: external vectors, or tf-idf fitted on the
        // training folds only.
        std::map<std::string, std::vector<SparseVec>> reps;
        std::size_t rep_dim = 0;
        if (external_vectors) {
            rep_dim = external_dim;
            for (const std::string& id : ids) {
                const Timeline& t = *timeline_by_id.at(id);
                std::vector<SparseVec> vecs;
                vecs.reserve(t.posts.size());
                for (const Post& p : t.posts) {
                    auto it = external.find(std::make_pair(id, p.post_id));
                    if (it == external.end()) {
                        throw AlignmentError("no vector for post \"" + p.post_id +
                                             "\" of timeline \"" + id + "\"");
                    }
                    vecs.push_back(from_dense(it->second->values));
                }
                reps.emplace(id, std::move(vecs));
            }
        } else {
            std::vector<std::string> train_texts;
            for (const std::string& id : train_ids) {
                for (const Post& p : timeline_by_id.at(id)->posts) train_texts.push_back(p.text);
            }
            const TfidfVocabulary vocab = TfidfVocabulary::fit(train_texts);
            rep_dim = vocab.size();
            for (const std::string& id : ids) {
                const Timeline& t = *timeline_by_id.at(id);
                std::vector<SparseVec> vecs;
                vecs.reserve(t.posts.size());
                for (const Post& p : t.posts) vecs.push_back(vocab.transform(p.text));
                reps.emplace(id, std::move(vecs));
            }
        }

        const bool needs_projection =
            (config.kind == ModelKind::scd_op || config.kind == ModelKind::scd_fp) &&
            rep_dim > config.scd_projection_dim;
        if (needs_projection) {
            const std::uint64_t proj_seed =
                base.derive("projection-fold-" + std::to_string(f)).next_u64();
            for (auto& [id, vecs] : reps) {
                vecs = project_gaussian(vecs, rep_dim, config.scd_projection_dim, proj_seed);
            }
            rep_dim = config.scd_projection_dim;
        }

        // Model-specific per-post features on top of the representations.
        std::map<std::string, std::vector<SparseVec>> features;
        std::size_t feature_dim = rep_dim;
        switch (config.kind) {
            case ModelKind::linear_ce:
            case ModelKind::linear_focal:
                features = std::move(reps);
                break;
            case ModelKind::fsd: {
                feature_dim = 0;
                for (const std::string& id : ids) {
                    TimelineFeatures tf = fsd_features(*timeline_by_id.at(id), reps.at(id),
                                                       config.fsd_n_list, config.fsd_mode);
                    feature_dim = std::max(feature_dim, tf.dim);
                    features.emplace(id, std::move(tf.per_post));
                }
                break;
            }
            case ModelKind::scd_op: {
                feature_dim = 0;
                for (const std::string& id : ids) {
                    TimelineFeatures tf = scd_op_features(*timeline_by_id.at(id), reps.at(id));
                    feature_dim = std::max(feature_dim, tf.dim);
                    features.emplace(id, std::move(tf.per_post));
                }
                break;
            }
            case ModelKind::scd_fp: {
                std::vector<std::vector<SparseVec>> train_sequences;
                train_sequences.reserve(train_ids.size());
                for (const std::string& id : train_ids) train_sequences.push_back(reps.at(id));
                RidgeForecaster forecaster(config.forecast_k, config.ridge_lambda);
                forecaster.fit(train_sequences, rep_dim);
                feature_dim = 0;
                for (const std::string& id : ids) {
                    TimelineFeatures tf = forecaster.transform(*timeline_by_id.at(id),
                                                               reps.at(id));
                    feature_dim = std::max(feature_dim, tf.dim);
                    features.emplace(id, std::move(tf.per_post));
                }
                break;
            }
            default:
                throw ConfigError("unsupported model kind in the supervised path");
        }
        feature_dim = std::max<std::size_t>(1, feature_dim);

        std::map<std::string, std::vector<SparseVec>> windowed;
        for (auto& [id, vecs] : features) {
            windowed.emplace(id, context_windows(vecs, feature_dim, config.context_radius));
        }
        const std::size_t windowed_dim = feature_dim * (2 * config.context_radius + 1);

        TrainParams params = config.train;
        if (config.kind == ModelKind::linear_ce) params.loss = LossKind::cross_entropy;
        if (config.kind == ModelKind::linear_focal) params.loss = LossKind::focal;
        params.seed = config.train.seed + static_cast<std::uint64_t>(f);

        auto fold_pred =
            predict_fold(windowed, gold_by_id, train_ids, test_ids, windowed_dim, params);
        for (auto& [id, seq] : fold_pred) predicted.emplace(id, std::move(seq));
    }

    std::vector<LabelSequence> out;
    out.reserve(ids.size());
    for (const std::string& id : ids) out.push_back(predicted.at(id));
    return out;
}

std::vector<BigramWeight> error_correlation_bigrams(std::span<const std::string> tp_texts,
                                                    std::span<const std::string> fn_texts,
                                                    const TrainParams& params) {
    if (tp_texts.empty() || fn_texts.empty()) {
        throw InsufficientData("bigram error analysis needs both identified and missed posts");
    }

    std::map<std::string, std::uint32_t> vocab;
    auto text_bigrams = [](const std::string& text) {
        const std::vector<std::string> tokens = text::tokenize(text);
        return text::bigrams(tokens);
    };
    for (std::span<const std::string> side : {tp_texts, fn_texts}) {
        for (const std::string& text : side) {
            for (const std::string& b : text_bigrams(text)) {
                vocab.emplace(b, 0);
            }
        }
    }
    if (vocab.empty()) throw EmptyVocabulary("no bigrams in the given posts");
    std::uint32_t next = 0;
    for (auto& [bigram, idx] : vocab) idx = next++;

    std::vector<SparseVec> features;
    std::vector<std::size_t> targets;
    auto add = [&](std::span<const std::string> texts, std::size_t cls) {
        for (const std::string& text : texts) {
            std::set<std::uint32_t> present;
            for (const std::string& b : text_bigrams(text)) present.insert(vocab.at(b));
            SparseVec v;
            for (std::uint32_t idx : present) v.entries.emplace_back(idx, 1.0);
            features.push_back(std::move(v));
            targets.push_back(cls);
        }
    };
    add(fn_texts, 0);
    add(tp_texts, 1);

    const LinearModel model = train_linear(features, targets, 2, vocab.size(), params);
    std::vector<BigramWeight> out;
    out.reserve(vocab.size());
    for (const auto& [bigram, idx] : vocab) {
        // Signed toward the identified class: positive means the bigram
        // pushes a post toward being caught.
        out.push_back(BigramWeight{bigram, model.weight(1, idx) - model.weight(0, idx)});
    }
    std::sort(out.begin(), out.end(), [](const BigramWeight& a, const BigramWeight& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.bigram < b.bigram;
    });
    return out;
}

}  // namespace moc::models
