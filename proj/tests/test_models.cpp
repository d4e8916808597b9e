// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "moc/errors.hpp"
#include "moc/folds.hpp"
#include "moc/models.hpp"
#include "moc/synth.hpp"
#include "test_util.hpp"

using namespace moc;
using namespace moc::models;

namespace {

/// One-hot feature per post that directly encodes its gold label, so a
/// linear model can recover the labels exactly under cross-validation.
TimelineFeatures label_leak_features(const LabelSequence& gold) {
    TimelineFeatures tf;
    tf.timeline_id = gold.timeline_id;
    tf.dim = kNumLabels;
    for (Label l : gold.labels) {
        SparseVec v;
        v.entries.emplace_back(static_cast<std::uint32_t>(l), 1.0);
        tf.per_post.push_back(std::move(v));
    }
    return tf;
}

synth::SynthConfig small_corpus_config(std::uint64_t seed) {
    synth::SynthConfig cfg;
    cfg.n_users = 12;
    cfg.days = 40;
    cfg.change_day_min = 14;
    cfg.change_day_max = 26;
    cfg.base_rate = 1.2;
    cfg.changed_rate = 5.0;
    cfg.seed = seed;
    return cfg;
}

std::map<std::string, std::vector<Label>> by_id(const std::vector<LabelSequence>& seqs) {
    std::map<std::string, std::vector<Label>> out;
    for (const LabelSequence& s : seqs) out.emplace(s.timeline_id, s.labels);
    return out;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("model kind names round-trip") {
    const std::vector<ModelKind> kinds = {ModelKind::majority,  ModelKind::random,
                                          ModelKind::linear_ce, ModelKind::linear_focal,
                                          ModelKind::fsd,       ModelKind::scd_op,
                                          ModelKind::scd_fp};
    for (ModelKind k : kinds) {
        CAPTURE(to_string(k));
        CHECK(model_kind_from_string(to_string(k)) == k);
    }
    CHECK(to_string(ModelKind::linear_ce) == "linear-ce");
    CHECK(to_string(ModelKind::scd_fp) == "scd-fp");
    CHECK_THROWS_AS(model_kind_from_string("svm"), ConfigError);
    CHECK_THROWS_AS(model_kind_from_string(""), ConfigError);
    CHECK_THROWS_AS(model_kind_from_string("Majority"), ConfigError);
}

TEST_CASE("majority baseline predicts None for every post in input order") {
    const std::vector<Timeline> timelines = {test::make_timeline("t1", "u1", 4),
                                             test::make_timeline("t2", "u2", 2)};
    const auto out = majority_baseline(timelines);
    REQUIRE(out.size() == 2);
    CHECK(out[0].timeline_id == "t1");
    CHECK(out[1].timeline_id == "t2");
    CHECK(out[0].labels == std::vector<Label>(4, Label::O));
    CHECK(out[1].labels == std::vector<Label>(2, Label::O));
}

TEST_CASE("random baseline is deterministic per seed and order-independent") {
    const std::vector<Timeline> timelines = {test::make_timeline("ta", "u1", 30),
                                             test::make_timeline("tb", "u2", 25),
                                             test::make_timeline("tc", "u3", 40)};
    const std::array<double, kNumLabels> priors = {0.5, 0.2, 0.3};

    const auto once = random_baseline(timelines, priors, 42);
    const auto again = random_baseline(timelines, priors, 42);
    REQUIRE(once.size() == 3);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].timeline_id == again[i].timeline_id);
        CHECK(once[i].labels == again[i].labels);
    }

    // Different seed: overwhelmingly unlikely to reproduce 95 draws.
    const auto other = random_baseline(timelines, priors, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < once.size(); ++i) {
        any_diff = any_diff || once[i].labels != other[i].labels;
    }
    CHECK(any_diff);

    // Reversing the input order must not change any per-timeline draw.
    const std::vector<Timeline> reversed = {timelines[2], timelines[1], timelines[0]};
    const auto rev = by_id(random_baseline(reversed, priors, 42));
    for (const LabelSequence& s : once) CHECK(rev.at(s.timeline_id) == s.labels);
}

TEST_CASE("random baseline matches the requested priors in the aggregate") {
    std::vector<Timeline> timelines;
    for (int i = 0; i < 100; ++i) {
        timelines.push_back(test::make_timeline("t" + std::to_string(i),
                                                "u" + std::to_string(i), 200));
    }
    const std::array<double, kNumLabels> priors = {0.845, 0.047, 0.108};
    const auto out = random_baseline(timelines, priors, 7);
    std::array<double, kNumLabels> freq = {0.0, 0.0, 0.0};
    double total = 0.0;
    for (const LabelSequence& s : out) {
        for (Label l : s.labels) {
            freq[static_cast<std::size_t>(l)] += 1.0;
            total += 1.0;
        }
    }
    REQUIRE(total == 20000.0);
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        CHECK(std::abs(freq[c] / total - priors[c]) < 0.02);
    }
}

TEST_CASE("random baseline with a point prior is constant") {
    const std::vector<Timeline> timelines = {test::make_timeline("t1", "u1", 50)};
    const auto out = random_baseline(timelines, {0.0, 1.0, 0.0}, 3);
    CHECK(out[0].labels == std::vector<Label>(50, Label::IS));
}

TEST_CASE("random baseline rejects invalid priors") {
    const std::vector<Timeline> timelines = {test::make_timeline("t1", "u1", 5)};
    CHECK_THROWS_AS(random_baseline(timelines, {0.5, 0.5, 0.1}, 0), InvalidDistribution);
    CHECK_THROWS_AS(random_baseline(timelines, {0.9, 0.2, -0.1}, 0), InvalidDistribution);
    CHECK_THROWS_AS(
        random_baseline(timelines, {1.0, 0.0, std::numeric_limits<double>::quiet_NaN()}, 0),
        InvalidDistribution);
}

TEST_CASE("label distribution tallies gold frequencies") {
    const std::vector<LabelSequence> gold = {test::seq("a", "OOSSEO"), test::seq("b", "OO")};
    const auto dist = label_distribution(gold);
    CHECK(dist[static_cast<std::size_t>(Label::O)] == doctest::Approx(5.0 / 8.0));
    CHECK(dist[static_cast<std::size_t>(Label::IS)] == doctest::Approx(2.0 / 8.0));
    CHECK(dist[static_cast<std::size_t>(Label::IE)] == doctest::Approx(1.0 / 8.0));

    CHECK_THROWS_AS(label_distribution(std::vector<LabelSequence>{}), InsufficientData);
    const std::vector<LabelSequence> empty_posts = {LabelSequence{"a", {}}};
    CHECK_THROWS_AS(label_distribution(empty_posts), InsufficientData);
}

TEST_CASE("sequence classifier recovers a direct feature-to-label map under CV") {
    std::vector<LabelSequence> gold;
    std::vector<TimelineFeatures> features;
    std::vector<std::string> ids;
    for (int i = 0; i < 12; ++i) {
        const std::string id = "t" + std::to_string(i);
        gold.push_back(test::seq(id, "OSSOEEOOOO"));
        features.push_back(label_leak_features(gold.back()));
        ids.push_back(id);
    }
    const FoldAssignment folds = split_folds(ids, 3, 7);
    const auto out = sequence_classifier(features, gold, folds, 0, TrainParams{});
    REQUIRE(out.size() == gold.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].timeline_id == gold[i].timeline_id);
        CHECK(out[i].labels == gold[i].labels);
    }

    const auto rerun = sequence_classifier(features, gold, folds, 0, TrainParams{});
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(rerun[i].labels == out[i].labels);
}

TEST_CASE("sequence classifier validates features, folds, and lengths") {
    std::vector<LabelSequence> gold = {test::seq("a", "OSSOEEOOOO"),
                                       test::seq("b", "OSSOEEOOOO")};
    std::vector<TimelineFeatures> features = {label_leak_features(gold[0]),
                                              label_leak_features(gold[1])};
    const FoldAssignment folds = split_folds({"a", "b"}, 2, 0);

    SUBCASE("missing features") {
        features.pop_back();
        CHECK_THROWS_AS(sequence_classifier(features, gold, folds, 0, TrainParams{}),
                        AlignmentError);
    }
    SUBCASE("duplicate features") {
        features.push_back(label_leak_features(gold[0]));
        CHECK_THROWS_AS(sequence_classifier(features, gold, folds, 0, TrainParams{}),
                        AlignmentError);
    }
    SUBCASE("per-post length mismatch") {
        features[1].per_post.pop_back();
        CHECK_THROWS_AS(sequence_classifier(features, gold, folds, 0, TrainParams{}),
                        AlignmentError);
    }
    SUBCASE("timeline absent from the fold assignment") {
        const FoldAssignment partial = split_folds({"a", "x"}, 2, 0);
        CHECK_THROWS_AS(sequence_classifier(features, gold, partial, 0, TrainParams{}),
                        ConfigError);
    }
}

TEST_CASE("run_baseline yields aligned predictions for every model kind") {
    const synth::SynthCorpus corpus = synth::generate(small_corpus_config(5));
    REQUIRE(corpus.timelines.size() >= 6);
    const auto gold = to_label_sequences(corpus.gold);

    const std::vector<ModelKind> kinds = {ModelKind::majority,  ModelKind::random,
                                          ModelKind::linear_ce, ModelKind::linear_focal,
                                          ModelKind::fsd,       ModelKind::scd_op,
                                          ModelKind::scd_fp};
    for (ModelKind k : kinds) {
        CAPTURE(to_string(k));
        BaselineConfig config;
        config.kind = k;
        config.folds = 3;
        config.seed = 9;
        config.train.epochs = 6;
        const auto out = run_baseline(corpus.timelines, gold, config);
        REQUIRE(out.size() == corpus.timelines.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].timeline_id == corpus.timelines[i].timeline_id);
            CHECK(out[i].labels.size() == corpus.timelines[i].posts.size());
        }
    }
}

TEST_CASE("run_baseline is deterministic for supervised models") {
    const synth::SynthCorpus corpus = synth::generate(small_corpus_config(6));
    const auto gold = to_label_sequences(corpus.gold);
    BaselineConfig config;
    config.kind = ModelKind::linear_focal;
    config.folds = 3;
    config.seed = 21;
    config.train.epochs = 6;
    const auto a = run_baseline(corpus.timelines, gold, config);
    const auto b = run_baseline(corpus.timelines, gold, config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].labels == b[i].labels);
}

TEST_CASE("run_baseline validates gold coverage and duplicates") {
    const synth::SynthCorpus corpus = synth::generate(small_corpus_config(7));
    auto gold = to_label_sequences(corpus.gold);
    BaselineConfig config;
    config.kind = ModelKind::linear_ce;
    config.folds = 3;

    SUBCASE("gold missing a timeline") {
        gold.pop_back();
        CHECK_THROWS_AS(run_baseline(corpus.timelines, gold, config), AlignmentError);
    }
    SUBCASE("duplicate timeline") {
        std::vector<Timeline> dup = corpus.timelines;
        dup.push_back(dup.front());
        CHECK_THROWS_AS(run_baseline(dup, gold, config), AlignmentError);
    }
}

TEST_CASE("run_baseline consumes external vectors in place of tf-idf") {
    const synth::SynthCorpus corpus = synth::generate(small_corpus_config(8));
    const auto gold = to_label_sequences(corpus.gold);

    // Informative vectors: one-hot of the gold label, so the classifier
    // should get nearly everything right through cross-validation.
    std::vector<VectorRecord> vectors;
    for (std::size_t i = 0; i < corpus.timelines.size(); ++i) {
        const Timeline& t = corpus.timelines[i];
        for (std::size_t p = 0; p < t.posts.size(); ++p) {
            VectorRecord r;
            r.timeline_id = t.timeline_id;
            r.post_id = t.posts[p].post_id;
            r.values = {0.0, 0.0, 0.0};
            r.values[static_cast<std::size_t>(gold[i].labels[p])] = 1.0;
            vectors.push_back(std::move(r));
        }
    }

    BaselineConfig config;
    config.kind = ModelKind::linear_ce;
    config.folds = 3;
    config.train.epochs = 30;
    const auto out = run_baseline(corpus.timelines, gold, config, &vectors);

    std::size_t hits = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t p = 0; p < out[i].labels.size(); ++p) {
            hits += out[i].labels[p] == gold[i].labels[p];
            ++total;
        }
    }
    REQUIRE(total > 0);
    CHECK(static_cast<double>(hits) / static_cast<double>(total) > 0.98);

    SUBCASE("a missing vector is an alignment error") {
        std::vector<VectorRecord> partial(vectors.begin(), vectors.end() - 1);
        CHECK_THROWS_AS(run_baseline(corpus.timelines, gold, config, &partial), AlignmentError);
    }
    SUBCASE("inconsistent dimensions are an alignment error") {
        std::vector<VectorRecord> bad = vectors;
        bad.back().values.push_back(1.0);
        CHECK_THROWS_AS(run_baseline(corpus.timelines, gold, config, &bad), AlignmentError);
    }
    SUBCASE("duplicate vectors are an alignment error") {
        std::vector<VectorRecord> bad = vectors;
        bad.push_back(bad.front());
        CHECK_THROWS_AS(run_baseline(corpus.timelines, gold, config, &bad), AlignmentError);
    }
    SUBCASE("an empty vector collection is an alignment error") {
        std::vector<VectorRecord> none;
        CHECK_THROWS_AS(run_baseline(corpus.timelines, gold, config, &none), AlignmentError);
    }
}

TEST_CASE("bigram error correlation surfaces the discriminative bigram") {
    // Posts the detector caught share one planted phrase; missed posts use
    // the same filler vocabulary without it.
    const std::vector<std::string> filler = {
        "slept badly again last night",  "long walk before dinner",
        "quiet day at work mostly",      "watched a movie with tea",
        "rainy morning slow afternoon",  "grocery run then reading",
    };
    std::vector<std::string> tp_texts;
    std::vector<std::string> fn_texts;
    for (int i = 0; i < 30; ++i) {
        const std::string& base = filler[static_cast<std::size_t>(i) % filler.size()];
        tp_texts.push_back(base + " cannot cope");
        fn_texts.push_back(base);
    }

    const auto ranked = error_correlation_bigrams(tp_texts, fn_texts);
    REQUIRE(ranked.size() >= 3);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        CHECK(ranked[i - 1].weight >= ranked[i].weight);
    }
    bool found = false;
    for (std::size_t i = 0; i < 3; ++i) {
        found = found || ranked[i].bigram == "cannot cope";
    }
    CHECK(found);
    CHECK(ranked.front().weight > 0.0);
}

TEST_CASE("bigram error correlation degrades gracefully") {
    const std::vector<std::string> texts = {"feeling fine today", "went for a walk",
                                            "made some dinner"};
    SUBCASE("identical sides carry no signal") {
        const auto ranked = error_correlation_bigrams(texts, texts);
        for (const BigramWeight& b : ranked) CHECK(std::abs(b.weight) < 0.2);
    }
    SUBCASE("either side empty") {
        CHECK_THROWS_AS(error_correlation_bigrams({}, texts), InsufficientData);
        CHECK_THROWS_AS(error_correlation_bigrams(texts, {}), InsufficientData);
    }
    SUBCASE("no bigrams at all") {
        const std::vector<std::string> singles = {"hello", "word"};
        CHECK_THROWS_AS(error_correlation_bigrams(singles, singles), EmptyVocabulary);
    }
}

}  // TEST_SUITE("models")
