// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "moc/changepoint.hpp"
#include "moc/io.hpp"
#include "moc/time.hpp"
#include "moc/types.hpp"

namespace moc::synth {

struct SynthConfig {
    int n_users = 50;
    int days = 60;
    Date start_date = Date::parse("2024-01-01");
    /// Expected posts/day before and after a planted rate change.
    double base_rate = 1.0;
    double changed_rate = 6.0;
    /// Fraction of users who get a rate change, and where it lands.
    double change_fraction = 0.5;
    int change_day_min = 20;
    int change_day_max = 40;
    /// Target corpus label frequencies, indexed by Label {O, IS, IE}.
    std::array<double, kNumLabels> label_priors = {0.845, 0.047, 0.108};
    /// Region length bounds (posts) for planted moments.
    int switch_len_min = 1;
    int switch_len_max = 3;
    int escalation_len_min = 2;
    int escalation_len_max = 8;
    /// Mood lexicon sizes for template text generation.
    int lexicon_positive = 40;
    int lexicon_negative = 40;
    int lexicon_neutral = 80;
    /// Timeline construction around planted or random anchors.
    int window_days = 7;
    int min_posts = 10;
    int max_posts = 150;
    /// Simulated annotators: per-post probability of flipping away from
    /// gold, per annotator.
    int n_annotators = 3;
    double annotator_noise = 0.08;
    std::uint64_t seed = 0;
};

struct PlantedChange {
    std::string user_id;
    Date date;
    double rate_before = 0.0;
    double rate_after = 0.0;
};

struct SynthCorpus {
    std::vector<Post> posts;                        ///< all posts, sorted by (user, time)
    std::vector<changepoint::CountSeries> counts;   ///< daily counts per user
    std::vector<PlantedChange> planted;             ///< ground-truth rate changes
    std::vector<Timeline> timelines;                ///< extracted around anchors
    std::vector<LabelsRecord> gold;                 ///< planted gold labels
    std::vector<AnnotationRecord> annotations;      ///< simulated annotators (non-None only)
};

/// Generates a full synthetic corpus: Poisson post streams with planted
/// rate changes, timelines, gold moment labels whose corpus frequencies
/// track label_priors, and noisy multi-annotator records. Deterministic
/// per seed. Throws ConfigError on invalid parameters.
SynthCorpus generate(const SynthConfig& config);

}  // namespace moc::synth
