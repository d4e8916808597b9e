// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "moc/errors.hpp"
#include "moc/rng.hpp"

namespace moc::synth {

namespace {

void validate(const SynthConfig& cfg) {
    if (cfg.n_users < 1) throw ConfigError("need at least one user");
    if (cfg.days < 2) throw ConfigError("need at least two days");
    if (!(cfg.base_rate > 0.0) || !(cfg.changed_rate > 0.0)) {
        throw ConfigError("posting rates must be positive");
    }
    if (cfg.change_fraction < 0.0 || cfg.change_fraction > 1.0) {
        throw ConfigError("change fraction must lie in [0, 1]");
    }
    if (cfg.change_day_min < 1 || cfg.change_day_max >= cfg.days ||
        cfg.change_day_min > cfg.change_day_max) {
        throw ConfigError("change day range must lie inside (0, days)");
    }
    double prior_sum = 0.0;
    for (double p : cfg.label_priors) {
        if (!(p >= 0.0)) throw ConfigError("label priors must be non-negative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) throw ConfigError("label priors must sum to 1");
    const double moc_mass = cfg.label_priors[static_cast<std::size_t>(Label::IS)] +
                            cfg.label_priors[static_cast<std::size_t>(Label::IE)];
    if (moc_mass > 0.6) {
        throw ConfigError("label priors leave too little None padding between regions");
    }
    if (cfg.switch_len_min < 1 || cfg.switch_len_min > cfg.switch_len_max) {
        throw ConfigError("invalid switch length bounds");
    }
    if (cfg.escalation_len_min < 1 || cfg.escalation_len_min > cfg.escalation_len_max) {
        throw ConfigError("invalid escalation length bounds");
    }
    if (cfg.window_days < 1 || cfg.min_posts < 1 || cfg.min_posts > cfg.max_posts) {
        throw ConfigError("invalid timeline extraction bounds");
    }
    if (cfg.n_annotators < 2) throw ConfigError("need at least two annotators");
    if (cfg.annotator_noise < 0.0 || cfg.annotator_noise > 1.0) {
        throw ConfigError("annotator noise must lie in [0, 1]");
    }
    if (cfg.lexicon_positive < 1 || cfg.lexicon_negative < 1 || cfg.lexicon_neutral < 1) {
        throw ConfigError("lexicon sizes must be positive");
    }
}

std::vector<std::string> build_lexicon(const std::vector<std::string>& base, int size) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
        const std::size_t b = static_cast<std::size_t>(i) % base.size();
        const int round = i / static_cast<int>(base.size());
        out.push_back(round == 0 ? base[b] : base[b] + std::to_string(round + 1));
    }
    return out;
}

struct Lexicons {
    std::vector<std::string> positive;
    std::vector<std::string> negative;
    std::vector<std::string> neutral;
};

Lexicons make_lexicons(const SynthConfig& cfg) {
    static const std::vector<std::string> kPositive = {
        "happy",  "calm",    "hopeful", "grateful", "bright",   "peaceful", "smiling", "proud",
        "excited", "loved",  "cheerful", "relaxed",  "content",  "joyful",   "warm",    "steady"};
    static const std::vector<std::string> kNegative = {
        "sad",    "tired",  "hopeless", "worthless", "anxious", "empty", "crying", "hurting",
        "lonely", "worried", "numb",    "angry",     "lost",    "dark",  "heavy",  "broken"};
    static const std::vector<std::string> kNeutral = {
        "today",  "walked", "coffee",  "weather", "watched", "movie", "dinner", "work",
        "slept",  "morning", "reading", "music",   "later",   "again", "house",  "street"};
    return Lexicons{build_lexicon(kPositive, cfg.lexicon_positive),
                    build_lexicon(kNegative, cfg.lexicon_negative),
                    build_lexicon(kNeutral, cfg.lexicon_neutral)};
}

/// Mood of one post: p(negative word) and p(positive word); the rest of the
/// words are neutral.
struct Mood {
    double p_neg = 0.05;
    double p_pos = 0.35;
};

std::string make_text(const Lexicons& lex, const Mood& mood, Rng& rng) {
    const std::size_t words = 3 + rng.below(6);
    std::string text;
    for (std::size_t w = 0; w < words; ++w) {
        const double u = rng.uniform();
        const std::vector<std::string>* pool = &lex.neutral;
        if (u < mood.p_neg) {
            pool = &lex.negative;
        } else if (u < mood.p_neg + mood.p_pos) {
            pool = &lex.positive;
        }
        if (!text.empty()) text.push_back(' ');
        text += (*pool)[rng.below(pool->size())];
    }
    return text;
}

std::string format_id(const char* prefix, int n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04d", prefix, n);
    return buf;
}

/// Places one region of `label` with length <= want at a uniformly random
/// admissible start (the region plus one post of padding on each side must
/// be None). Returns the placed length, 0 when nothing fits.
std::size_t place_region(std::vector<Label>& labels, Label label, std::size_t want,
                         std::size_t len_min, std::size_t len_max, Rng& rng) {
    if (want == 0) return 0;
    const std::size_t target =
        std::min(want, len_min + rng.below(len_max - len_min + 1));
    for (std::size_t len = target; len >= 1; --len) {
        std::vector<std::size_t> starts;
        for (std::size_t s = 0; s + len <= labels.size(); ++s) {
            bool free = true;
            const std::size_t lo = s == 0 ? 0 : s - 1;
            const std::size_t hi = std::min(labels.size() - 1, s + len);
            for (std::size_t i = lo; i <= hi && free; ++i) {
                free = labels[i] == Label::O;
            }
            if (free) starts.push_back(s);
        }
        if (starts.empty()) continue;
        const std::size_t s = starts[rng.below(starts.size())];
        for (std::size_t i = s; i < s + len; ++i) labels[i] = label;
        return len;
    }
    return 0;
}

}  // namespace

SynthCorpus generate(const SynthConfig& cfg) {
    validate(cfg);
    const Lexicons lex = make_lexicons(cfg);
    const Rng root(cfg.seed);
    SynthCorpus corpus;

    struct UserDraft {
        std::string user_id;
        std::vector<std::size_t> post_indices;  // into corpus.posts
        int change_day = -1;
    };
    std::vector<UserDraft> drafts;

    // 1. Poisson post streams with planted rate changes.
    for (int u = 0; u < cfg.n_users; ++u) {
        UserDraft draft;
        draft.user_id = format_id("u", u);
        Rng rng = root.derive("user-" + draft.user_id);

        const bool changed = rng.uniform() < cfg.change_fraction;
        if (changed) {
            draft.change_day =
                cfg.change_day_min +
                static_cast<int>(rng.below(
                    static_cast<std::uint64_t>(cfg.change_day_max - cfg.change_day_min + 1)));
            corpus.planted.push_back(PlantedChange{draft.user_id,
                                                   cfg.start_date + draft.change_day,
                                                   cfg.base_rate, cfg.changed_rate});
        }

        changepoint::CountSeries series;
        series.user_id = draft.user_id;
        series.start_date = cfg.start_date;
        series.counts.reserve(static_cast<std::size_t>(cfg.days));
        int post_counter = 0;
        for (int day = 0; day < cfg.days; ++day) {
            const double rate =
                draft.change_day >= 0 && day >= draft.change_day ? cfg.changed_rate
                                                                 : cfg.base_rate;
            const auto count = static_cast<std::size_t>(rng.poisson(rate));
            series.counts.push_back(static_cast<std::uint32_t>(count));
            for (std::size_t j = 0; j < count; ++j) {
                Post p;
                p.user_id = draft.user_id;
                p.post_id = draft.user_id + "-" + format_id("p", post_counter++);
                const std::int64_t day_start =
                    (cfg.start_date + day).days_since_epoch() * 86400;
                const std::int64_t offset =
                    static_cast<std::int64_t>((j + 1) * 86400 / (count + 1));
                p.timestamp = Instant(day_start + offset);
                draft.post_indices.push_back(corpus.posts.size());
                corpus.posts.push_back(std::move(p));
            }
        }
        corpus.counts.push_back(std::move(series));
        drafts.push_back(std::move(draft));
    }

    // 2. One candidate timeline per user around its anchor; standard
    // length bounds apply.
    struct TimelineDraft {
        std::size_t timeline_index;             // into corpus.timelines
        std::vector<std::size_t> post_indices;  // into corpus.posts
    };
    std::vector<TimelineDraft> timeline_drafts;
    for (const UserDraft& draft : drafts) {
        const Date anchor = draft.change_day >= 0 ? cfg.start_date + draft.change_day
                                                  : cfg.start_date + cfg.days / 2;
        TimelineDraft td;
        Timeline t;
        t.user_id = draft.user_id;
        t.anchor = anchor;
        t.timeline_id = draft.user_id + "/" + anchor.to_string();
        for (std::size_t idx : draft.post_indices) {
            const std::int64_t delta = corpus.posts[idx].timestamp.date() - anchor;
            if (delta >= -cfg.window_days && delta <= cfg.window_days) {
                td.post_indices.push_back(idx);
                t.posts.push_back(corpus.posts[idx]);
            }
        }
        if (t.posts.size() < static_cast<std::size_t>(cfg.min_posts) ||
            t.posts.size() > static_cast<std::size_t>(cfg.max_posts)) {
            continue;
        }
        td.timeline_index = corpus.timelines.size();
        corpus.timelines.push_back(std::move(t));
        timeline_drafts.push_back(std::move(td));
    }

    // 3. Gold labels: per-timeline quotas with stochastic rounding and a
    // running carry, so corpus label frequencies converge to the priors.
    const double prior_is = cfg.label_priors[static_cast<std::size_t>(Label::IS)];
    const double prior_ie = cfg.label_priors[static_cast<std::size_t>(Label::IE)];
    double carry_is = 0.0;
    double carry_ie = 0.0;
    std::vector<std::vector<Role>> roles_by_timeline(corpus.timelines.size());
    for (const TimelineDraft& td : timeline_drafts) {
        Timeline& t = corpus.timelines[td.timeline_index];
        Rng rng = root.derive("labels-" + t.timeline_id);
        const auto len = t.posts.size();
        std::vector<Label> labels(len, Label::O);

        auto settle = [&](Label label, double& carry, double prior, std::size_t len_min,
                          std::size_t len_max) {
            double budget = carry + prior * static_cast<double>(len);
            auto want = static_cast<std::size_t>(std::max(0.0, std::floor(budget)));
            if (rng.uniform() < budget - std::floor(budget)) ++want;
            std::size_t placed_total = 0;
            while (placed_total < want) {
                const std::size_t placed =
                    place_region(labels, label, want - placed_total, len_min, len_max, rng);
                if (placed == 0) break;
                placed_total += placed;
            }
            carry = budget - static_cast<double>(placed_total);
        };
        settle(Label::IS, carry_is, prior_is, static_cast<std::size_t>(cfg.switch_len_min),
               static_cast<std::size_t>(cfg.switch_len_max));
        settle(Label::IE, carry_ie, prior_ie, static_cast<std::size_t>(cfg.escalation_len_min),
               static_cast<std::size_t>(cfg.escalation_len_max));

        // Roles: a switch is annotated from its starting post; an
        // escalation peaks at the end of its ramp.
        std::vector<Role> roles(len, Role::none);
        for (std::size_t i = 0; i < len; ++i) {
            if (labels[i] == Label::IS) {
                roles[i] = i == 0 || labels[i - 1] != Label::IS ? Role::switch_start
                                                                : Role::in_region;
            } else if (labels[i] == Label::IE) {
                roles[i] = i + 1 == len || labels[i + 1] != Label::IE ? Role::escalation_peak
                                                                     : Role::in_region;
            }
        }

        LabelsRecord gold;
        gold.timeline_id = t.timeline_id;
        gold.labels = labels;
        gold.roles = roles;
        corpus.gold.push_back(std::move(gold));
        roles_by_timeline[td.timeline_index] = std::move(roles);
    }

    // 4. Template text following the latent mood path. Posts outside any
    // timeline read as ordinary (None-mood) posts.
    std::vector<Mood> moods(corpus.posts.size());
    for (std::size_t g = 0; g < timeline_drafts.size(); ++g) {
        const TimelineDraft& td = timeline_drafts[g];
        const LabelsRecord& gold = corpus.gold[g];
        // Escalation ramps: intensity grows linearly toward the peak post.
        for (std::size_t i = 0; i < td.post_indices.size(); ++i) {
            const Label l = gold.labels[i];
            Mood mood;
            if (l == Label::IS) {
                mood = Mood{0.80, 0.05};
            } else if (l == Label::IE) {
                std::size_t start = i;
                while (start > 0 && gold.labels[start - 1] == Label::IE) --start;
                std::size_t end = i;
                while (end + 1 < gold.labels.size() && gold.labels[end + 1] == Label::IE) ++end;
                const double q = static_cast<double>(i - start + 1) /
                                 static_cast<double>(end - start + 1);
                mood = Mood{0.15 + 0.65 * q, 0.05};
            }
            moods[td.post_indices[i]] = mood;
        }
    }
    for (std::size_t i = 0; i < corpus.posts.size(); ++i) {
        Rng rng = root.derive("text-" + corpus.posts[i].post_id);
        corpus.posts[i].text = make_text(lex, moods[i], rng);
    }
    // Timeline copies carry the text too.
    for (const TimelineDraft& td : timeline_drafts) {
        Timeline& t = corpus.timelines[td.timeline_index];
        for (std::size_t i = 0; i < td.post_indices.size(); ++i) {
            t.posts[i].text = corpus.posts[td.post_indices[i]].text;
        }
    }

    // 5. Simulated annotators: independent per-post flips away from gold;
    // only non-None assignments produce records.
    for (std::size_t g = 0; g < timeline_drafts.size(); ++g) {
        const TimelineDraft& td = timeline_drafts[g];
        const Timeline& t = corpus.timelines[td.timeline_index];
        const LabelsRecord& gold = corpus.gold[g];
        const std::vector<Role>& roles = roles_by_timeline[td.timeline_index];
        for (int a = 0; a < cfg.n_annotators; ++a) {
            const std::string annotator_id = format_id("a", a);
            Rng rng = root.derive("annotator-" + annotator_id + "-" + t.timeline_id);
            for (std::size_t i = 0; i < t.posts.size(); ++i) {
                Label label = gold.labels[i];
                if (rng.uniform() < cfg.annotator_noise) {
                    const std::array<std::array<Label, 2>, kNumLabels> others = {{
                        {Label::IS, Label::IE},  // from O
                        {Label::O, Label::IE},   // from IS
                        {Label::O, Label::IS},   // from IE
                    }};
                    label = others[static_cast<std::size_t>(label)][rng.below(2)];
                }
                if (label == Label::O) continue;
                AnnotationRecord rec;
                rec.timeline_id = t.timeline_id;
                rec.post_id = t.posts[i].post_id;
                rec.annotator_id = annotator_id;
                rec.label = label;
                rec.role = label == gold.labels[i] ? roles[i] : Role::in_region;
                corpus.annotations.push_back(std::move(rec));
            }
        }
    }

    return corpus;
}

}  // namespace moc::synth
