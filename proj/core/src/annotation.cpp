// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/annotation.hpp"

#include <algorithm>
#include <array>

#include "moc/errors.hpp"

namespace moc::annotation {

AnnotationSet AnnotationSet::from_records(const std::vector<AnnotationRecord>& records) {
    AnnotationSet set;
    set.records_ = records;
    for (std::size_t i = 0; i < set.records_.size(); ++i) {
        const AnnotationRecord& r = set.records_[i];
        auto key = std::make_tuple(r.timeline_id, r.post_id, r.annotator_id);
        auto [it, inserted] = set.index_.emplace(std::move(key), i);
        if (!inserted) {
            throw Error("duplicate annotation for timeline \"" + r.timeline_id + "\", post \"" +
                        r.post_id + "\", annotator \"" + r.annotator_id + "\"");
        }
    }
    return set;
}

void AnnotationSet::check_against(const std::vector<Timeline>& timelines) const {
    std::map<std::string, std::set<std::string>> posts_of;
    for (const Timeline& t : timelines) {
        auto& posts = posts_of[t.timeline_id];
        for (const Post& p : t.posts) posts.insert(p.post_id);
    }
    for (const AnnotationRecord& r : records_) {
        auto it = posts_of.find(r.timeline_id);
        if (it == posts_of.end()) {
            throw AlignmentError("annotation references unknown timeline \"" + r.timeline_id +
                                 "\"");
        }
        if (!it->second.count(r.post_id)) {
            throw AlignmentError("annotation references post \"" + r.post_id +
                                 "\" absent from timeline \"" + r.timeline_id + "\"");
        }
    }
}

std::vector<std::string> AnnotationSet::annotator_ids() const {
    std::set<std::string> ids;
    for (const AnnotationRecord& r : records_) ids.insert(r.annotator_id);
    return {ids.begin(), ids.end()};
}

std::set<std::string> AnnotationSet::timeline_ids() const {
    std::set<std::string> ids;
    for (const AnnotationRecord& r : records_) ids.insert(r.timeline_id);
    return ids;
}

Label AnnotationSet::label_of(const std::string& timeline_id, const std::string& post_id,
                              const std::string& annotator_id) const {
    const AnnotationRecord* r = find(timeline_id, post_id, annotator_id);
    return r ? r->label : Label::O;
}

const AnnotationRecord* AnnotationSet::find(const std::string& timeline_id,
                                            const std::string& post_id,
                                            const std::string& annotator_id) const {
    auto it = index_.find(std::make_tuple(timeline_id, post_id, annotator_id));
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::optional<double> positive_agreement(const AnnotationSet& ann,
                                         const std::vector<Timeline>& timelines, Label label,
                                         AgreementMode mode) {
    const std::vector<std::string> annotators = ann.annotator_ids();
    const std::set<std::string> annotated = ann.timeline_ids();

    std::size_t union_size = 0;
    std::size_t hit = 0;
    for (const Timeline& t : timelines) {
        if (!annotated.count(t.timeline_id)) continue;
        for (const Post& p : t.posts) {
            std::size_t votes = 0;
            for (const std::string& a : annotators) {
                if (ann.label_of(t.timeline_id, p.post_id, a) == label) ++votes;
            }
            if (votes == 0) continue;
            ++union_size;
            const bool counted = mode == AgreementMode::perfect ? votes == annotators.size()
                                                                : votes >= 2;
            if (counted) ++hit;
        }
    }
    if (union_size == 0) return std::nullopt;
    return static_cast<double>(hit) / static_cast<double>(union_size);
}

LabelsRecord derive_gold(const AnnotationSet& ann, const Timeline& timeline) {
    const std::vector<std::string> annotators = ann.annotator_ids();
    LabelsRecord gold;
    gold.timeline_id = timeline.timeline_id;
    gold.labels.reserve(timeline.posts.size());
    gold.roles.reserve(timeline.posts.size());

    for (const Post& p : timeline.posts) {
        std::size_t is_votes = 0;
        std::size_t ie_votes = 0;
        // Role tallies per candidate label; auxiliary data only.
        std::array<std::size_t, 4> role_votes_is{};
        std::array<std::size_t, 4> role_votes_ie{};
        for (const std::string& a : annotators) {
            const AnnotationRecord* r = ann.find(timeline.timeline_id, p.post_id, a);
            if (!r) continue;
            if (r->label == Label::IS) {
                ++is_votes;
                ++role_votes_is[static_cast<std::size_t>(r->role)];
            } else if (r->label == Label::IE) {
                ++ie_votes;
                ++role_votes_ie[static_cast<std::size_t>(r->role)];
            }
        }

        Label winner = Label::O;
        Role role = Role::none;
        const std::array<std::size_t, 4>* tally = nullptr;
        if (is_votes >= 2) {
            winner = Label::IS;
            tally = &role_votes_is;
        } else if (ie_votes >= 2) {
            winner = Label::IE;
            tally = &role_votes_ie;
        }
        if (tally) {
            // Most frequent informative role wins; ties break toward the
            // lower enum value, and all-none stays none.
            std::size_t best = 0;
            for (std::size_t i = 1; i < tally->size(); ++i) {
                if ((*tally)[i] > (best == 0 ? 0 : (*tally)[best])) best = i;
            }
            role = static_cast<Role>(best);
        }
        gold.labels.push_back(winner);
        gold.roles.push_back(role);
    }
    return gold;
}

}  // namespace moc::annotation
