// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "moc/io.hpp"
#include "moc/types.hpp"

namespace moc::annotation {

/// Post-level annotations keyed by (timeline_id, post_id, annotator_id).
/// Posts an annotator left unmarked are implicit O.
class AnnotationSet {
public:
    AnnotationSet() = default;

    /// Builds the set, rejecting duplicate keys.
    static AnnotationSet from_records(const std::vector<AnnotationRecord>& records);

    /// Validates that every annotated post exists in its timeline.
    /// Throws AlignmentError otherwise.
    void check_against(const std::vector<Timeline>& timelines) const;

    const std::vector<AnnotationRecord>& records() const noexcept { return records_; }
    std::vector<std::string> annotator_ids() const;
    std::set<std::string> timeline_ids() const;

    /// Label assigned by one annotator to one post; implicit O when the
    /// annotator left no record.
    Label label_of(const std::string& timeline_id, const std::string& post_id,
                   const std::string& annotator_id) const;

    /// Full record of one annotator for one post, or nullptr when the
    /// annotator left none.
    const AnnotationRecord* find(const std::string& timeline_id, const std::string& post_id,
                                 const std::string& annotator_id) const;

private:
    std::vector<AnnotationRecord> records_;
    // (timeline_id, post_id, annotator_id) -> index into records_
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index_;
};

enum class AgreementMode {
    perfect,   // all annotators agree
    majority,  // at least two annotators agree
};

/// Per-label positive agreement: |intersection of annotator post sets| over
/// |union| in perfect mode, |posts marked by >= 2 annotators| over |union|
/// in majority mode. Pools posts across all annotated timelines. Returns
/// nullopt when the union is empty (never 0). The timelines supply each
/// post universe so that implicit-O annotations resolve.
std::optional<double> positive_agreement(const AnnotationSet& ann,
                                         const std::vector<Timeline>& timelines, Label label,
                                         AgreementMode mode);

/// Majority-vote gold standard for one timeline: a post is IS when at
/// least two annotators said IS, else IE when at least two said IE, else
/// O. Complete disagreement therefore resolves to O. Roles are carried
/// through as auxiliary data only.
LabelsRecord derive_gold(const AnnotationSet& ann, const Timeline& timeline);

}  // namespace moc::annotation
