// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "moc/errors.hpp"
#include "moc/time.hpp"

namespace moc {

/// Three-way post label. The numeric order (O < IS < IE) is the canonical
/// serialization order.
enum class Label : std::uint8_t {
    O = 0,   // no moment of change
    IS = 1,  // switch: sudden mood shift
    IE = 2,  // escalation: gradual mood progression
};

inline constexpr std::array<Label, 3> kAllLabels = {Label::O, Label::IS, Label::IE};
inline constexpr std::size_t kNumLabels = 3;

std::string to_string(Label l);
Label label_from_string(const std::string& s);

/// Unknown JSON fields carried through a read/write round trip: pairs of
/// key and compact-serialized value, in input order. Canonical files have
/// none.
using JsonExtras = std::vector<std::pair<std::string, std::string>>;

/// One user message; the atomic unit of a timeline.
struct Post {
    std::string user_id;
    std::string post_id;
    Instant timestamp;
    std::string text;  // may be empty, never absent
    JsonExtras extras;
};

/// Ordered post sequence for one user around a detected change point.
/// Posts ascend by timestamp, ties broken by post_id.
struct Timeline {
    std::string timeline_id;
    std::string user_id;
    std::vector<Post> posts;
    Date anchor;
    JsonExtras extras;

    std::size_t size() const noexcept { return posts.size(); }
};

/// Per-timeline labels, index-aligned with the timeline's posts.
struct LabelSequence {
    std::string timeline_id;
    std::vector<Label> labels;

    std::size_t size() const noexcept { return labels.size(); }
};

/// Maximal contiguous same-label run. Inclusive index range over timeline
/// positions; start <= end always holds.
struct Region {
    Label label;
    std::size_t start;
    std::size_t end;

    std::size_t length() const noexcept { return end - start + 1; }
    bool operator==(const Region&) const = default;
};

/// Mapping timeline_id -> fold index in [0, k). Always a partition of the
/// id set it was built from, with fold sizes differing by at most one.
struct FoldAssignment {
    int k = 0;
    std::map<std::string, int> fold_of;

    std::vector<std::string> ids_in_fold(int fold) const {
        std::vector<std::string> out;
        for (const auto& [id, f] : fold_of) {
            if (f == fold) out.push_back(id);
        }
        return out;
    }
};

/// Throws AlignmentError unless the sequence is index-aligned with the
/// timeline it names.
void check_alignment(const LabelSequence& seq, const Timeline& timeline);

}  // namespace moc
