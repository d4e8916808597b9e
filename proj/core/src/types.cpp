// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/types.hpp"

#include "moc/errors.hpp"

namespace moc {

std::string to_string(Label l) {
    switch (l) {
        case Label::O:
            return "O";
        case Label::IS:
            return "IS";
        case Label::IE:
            return "IE";
    }
    throw DomainError("unknown label value " + std::to_string(static_cast<int>(l)));
}

Label label_from_string(const std::string& s) {
    if (s == "O") return Label::O;
    if (s == "IS") return Label::IS;
    if (s == "IE") return Label::IE;
    throw DomainError("unknown label \"" + s + "\"");
}

void check_alignment(const LabelSequence& seq, const Timeline& timeline) {
    if (seq.timeline_id != timeline.timeline_id) {
        throw AlignmentError("label sequence names timeline \"" + seq.timeline_id +
                             "\" but was checked against \"" + timeline.timeline_id + "\"");
    }
    if (seq.labels.size() != timeline.posts.size()) {
        throw AlignmentError("timeline \"" + timeline.timeline_id + "\" has " +
                             std::to_string(timeline.posts.size()) + " posts but " +
                             std::to_string(seq.labels.size()) + " labels");
    }
}

}  // namespace moc
