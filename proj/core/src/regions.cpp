// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/regions.hpp"

#include "moc/errors.hpp"

namespace moc {

std::vector<Region> extract_regions(const LabelSequence& seq) {
    if (seq.labels.empty()) {
        throw EmptySequence("cannot extract regions from empty sequence \"" + seq.timeline_id +
                            "\"");
    }
    std::vector<Region> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= seq.labels.size(); ++i) {
        if (i == seq.labels.size() || seq.labels[i] != seq.labels[start]) {
            out.push_back(Region{seq.labels[start], start, i - 1});
            start = i;
        }
    }
    return out;
}

std::vector<Region> regions_with_label(const LabelSequence& seq, Label label) {
    std::vector<Region> out;
    for (const Region& r : extract_regions(seq)) {
        if (r.label == label) out.push_back(r);
    }
    return out;
}

}  // namespace moc
