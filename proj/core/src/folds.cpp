// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/folds.hpp"

#include "moc/errors.hpp"
#include "moc/rng.hpp"

namespace moc {

FoldAssignment split_folds(const std::vector<std::string>& timeline_ids, int k,
                           std::uint64_t seed) {
    if (k < 2) {
        throw InvalidFoldCount("fold count must be at least 2, got " + std::to_string(k));
    }
    if (static_cast<std::size_t>(k) > timeline_ids.size()) {
        throw InvalidFoldCount("fold count " + std::to_string(k) + " exceeds the " +
                               std::to_string(timeline_ids.size()) + " available timelines");
    }
    std::vector<std::string> ids = timeline_ids;
    Rng rng(seed);
    rng.shuffle(ids);

    FoldAssignment out;
    out.k = k;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto [it, inserted] = out.fold_of.emplace(ids[i], static_cast<int>(i % k));
        if (!inserted) {
            throw InvalidFoldCount("duplicate timeline id \"" + ids[i] + "\" in fold split input");
        }
    }
    return out;
}

}  // namespace moc
