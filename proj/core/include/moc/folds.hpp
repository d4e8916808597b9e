// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moc/types.hpp"

namespace moc {

/// Deterministic k-fold split over timeline ids (never over posts).
/// Ids are shuffled with the seeded generator and dealt round-robin, so
/// fold sizes differ by at most one. Throws InvalidFoldCount when k < 2
/// or k exceeds the number of ids.
FoldAssignment split_folds(const std::vector<std::string>& timeline_ids, int k,
                           std::uint64_t seed);

}  // namespace moc
