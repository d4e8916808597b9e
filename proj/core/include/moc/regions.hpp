// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "moc/types.hpp"

namespace moc {

/// Splits a label sequence into its maximal same-label runs, in order.
/// The returned regions partition [0, n); concatenating them reconstructs
/// the sequence. Throws EmptySequence on an empty input.
std::vector<Region> extract_regions(const LabelSequence& seq);

/// Regions of extract_regions(seq) carrying the given label.
std::vector<Region> regions_with_label(const LabelSequence& seq, Label label);

}  // namespace moc
