// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moc::text {

/// Lowercased word tokens. Words are maximal runs of letters and digits
/// (UTF-8 aware; non-ASCII codepoints count as letters unless they fall in
/// a punctuation block), with an apostrophe between letters kept inside
/// the word. No stemming.
std::vector<std::string> tokenize(std::string_view s);

/// Adjacent token pairs joined with a single space.
std::vector<std::string> bigrams(std::span<const std::string> tokens);

}  // namespace moc::text
