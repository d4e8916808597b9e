// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/text.hpp"

#include <cctype>
#include <cstdint>

namespace moc::text {

namespace {

struct Codepoint {
    std::uint32_t value = 0;
    std::size_t bytes = 1;
};

/// Decodes the UTF-8 codepoint at position i; malformed bytes decode as
/// single Latin-1 codepoints so tokenization never fails.
Codepoint decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {b0, 1};
    }
    if (i + len > s.size()) return {b0, 1};
    for (std::size_t k = 1; k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) return {b0, 1};
        cp = (cp << 6) | (bk & 0x3F);
    }
    return {cp, len};
}

bool is_punctuation_block(std::uint32_t cp) {
    return (cp >= 0xA0 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||   // Latin-1 punctuation
           (cp >= 0x2000 && cp <= 0x206F) ||                           // general punctuation
           (cp >= 0x3000 && cp <= 0x303F);                             // CJK punctuation
}

bool is_word_cp(std::uint32_t cp) {
    if (cp < 0x80) {
        return std::isalnum(static_cast<int>(cp)) != 0;
    }
    return !is_punctuation_block(cp);
}

bool is_apostrophe(std::uint32_t cp) { return cp == '\'' || cp == 0x2019; }

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < s.size()) {
        const Codepoint cp = decode(s, i);
        if (is_word_cp(cp.value)) {
            if (cp.value < 0x80) {
                current.push_back(
                    static_cast<char>(std::tolower(static_cast<int>(cp.value))));
            } else {
                current.append(s.substr(i, cp.bytes));
            }
            i += cp.bytes;
            continue;
        }
        if (is_apostrophe(cp.value) && !current.empty() && i + cp.bytes < s.size()) {
            const Codepoint next = decode(s, i + cp.bytes);
            if (is_word_cp(next.value)) {
                current.append(s.substr(i, cp.bytes));
                i += cp.bytes;
                continue;
            }
        }
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
        i += cp.bytes;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> bigrams(std::span<const std::string> tokens) {
    std::vector<std::string> out;
    if (tokens.size() < 2) return out;
    out.reserve(tokens.size() - 1);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        out.push_back(tokens[i] + " " + tokens[i + 1]);
    }
    return out;
}

}  // namespace moc::text
