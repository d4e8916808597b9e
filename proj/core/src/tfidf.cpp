// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/tfidf.hpp"

#include <cmath>
#include <set>

#include "moc/errors.hpp"
#include "moc/text.hpp"

namespace moc::models {

double SparseVec::squared_norm() const {
    double s = 0.0;
    for (const auto& [idx, v] : entries) s += v * v;
    return s;
}

double SparseVec::norm() const { return std::sqrt(squared_norm()); }

double dot(const SparseVec& a, const SparseVec& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        const auto [ia, va] = a.entries[i];
        const auto [ib, vb] = b.entries[j];
        if (ia == ib) {
            s += va * vb;
            ++i;
            ++j;
        } else if (ia < ib) {
            ++i;
        } else {
            ++j;
        }
    }
    return s;
}

double cosine(const SparseVec& a, const SparseVec& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

SparseVec from_dense(std::span<const double> values) {
    SparseVec out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) out.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
    }
    return out;
}

TfidfVocabulary TfidfVocabulary::fit(std::span<const std::string> documents) {
    TfidfVocabulary vocab;
    vocab.n_documents_ = documents.size();
    std::map<std::string, std::size_t> df;
    for (const std::string& doc : documents) {
        std::set<std::string> seen;
        for (const std::string& tok : text::tokenize(doc)) seen.insert(tok);
        for (const std::string& tok : seen) ++df[tok];
    }
    if (df.empty()) throw EmptyVocabulary("no tokens found in the training corpus");

    vocab.df_.reserve(df.size());
    vocab.idf_.reserve(df.size());
    const double n = static_cast<double>(vocab.n_documents_);
    for (const auto& [tok, count] : df) {  // map order: indices follow sorted tokens
        const auto index = static_cast<std::uint32_t>(vocab.df_.size());
        vocab.index_.emplace(tok, index);
        vocab.df_.push_back(count);
        vocab.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return vocab;
}

SparseVec TfidfVocabulary::transform(const std::string& document) const {
    std::map<std::uint32_t, double> counts;
    for (const std::string& tok : text::tokenize(document)) {
        auto it = index_.find(tok);
        if (it != index_.end()) counts[it->second] += 1.0;
    }
    SparseVec out;
    out.entries.reserve(counts.size());
    for (const auto& [idx, count] : counts) {
        out.entries.emplace_back(idx, count * idf_[idx]);
    }
    const double norm = out.norm();
    if (norm > 0.0) {
        for (auto& [idx, v] : out.entries) v /= norm;
    }
    return out;
}

std::pair<std::uint32_t, std::size_t> TfidfVocabulary::lookup(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return {npos, 0};
    return {it->second, df_[it->second]};
}

}  // namespace moc::models
