// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace moc::models {

/// Sparse feature vector; entries sorted by index, unique indices.
struct SparseVec {
    std::vector<std::pair<std::uint32_t, double>> entries;

    double squared_norm() const;
    double norm() const;
    bool empty() const noexcept { return entries.empty(); }
};

double dot(const SparseVec& a, const SparseVec& b);
/// Cosine similarity, defined as 0 when either vector is zero.
double cosine(const SparseVec& a, const SparseVec& b);
SparseVec from_dense(std::span<const double> values);

/// Token vocabulary with smoothed document frequencies:
/// idf = ln((1 + N) / (1 + df)) + 1. Fitted on training documents only.
class TfidfVocabulary {
public:
    /// Throws EmptyVocabulary when no token occurs in the corpus.
    static TfidfVocabulary fit(std::span<const std::string> documents);

    /// Raw term count times idf, L2-normalized. Tokens absent from the
    /// vocabulary are ignored.
    SparseVec transform(const std::string& document) const;

    std::size_t size() const noexcept { return index_.size(); }
    std::size_t corpus_size() const noexcept { return n_documents_; }
    /// (index, document frequency) of a token, or (npos, 0) when unknown.
    static constexpr std::uint32_t npos = UINT32_MAX;
    std::pair<std::uint32_t, std::size_t> lookup(const std::string& token) const;

private:
    std::map<std::string, std::uint32_t> index_;
    std::vector<std::size_t> df_;
    std::vector<double> idf_;
    std::size_t n_documents_ = 0;
};

}  // namespace moc::models
