// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation microbenchmarks: the full report against corpus size, the
// windowed matcher on dense index sets, and region coverage.

#include <benchmark/benchmark.h>

#include <vector>

#include "moc/metrics.hpp"
#include "moc/rng.hpp"
#include "moc/types.hpp"

namespace {

using moc::Label;
using moc::LabelSequence;

std::vector<LabelSequence> make_corpus(int timelines, std::uint64_t seed) {
    moc::Rng rng(seed);
    std::vector<LabelSequence> out;
    out.reserve(static_cast<std::size_t>(timelines));
    for (int t = 0; t < timelines; ++t) {
        LabelSequence seq;
        seq.timeline_id = "t" + std::to_string(t);
        const std::size_t n = 20 + rng.below(120);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t u = rng.below(20);
            seq.labels.push_back(u < 17 ? Label::O : (u < 18 ? Label::IS : Label::IE));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

/// Same ids and lengths as `gold`, labels re-drawn.
std::vector<LabelSequence> permuted_prediction(const std::vector<LabelSequence>& gold,
                                               std::uint64_t seed) {
    moc::Rng rng(seed);
    std::vector<LabelSequence> out = gold;
    for (LabelSequence& seq : out) {
        for (Label& l : seq.labels) {
            const std::uint64_t u = rng.below(20);
            l = u < 17 ? Label::O : (u < 18 ? Label::IS : Label::IE);
        }
    }
    return out;
}

void BM_Evaluate(benchmark::State& state) {
    const auto gold = make_corpus(static_cast<int>(state.range(0)), 1);
    const auto pred = permuted_prediction(gold, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(moc::metrics::evaluate(gold, pred));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(100)->Arg(500)->Complexity();

void BM_PostLevel(benchmark::State& state) {
    const auto gold = make_corpus(static_cast<int>(state.range(0)), 1);
    const auto pred = permuted_prediction(gold, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(moc::metrics::post_level(gold, pred));
    }
}
BENCHMARK(BM_PostLevel)->Arg(100)->Arg(500);

void BM_WindowedMatch(benchmark::State& state) {
    moc::Rng rng(7);
    std::vector<std::size_t> gold_idx, pred_idx;
    for (std::size_t i = 0; i < 2000; ++i) {
        if (rng.below(3) == 0) gold_idx.push_back(i);
        if (rng.below(3) == 0) pred_idx.push_back(i);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            moc::metrics::windowed_match_count(gold_idx, pred_idx, 3));
    }
}
BENCHMARK(BM_WindowedMatch);

void BM_Coverage(benchmark::State& state) {
    const auto gold = make_corpus(1, 11);
    const auto pred = permuted_prediction(gold, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(moc::metrics::coverage(gold[0], pred[0], Label::IE));
    }
}
BENCHMARK(BM_Coverage);

}  // namespace

BENCHMARK_MAIN();
