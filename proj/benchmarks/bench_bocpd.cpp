// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Detector microbenchmarks: posterior recursion cost against series length
// (with and without run-length truncation) and the declaration sweep.

#include <benchmark/benchmark.h>

#include "moc/changepoint.hpp"
#include "moc/rng.hpp"

namespace {

namespace cp = moc::changepoint;

cp::CountSeries make_series(int days) {
    moc::Rng rng(42);
    cp::CountSeries s;
    s.user_id = "u";
    s.start_date = moc::Date::parse("2024-01-01");
    s.counts.reserve(static_cast<std::size_t>(days));
    for (int d = 0; d < days; ++d) {
        s.counts.push_back(
            static_cast<std::uint32_t>(rng.poisson(d < days / 2 ? 1.5 : 6.0)));
    }
    return s;
}

void BM_RunBocpd(benchmark::State& state) {
    const cp::CountSeries series = make_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp::run_bocpd(series, {1.0, 1.0}, 0.01));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunBocpd)->Arg(60)->Arg(180)->Arg(365)->Arg(730)->Complexity();

void BM_RunBocpdNoTruncation(benchmark::State& state) {
    const cp::CountSeries series = make_series(static_cast<int>(state.range(0)));
    cp::BocpdOptions options;
    options.truncation_threshold = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp::run_bocpd(series, {1.0, 1.0}, 0.01, options));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunBocpdNoTruncation)->Arg(60)->Arg(180)->Arg(365)->Arg(730)->Complexity();

void BM_DeclareChangepoints(benchmark::State& state) {
    const cp::CountSeries series = make_series(365);
    const cp::RunLengthPosterior posterior = cp::run_bocpd(series, {1.0, 1.0}, 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp::declare_changepoints(
            posterior, cp::BocpdDefaults::kRReset, cp::BocpdDefaults::kMassThreshold,
            cp::BocpdDefaults::kMinGapDays));
    }
}
BENCHMARK(BM_DeclareChangepoints);

void BM_LogPredictive(benchmark::State& state) {
    std::uint32_t x = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp::log_poisson_gamma_predictive({3.5, 1.25}, x));
        x = (x + 1) % 32;
    }
}
BENCHMARK(BM_LogPredictive);

}  // namespace

BENCHMARK_MAIN();
