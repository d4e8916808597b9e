// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moc/time.hpp"

namespace moc::changepoint {

/// Daily posting counts for one user. One entry per consecutive calendar
/// day starting at start_date; days without posts are explicit zeros.
struct CountSeries {
    std::string user_id;
    Date start_date;
    std::vector<std::uint32_t> counts;
};

/// Conjugate Gamma prior of the Poisson rate, shape/rate parameterization.
struct GammaParams {
    double shape = 1.0;  // alpha
    double rate = 1.0;   // beta

    bool valid() const noexcept { return shape > 0.0 && rate > 0.0; }
};

/// Run-length posterior of the detector. steps[t] is a probability vector
/// over run lengths r in [0, t]; each vector sums to 1. Run length r at
/// step t means the current segment began with observation t - r.
struct RunLengthPosterior {
    std::string user_id;
    Date start_date;
    std::vector<std::vector<double>> steps;

    std::size_t num_steps() const noexcept { return steps.size(); }
    /// argmax of the step-t vector.
    std::size_t map_run_length(std::size_t t) const;
    /// P(r_t <= r) at step t.
    double mass_at_most(std::size_t t, std::size_t r) const;
};

/// A declared change in posting frequency.
struct ChangePoint {
    Date date;
    /// P(r_t <= r_reset) on the day the declaration fired.
    double posterior_mass = 0.0;
};

/// Negative-Binomial predictive mass P(x | alpha, beta) of a Poisson
/// observation under a Gamma(alpha, beta) rate posterior, evaluated in log
/// space. Throws NumericalError if the result is not finite.
double poisson_gamma_predictive(const GammaParams& params, std::uint32_t x);
double log_poisson_gamma_predictive(const GammaParams& params, std::uint32_t x);

struct BocpdOptions {
    /// Run-length hypotheses whose posterior mass falls below this are
    /// dropped and the remainder renormalized, keeping each step linear
    /// time in practice. Zero disables truncation.
    double truncation_threshold = 1e-12;
};

/// Bayesian online change-point detection over a count series with the
/// Poisson-Gamma predictive model and a constant hazard. Deterministic;
/// all accumulation happens in log space. After observation 0 the
/// posterior is the point mass r = 0; thereafter growth mass is
/// prev * predictive * (1 - hazard) and change mass collects
/// prev * predictive * hazard, normalized per step. Sufficient statistics
/// follow the conjugate update alpha += x, beta += 1.
RunLengthPosterior run_bocpd(const CountSeries& series, const GammaParams& prior, double hazard,
                             const BocpdOptions& options = {});

/// Declaration rule over a run-length posterior: day t is declared iff
/// P(r_t <= r_reset) > mass_threshold and at least min_gap_days have
/// passed since the previous declaration. The series start counts as an
/// implicit previous declaration, so the initial point mass at r = 0
/// never fires. Output is sorted by date.
std::vector<ChangePoint> declare_changepoints(const RunLengthPosterior& posterior, int r_reset,
                                              double mass_threshold, int min_gap_days);

/// Detector defaults: weakly informative Gamma(1, 1) prior, one expected
/// change per 100 days, and a declaration gap matching the 7-day
/// extraction window.
struct BocpdDefaults {
    static constexpr double kAlpha = 1.0;
    static constexpr double kBeta = 1.0;
    static constexpr double kHazard = 0.01;
    static constexpr int kRReset = 2;
    static constexpr double kMassThreshold = 0.5;
    static constexpr int kMinGapDays = 7;
};

}  // namespace moc::changepoint
