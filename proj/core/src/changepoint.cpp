// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moc/errors.hpp"

namespace moc::changepoint {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const std::vector<double>& logs) {
    double m = kNegInf;
    for (double v : logs) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double v : logs) s += std::exp(v - m);
    return m + std::log(s);
}

/// One live run-length hypothesis with its conjugate posterior.
struct Hypothesis {
    std::size_t r = 0;
    double log_mass = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

}  // namespace

std::size_t RunLengthPosterior::map_run_length(std::size_t t) const {
    const std::vector<double>& v = steps.at(t);
    return static_cast<std::size_t>(
        std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

double RunLengthPosterior::mass_at_most(std::size_t t, std::size_t r) const {
    const std::vector<double>& v = steps.at(t);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size() && i <= r; ++i) s += v[i];
    return s;
}

double log_poisson_gamma_predictive(const GammaParams& params, std::uint32_t x) {
    if (!params.valid()) throw DomainError("Gamma parameters must be strictly positive");
    const double a = params.shape;
    const double b = params.rate;
    // ln C(x+a-1, x) + a ln(b/(b+1)) + x ln(1/(b+1))
    const double log_p = std::lgamma(x + a) - std::lgamma(a) - std::lgamma(x + 1.0) +
                         a * (std::log(b) - std::log1p(b)) - x * std::log1p(b);
    if (!std::isfinite(log_p)) {
        throw NumericalError("non-finite predictive log-probability");
    }
    return log_p;
}

double poisson_gamma_predictive(const GammaParams& params, std::uint32_t x) {
    const double p = std::exp(log_poisson_gamma_predictive(params, x));
    if (!std::isfinite(p)) throw NumericalError("non-finite predictive probability");
    return p;
}

RunLengthPosterior run_bocpd(const CountSeries& series, const GammaParams& prior, double hazard,
                             const BocpdOptions& options) {
    if (series.counts.empty()) throw EmptySequence("count series is empty");
    if (!prior.valid()) throw DomainError("Gamma prior must be strictly positive");
    if (!(hazard > 0.0 && hazard < 1.0)) {
        throw DomainError("hazard must lie strictly between 0 and 1");
    }

    RunLengthPosterior out;
    out.user_id = series.user_id;
    out.start_date = series.start_date;
    out.steps.reserve(series.counts.size());

    const double log_h = std::log(hazard);
    const double log_1mh = std::log1p(-hazard);

    // Step 0: the first observation opens the first segment with certainty.
    std::vector<Hypothesis> live;
    live.push_back(Hypothesis{0, 0.0, prior.shape + series.counts[0], prior.rate + 1.0});
    out.steps.push_back({1.0});

    for (std::size_t t = 1; t < series.counts.size(); ++t) {
        const std::uint32_t x = series.counts[t];

        std::vector<Hypothesis> next;
        next.reserve(live.size() + 1);
        // Change hypothesis: a fresh segment whose first observation x_t is
        // scored under the prior predictive. The previous masses sum to 1,
        // so their contribution to the log mass is zero.
        next.push_back(Hypothesis{0, log_h + log_poisson_gamma_predictive(prior, x),
                                  prior.shape + x, prior.rate + 1.0});
        // Growth hypotheses: each previous segment continues and absorbs x_t.
        for (const Hypothesis& h : live) {
            next.push_back(Hypothesis{h.r + 1,
                                      h.log_mass +
                                          log_poisson_gamma_predictive({h.alpha, h.beta}, x) +
                                          log_1mh,
                                      h.alpha + x, h.beta + 1.0});
        }

        std::vector<double> logs;
        logs.reserve(next.size());
        for (const Hypothesis& h : next) logs.push_back(h.log_mass);
        const double norm = logsumexp(logs);
        if (!std::isfinite(norm)) {
            throw NumericalError("run-length posterior mass vanished at step " +
                                 std::to_string(t));
        }

        double kept = 0.0;
        std::vector<Hypothesis> pruned;
        pruned.reserve(next.size());
        for (Hypothesis& h : next) {
            const double mass = std::exp(h.log_mass - norm);
            if (options.truncation_threshold > 0.0 && mass < options.truncation_threshold) {
                continue;
            }
            h.log_mass = mass;  // temporarily linear, renormalized below
            kept += mass;
            pruned.push_back(h);
        }
        if (pruned.empty() || kept <= 0.0) {
            throw NumericalError("truncation removed all run-length mass at step " +
                                 std::to_string(t));
        }

        std::vector<double> dist(t + 1, 0.0);
        for (Hypothesis& h : pruned) {
            const double mass = h.log_mass / kept;
            dist[h.r] = mass;
            h.log_mass = std::log(mass);
        }
        out.steps.push_back(std::move(dist));
        live = std::move(pruned);
    }
    return out;
}

std::vector<ChangePoint> declare_changepoints(const RunLengthPosterior& posterior, int r_reset,
                                              double mass_threshold, int min_gap_days) {
    if (r_reset < 0) throw DomainError("r_reset must be non-negative");
    if (!(mass_threshold > 0.0 && mass_threshold < 1.0)) {
        throw DomainError("mass threshold must lie strictly between 0 and 1");
    }
    std::vector<ChangePoint> out;
    // The series start acts as the previous declaration, so early steps
    // (including the certain r = 0 at step 0) sit inside the gap.
    std::int64_t last = 0;
    for (std::size_t t = 0; t < posterior.num_steps(); ++t) {
        const std::int64_t day = static_cast<std::int64_t>(t);
        if (day - last < min_gap_days) continue;
        const double mass = posterior.mass_at_most(t, static_cast<std::size_t>(r_reset));
        if (mass > mass_threshold) {
            out.push_back(ChangePoint{posterior.start_date + day, mass});
            last = day;
        }
    }
    return out;
}

}  // namespace moc::changepoint
