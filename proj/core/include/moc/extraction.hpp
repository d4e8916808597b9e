// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moc/changepoint.hpp"
#include "moc/types.hpp"

namespace moc::extraction {

/// Per-user contiguous daily posting counts spanning the user's first to
/// last post date, zero-filled. Sorted by user_id.
std::vector<changepoint::CountSeries> daily_counts(const std::vector<Post>& posts);

struct ExtractionParams {
    int window_days = 7;
    std::size_t min_posts = 10;
    std::size_t max_posts = 150;
};

struct ExtractionSummary {
    std::size_t candidates = 0;
    std::size_t dropped_short = 0;
    std::size_t dropped_long = 0;
    std::size_t kept = 0;
    std::size_t sampled = 0;
};

/// Change points declared for one user's series.
struct UserChangePoints {
    std::string user_id;
    std::vector<changepoint::ChangePoint> changepoints;
};

/// Builds one candidate timeline per change point: every post of the user
/// whose UTC calendar date lies within window_days of the anchor, kept iff
/// the post count is within [min_posts, max_posts]. Filtered candidates
/// are dropped silently and tallied in the summary. Output sorted by
/// user_id then anchor.
std::vector<Timeline> extract_timelines(const std::vector<Post>& posts,
                                        const std::vector<UserChangePoints>& changepoints,
                                        const ExtractionParams& params, ExtractionSummary* summary);

/// Uniform sample of n timelines without replacement, deterministic per
/// seed. With one_per_user, n distinct users are drawn first and one
/// candidate picked per user. Throws InsufficientCandidates when fewer
/// eligible users (or timelines) exist than requested.
std::vector<Timeline> sample_timelines(const std::vector<Timeline>& candidates, std::size_t n,
                                       bool one_per_user, std::uint64_t seed);

struct LengthStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t min = 0;
    std::size_t max = 0;
    std::size_t total_posts = 0;
};

/// Count, mean, SD, min, max of timeline lengths.
LengthStats length_stats(const std::vector<Timeline>& timelines);

}  // namespace moc::extraction
