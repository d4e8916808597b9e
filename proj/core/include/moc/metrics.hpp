// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "moc/types.hpp"

namespace moc::metrics {

/// Metric value that may be undefined (0-denominator). Undefined values
/// serialize as null and are never conflated with 0.
using Value = std::optional<double>;

struct ClassScores {
    Value precision;
    Value recall;
    Value f1;
};

struct PrecisionRecall {
    Value precision;
    Value recall;
};

struct CoverageScores {
    Value c_p;
    Value c_r;
};

/// Post-level precision/recall/F1, pooled over all posts of all timelines
/// (micro per class; this pooling is what makes an all-None predictor's O
/// row equal the corpus label distribution). per_label is indexed by the
/// numeric Label value. The macro column averages the three classes with
/// undefined entries counted as 0, matching the reference table
/// convention; it is null only if all three are undefined.
struct PostLevelResult {
    std::array<ClassScores, kNumLabels> per_label;
    ClassScores macro;
};

PostLevelResult post_level(std::span<const LabelSequence> gold, std::span<const LabelSequence> pred);

/// Maximum one-to-one matching size between two ascending index sets under
/// the constraint |gold - pred| <= w. Greedy two-pointer; optimal for
/// interval constraints on a line.
std::size_t windowed_match_count(std::span<const std::size_t> gold_idx,
                                 std::span<const std::size_t> pred_idx, std::size_t w);

/// Windowed precision/recall for one timeline and one label: a prediction
/// counts as correct if it matches a gold post of the same label within w
/// posts, each gold and each predicted post usable at most once.
PrecisionRecall windowed(const LabelSequence& gold, const LabelSequence& pred, Label label,
                         std::size_t w);

/// Mean over timelines where the value is defined; null when undefined
/// everywhere.
PrecisionRecall windowed_macro(std::span<const LabelSequence> gold,
                               std::span<const LabelSequence> pred, Label label, std::size_t w);

/// Region-coverage scores for one timeline and one label. Each gold region
/// is credited with its best intersection-over-union against the predicted
/// regions, weighted by region size (C_r); C_p swaps the roles. Null when
/// the respective region set is empty.
CoverageScores coverage(const LabelSequence& gold, const LabelSequence& pred, Label label);

CoverageScores coverage_macro(std::span<const LabelSequence> gold,
                              std::span<const LabelSequence> pred, Label label);

struct LengthBucket {
    /// Inclusive upper bound of region lengths mapped here; SIZE_MAX for
    /// the open-ended final bucket.
    std::size_t upper;
    std::size_t posts = 0;
    std::size_t correct = 0;
    Value recall;
    std::string name;  // e.g. "3", "5-9", "10+"
};

/// Recall per gold-region length bucket: every post of a gold region of
/// `label` counts toward the bucket holding the region's length; recall is
/// the fraction of those posts the prediction labeled correctly.
/// bucket_upper_bounds must ascend; an open-ended bucket is appended.
std::vector<LengthBucket> recall_by_region_length(std::span<const LabelSequence> gold,
                                                  std::span<const LabelSequence> pred, Label label,
                                                  std::span<const std::size_t> bucket_upper_bounds);

struct ReportConfig {
    std::vector<std::size_t> windows = {0, 1, 2, 3};
    std::vector<Label> labels = {Label::IS, Label::IE, Label::O};
    bool per_timeline = false;
    bool with_recall_by_length = false;
    Label recall_by_length_label = Label::IE;
    std::vector<std::size_t> length_buckets = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

/// Full evaluation report: post-level scores, windowed scores per w, and
/// coverage, each per label plus the null-as-zero macro column.
struct MetricsReport {
    PostLevelResult post_level;
    // w -> per-label P/R (indexed by Label value) + macro.
    std::map<std::size_t, std::array<PrecisionRecall, kNumLabels>> windowed;
    std::map<std::size_t, PrecisionRecall> windowed_macro;
    std::array<CoverageScores, kNumLabels> coverage;
    CoverageScores coverage_macro;
    std::vector<LengthBucket> recall_by_length;
    Label recall_by_length_label = Label::IE;
    bool has_recall_by_length = false;
    nlohmann::ordered_json per_timeline;  // empty unless requested
};

/// Runs the full suite. Gold and pred must cover the same timeline ids
/// with equal lengths; anything else is an AlignmentError.
MetricsReport evaluate(std::span<const LabelSequence> gold, std::span<const LabelSequence> pred,
                       const ReportConfig& config = {});

nlohmann::ordered_json report_to_json(const MetricsReport& report);

/// Flat CSV export: section,label,metric,value with empty value for null.
std::string report_to_csv(const MetricsReport& report);

/// Renders a report JSON document as a fixed-width table (classes IS, IE,
/// O and macro; P/R/F1, then windowed P_w/R_w, then coverage C_p/C_r).
/// Undefined values print as "--".
std::string render_report_table(const nlohmann::ordered_json& report);

}  // namespace moc::metrics
