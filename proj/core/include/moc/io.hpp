// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "moc/types.hpp"

namespace moc {

/// Annotator role attached to a post-level annotation. Auxiliary data:
/// roles never influence the three-way label.
enum class Role : std::uint8_t {
    none = 0,
    switch_start,
    escalation_peak,
    in_region,
};

std::string to_string(Role r);
Role role_from_string(const std::string& s);

/// One line of an annotations file.
struct AnnotationRecord {
    std::string timeline_id;
    std::string post_id;
    std::string annotator_id;
    Label label = Label::O;
    Role role = Role::none;
    JsonExtras extras;
};

/// One line of a labels file (gold or predicted). `roles` is empty when the
/// file carries no auxiliary role column.
struct LabelsRecord {
    std::string timeline_id;
    std::vector<Label> labels;
    std::vector<Role> roles;
    JsonExtras extras;
};

/// One line of an external post-vector file.
struct VectorRecord {
    std::string timeline_id;
    std::string post_id;
    std::vector<double> values;
    JsonExtras extras;
};

struct ParseOptions {
    /// Reject unknown fields and blank lines instead of tolerating them.
    bool strict = false;
};

/// Result of resolving a timelines file against its posts file. Warnings
/// flag external timelines outside the standard 10..150 post range; they
/// are loaded regardless so that arbitrary prediction inputs evaluate.
struct TimelinesLoad {
    std::vector<Timeline> timelines;
    std::vector<std::string> warnings;
};

// Line-oriented readers. Every reader throws ParseError with the 1-based
// line number on a malformed record, and returns an empty collection for an
// empty file. Unknown fields are preserved and re-emitted after the known
// ones unless opts.strict is set.

std::vector<Post> read_posts(const std::filesystem::path& file, const ParseOptions& opts = {});
TimelinesLoad read_timelines(const std::filesystem::path& file, const std::vector<Post>& posts,
                             const ParseOptions& opts = {});
std::vector<LabelsRecord> read_labels(const std::filesystem::path& file,
                                      const ParseOptions& opts = {});
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& file,
                                               const ParseOptions& opts = {});
std::vector<VectorRecord> read_vectors(const std::filesystem::path& file,
                                       const ParseOptions& opts = {});

// Canonical writers: one compact JSON object per line, keys in schema
// order, trailing newline on every line. Writing what a reader produced
// reproduces a canonical file byte for byte.

void write_posts(const std::filesystem::path& file, const std::vector<Post>& posts);
void write_timelines(const std::filesystem::path& file, const std::vector<Timeline>& timelines);
void write_labels(const std::filesystem::path& file, const std::vector<LabelsRecord>& records);
void write_annotations(const std::filesystem::path& file,
                       const std::vector<AnnotationRecord>& records);
void write_vectors(const std::filesystem::path& file, const std::vector<VectorRecord>& records);

/// Label sequences without auxiliary roles, ready for metric computations.
std::vector<LabelSequence> to_label_sequences(const std::vector<LabelsRecord>& records);

/// Writes an arbitrary JSON document with a trailing newline (reports,
/// summaries). Indented for human consumption.
void write_json_document(const std::filesystem::path& file, const nlohmann::ordered_json& doc);
nlohmann::ordered_json read_json_document(const std::filesystem::path& file);

}  // namespace moc
