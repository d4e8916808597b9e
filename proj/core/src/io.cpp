// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>

#include "moc/errors.hpp"

namespace moc {

namespace {

using json = nlohmann::ordered_json;

// ---- reading helpers -----------------------------------------------------

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open \"" + file.string() + "\" for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open \"" + file.string() + "\" for writing");
    return out;
}

/// Calls fn(object, line_number) for every record line. Blank lines are
/// skipped, or rejected in strict mode; anything that is not a JSON object
/// is a ParseError.
template <typename Fn>
void for_each_record(const std::filesystem::path& file, const ParseOptions& opts, Fn&& fn) {
    std::ifstream in = open_input(file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (opts.strict) throw ParseError("blank line in strict mode", line_no);
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) throw ParseError("record is not a JSON object", line_no);
        try {
            fn(obj, line_no);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
}

const json& require_field(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"", line);
    return *it;
}

std::string get_string(const json& obj, const char* key, std::size_t line) {
    const json& v = require_field(obj, key, line);
    if (!v.is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string", line);
    return v.get<std::string>();
}

const json& get_array(const json& obj, const char* key, std::size_t line) {
    const json& v = require_field(obj, key, line);
    if (!v.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array", line);
    return v;
}

JsonExtras collect_extras(const json& obj, std::initializer_list<const char*> known,
                          std::size_t line, const ParseOptions& opts) {
    JsonExtras extras;
    for (const auto& [key, value] : obj.items()) {
        const bool is_known =
            std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        if (is_known) continue;
        if (opts.strict) throw ParseError("unknown field \"" + key + "\" in strict mode", line);
        extras.emplace_back(key, value.dump());
    }
    return extras;
}

void emit_extras(json& obj, const JsonExtras& extras) {
    for (const auto& [key, value] : extras) obj[key] = json::parse(value);
}

void write_lines(std::ofstream& out, const std::filesystem::path& file,
                 const std::vector<json>& lines) {
    for (const json& j : lines) out << j.dump() << '\n';
    out.flush();
    if (!out.good()) throw Error("failed writing \"" + file.string() + "\"");
}

}  // namespace

std::string to_string(Role r) {
    switch (r) {
        case Role::none:
            return "none";
        case Role::switch_start:
            return "switch_start";
        case Role::escalation_peak:
            return "escalation_peak";
        case Role::in_region:
            return "in_region";
    }
    throw DomainError("unknown role value " + std::to_string(static_cast<int>(r)));
}

Role role_from_string(const std::string& s) {
    if (s == "none") return Role::none;
    if (s == "switch_start") return Role::switch_start;
    if (s == "escalation_peak") return Role::escalation_peak;
    if (s == "in_region") return Role::in_region;
    throw DomainError("unknown role \"" + s + "\"");
}

// ---- posts ---------------------------------------------------------------

std::vector<Post> read_posts(const std::filesystem::path& file, const ParseOptions& opts) {
    std::vector<Post> out;
    for_each_record(file, opts, [&](const json& obj, std::size_t line) {
        Post p;
        p.user_id = get_string(obj, "user_id", line);
        p.post_id = get_string(obj, "post_id", line);
        p.timestamp = Instant::parse(get_string(obj, "timestamp", line));
        p.text = get_string(obj, "text", line);
        p.extras = collect_extras(obj, {"user_id", "post_id", "timestamp", "text"}, line, opts);
        out.push_back(std::move(p));
    });
    return out;
}

void write_posts(const std::filesystem::path& file, const std::vector<Post>& posts) {
    std::ofstream out = open_output(file);
    std::vector<json> lines;
    lines.reserve(posts.size());
    for (const Post& p : posts) {
        json j;
        j["user_id"] = p.user_id;
        j["post_id"] = p.post_id;
        j["timestamp"] = p.timestamp.to_string();
        j["text"] = p.text;
        emit_extras(j, p.extras);
        lines.push_back(std::move(j));
    }
    write_lines(out, file, lines);
}

// ---- timelines -----------------------------------------------------------

TimelinesLoad read_timelines(const std::filesystem::path& file, const std::vector<Post>& posts,
                             const ParseOptions& opts) {
    std::map<std::string, const Post*> by_id;
    for (const Post& p : posts) {
        auto [it, inserted] = by_id.emplace(p.post_id, &p);
        if (!inserted) throw Error("duplicate post_id \"" + p.post_id + "\" in posts collection");
    }

    TimelinesLoad load;
    std::set<std::string> seen_ids;
    for_each_record(file, opts, [&](const json& obj, std::size_t line) {
        Timeline t;
        t.timeline_id = get_string(obj, "timeline_id", line);
        if (!seen_ids.insert(t.timeline_id).second) {
            throw ParseError("duplicate timeline_id \"" + t.timeline_id + "\"", line);
        }
        t.user_id = get_string(obj, "user_id", line);
        t.anchor = Date::parse(get_string(obj, "anchor", line));
        const json& ids = get_array(obj, "post_ids", line);
        std::set<std::string> seen_posts;
        for (const json& id : ids) {
            if (!id.is_string()) throw ParseError("post_ids entries must be strings", line);
            const std::string pid = id.get<std::string>();
            if (!seen_posts.insert(pid).second) {
                throw ParseError("duplicate post id \"" + pid + "\" within timeline", line);
            }
            auto it = by_id.find(pid);
            if (it == by_id.end()) {
                throw ParseError("post id \"" + pid + "\" not present in posts file", line);
            }
            if (it->second->user_id != t.user_id) {
                throw ParseError("post \"" + pid + "\" belongs to user \"" + it->second->user_id +
                                     "\", not \"" + t.user_id + "\"",
                                 line);
            }
            t.posts.push_back(*it->second);
        }
        std::sort(t.posts.begin(), t.posts.end(), [](const Post& a, const Post& b) {
            if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
            return a.post_id < b.post_id;
        });
        t.extras = collect_extras(obj, {"timeline_id", "user_id", "anchor", "post_ids"}, line, opts);
        if (t.posts.size() < 10 || t.posts.size() > 150) {
            load.warnings.push_back("timeline \"" + t.timeline_id + "\" has " +
                                    std::to_string(t.posts.size()) +
                                    " posts, outside the standard 10..150 range");
        }
        load.timelines.push_back(std::move(t));
    });
    return load;
}

void write_timelines(const std::filesystem::path& file, const std::vector<Timeline>& timelines) {
    std::ofstream out = open_output(file);
    std::vector<json> lines;
    lines.reserve(timelines.size());
    for (const Timeline& t : timelines) {
        json j;
        j["timeline_id"] = t.timeline_id;
        j["user_id"] = t.user_id;
        j["anchor"] = t.anchor.to_string();
        json ids = json::array();
        for (const Post& p : t.posts) ids.push_back(p.post_id);
        j["post_ids"] = std::move(ids);
        emit_extras(j, t.extras);
        lines.push_back(std::move(j));
    }
    write_lines(out, file, lines);
}

// ---- labels --------------------------------------------------------------

std::vector<LabelsRecord> read_labels(const std::filesystem::path& file, const ParseOptions& opts) {
    std::vector<LabelsRecord> out;
    std::set<std::string> seen_ids;
    for_each_record(file, opts, [&](const json& obj, std::size_t line) {
        LabelsRecord r;
        r.timeline_id = get_string(obj, "timeline_id", line);
        if (!seen_ids.insert(r.timeline_id).second) {
            throw ParseError("duplicate timeline_id \"" + r.timeline_id + "\"", line);
        }
        for (const json& l : get_array(obj, "labels", line)) {
            if (!l.is_string()) throw ParseError("labels entries must be strings", line);
            r.labels.push_back(label_from_string(l.get<std::string>()));
        }
        if (obj.contains("roles")) {
            for (const json& x : get_array(obj, "roles", line)) {
                if (!x.is_string()) throw ParseError("roles entries must be strings", line);
                r.roles.push_back(role_from_string(x.get<std::string>()));
            }
            if (r.roles.size() != r.labels.size()) {
                throw ParseError("roles length " + std::to_string(r.roles.size()) +
                                     " does not match labels length " +
                                     std::to_string(r.labels.size()),
                                 line);
            }
        }
        r.extras = collect_extras(obj, {"timeline_id", "labels", "roles"}, line, opts);
        out.push_back(std::move(r));
    });
    return out;
}

void write_labels(const std::filesystem::path& file, const std::vector<LabelsRecord>& records) {
    std::ofstream out = open_output(file);
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const LabelsRecord& r : records) {
        json j;
        j["timeline_id"] = r.timeline_id;
        json labels = json::array();
        for (Label l : r.labels) labels.push_back(to_string(l));
        j["labels"] = std::move(labels);
        if (!r.roles.empty()) {
            json roles = json::array();
            for (Role x : r.roles) roles.push_back(to_string(x));
            j["roles"] = std::move(roles);
        }
        emit_extras(j, r.extras);
        lines.push_back(std::move(j));
    }
    write_lines(out, file, lines);
}

// ---- annotations ---------------------------------------------------------

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& file,
                                               const ParseOptions& opts) {
    std::vector<AnnotationRecord> out;
    for_each_record(file, opts, [&](const json& obj, std::size_t line) {
        AnnotationRecord r;
        r.timeline_id = get_string(obj, "timeline_id", line);
        r.post_id = get_string(obj, "post_id", line);
        r.annotator_id = get_string(obj, "annotator_id", line);
        r.label = label_from_string(get_string(obj, "label", line));
        r.role = role_from_string(get_string(obj, "role", line));
        r.extras = collect_extras(obj, {"timeline_id", "post_id", "annotator_id", "label", "role"},
                                  line, opts);
        out.push_back(std::move(r));
    });
    return out;
}

void write_annotations(const std::filesystem::path& file,
                       const std::vector<AnnotationRecord>& records) {
    std::ofstream out = open_output(file);
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const AnnotationRecord& r : records) {
        json j;
        j["timeline_id"] = r.timeline_id;
        j["post_id"] = r.post_id;
        j["annotator_id"] = r.annotator_id;
        j["label"] = to_string(r.label);
        j["role"] = to_string(r.role);
        emit_extras(j, r.extras);
        lines.push_back(std::move(j));
    }
    write_lines(out, file, lines);
}

// ---- vectors -------------------------------------------------------------

std::vector<VectorRecord> read_vectors(const std::filesystem::path& file,
                                       const ParseOptions& opts) {
    std::vector<VectorRecord> out;
    for_each_record(file, opts, [&](const json& obj, std::size_t line) {
        VectorRecord r;
        r.timeline_id = get_string(obj, "timeline_id", line);
        r.post_id = get_string(obj, "post_id", line);
        for (const json& v : get_array(obj, "vector", line)) {
            if (!v.is_number()) throw ParseError("vector entries must be numbers", line);
            r.values.push_back(v.get<double>());
        }
        r.extras = collect_extras(obj, {"timeline_id", "post_id", "vector"}, line, opts);
        out.push_back(std::move(r));
    });
    return out;
}

void write_vectors(const std::filesystem::path& file, const std::vector<VectorRecord>& records) {
    std::ofstream out = open_output(file);
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const VectorRecord& r : records) {
        json j;
        j["timeline_id"] = r.timeline_id;
        j["post_id"] = r.post_id;
        j["vector"] = r.values;
        emit_extras(j, r.extras);
        lines.push_back(std::move(j));
    }
    write_lines(out, file, lines);
}

// ---- misc ----------------------------------------------------------------

std::vector<LabelSequence> to_label_sequences(const std::vector<LabelsRecord>& records) {
    std::vector<LabelSequence> out;
    out.reserve(records.size());
    for (const LabelsRecord& r : records) out.push_back(LabelSequence{r.timeline_id, r.labels});
    return out;
}

void write_json_document(const std::filesystem::path& file, const nlohmann::ordered_json& doc) {
    std::ofstream out = open_output(file);
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out.good()) throw Error("failed writing \"" + file.string() + "\"");
}

nlohmann::ordered_json read_json_document(const std::filesystem::path& file) {
    std::ifstream in = open_input(file);
    try {
        return nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::ordered_json::exception& e) {
        throw Error("invalid JSON document \"" + file.string() + "\": " + e.what());
    }
}

}  // namespace moc
