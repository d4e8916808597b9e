// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "moc/errors.hpp"
#include "moc/regions.hpp"

namespace moc::metrics {

namespace {

using json = nlohmann::ordered_json;

/// Across-label macro: defined values summed, nulls contributing 0, divided
/// by the class count — the reference-table convention. Null only when
/// every class is undefined.
Value macro_over_labels(const std::array<Value, kNumLabels>& values) {
    bool any = false;
    double sum = 0.0;
    for (const Value& v : values) {
        if (v) {
            any = true;
            sum += *v;
        }
    }
    if (!any) return std::nullopt;
    return sum / static_cast<double>(kNumLabels);
}

/// Across-timeline macro: mean of defined values, null when none defined.
Value mean_defined(const std::vector<Value>& values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const Value& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

void check_pair(const LabelSequence& gold, const LabelSequence& pred) {
    if (gold.timeline_id != pred.timeline_id) {
        throw AlignmentError("gold sequence \"" + gold.timeline_id +
                             "\" paired with prediction \"" + pred.timeline_id + "\"");
    }
    if (gold.labels.size() != pred.labels.size()) {
        throw AlignmentError("timeline \"" + gold.timeline_id + "\": gold has " +
                             std::to_string(gold.labels.size()) + " labels, prediction has " +
                             std::to_string(pred.labels.size()));
    }
}

/// Pairs gold and prediction sequences by timeline id, requiring the same
/// id set on both sides and equal lengths per pair.
std::vector<std::pair<const LabelSequence*, const LabelSequence*>> paired(
    std::span<const LabelSequence> gold, std::span<const LabelSequence> pred) {
    std::map<std::string, const LabelSequence*> by_id;
    for (const LabelSequence& p : pred) {
        auto [it, inserted] = by_id.emplace(p.timeline_id, &p);
        if (!inserted) {
            throw AlignmentError("duplicate prediction for timeline \"" + p.timeline_id + "\"");
        }
    }
    std::vector<std::pair<const LabelSequence*, const LabelSequence*>> out;
    std::map<std::string, const LabelSequence*> seen;
    for (const LabelSequence& g : gold) {
        if (!seen.emplace(g.timeline_id, &g).second) {
            throw AlignmentError("duplicate gold sequence for timeline \"" + g.timeline_id + "\"");
        }
        auto it = by_id.find(g.timeline_id);
        if (it == by_id.end()) {
            throw AlignmentError("no prediction for timeline \"" + g.timeline_id + "\"");
        }
        check_pair(g, *it->second);
        out.emplace_back(&g, it->second);
    }
    if (by_id.size() != seen.size()) {
        for (const auto& [id, p] : by_id) {
            if (!seen.count(id)) {
                throw AlignmentError("prediction for unknown timeline \"" + id + "\"");
            }
        }
    }
    return out;
}

std::vector<std::size_t> label_indices(const LabelSequence& seq, Label label) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < seq.labels.size(); ++i) {
        if (seq.labels[i] == label) idx.push_back(i);
    }
    return idx;
}

double region_iou(const Region& a, const Region& b) {
    const std::size_t lo = std::max(a.start, b.start);
    const std::size_t hi = std::min(a.end, b.end);
    const std::size_t inter = hi >= lo ? hi - lo + 1 : 0;
    const std::size_t uni = a.length() + b.length() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Size-weighted best-IoU score of `from` regions against `against`
/// regions; null when `from` is empty.
Value directed_coverage(const std::vector<Region>& from, const std::vector<Region>& against) {
    if (from.empty()) return std::nullopt;
    double num = 0.0;
    std::size_t den = 0;
    for (const Region& f : from) {
        double best = 0.0;
        for (const Region& a : against) best = std::max(best, region_iou(f, a));
        num += static_cast<double>(f.length()) * best;
        den += f.length();
    }
    return num / static_cast<double>(den);
}

std::string format_value(const Value& v) {
    if (!v) return "--";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

json value_to_json(const Value& v) {
    if (!v) return nullptr;
    return *v;
}

Value value_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

PostLevelResult post_level(std::span<const LabelSequence> gold,
                           std::span<const LabelSequence> pred) {
    std::array<std::size_t, kNumLabels> tp{};
    std::array<std::size_t, kNumLabels> fp{};
    std::array<std::size_t, kNumLabels> fn{};
    for (const auto& [g, p] : paired(gold, pred)) {
        for (std::size_t i = 0; i < g->labels.size(); ++i) {
            const auto gi = static_cast<std::size_t>(g->labels[i]);
            const auto pi = static_cast<std::size_t>(p->labels[i]);
            if (gi == pi) {
                ++tp[gi];
            } else {
                ++fp[pi];
                ++fn[gi];
            }
        }
    }

    PostLevelResult out;
    std::array<Value, kNumLabels> precisions, recalls, f1s;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const double tpc = static_cast<double>(tp[c]);
        ClassScores& s = out.per_label[c];
        if (tp[c] + fp[c] > 0) s.precision = tpc / static_cast<double>(tp[c] + fp[c]);
        if (tp[c] + fn[c] > 0) s.recall = tpc / static_cast<double>(tp[c] + fn[c]);
        if (2 * tp[c] + fp[c] + fn[c] > 0) {
            s.f1 = 2.0 * tpc / static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
        }
        precisions[c] = s.precision;
        recalls[c] = s.recall;
        f1s[c] = s.f1;
    }
    out.macro.precision = macro_over_labels(precisions);
    out.macro.recall = macro_over_labels(recalls);
    out.macro.f1 = macro_over_labels(f1s);
    return out;
}

std::size_t windowed_match_count(std::span<const std::size_t> gold_idx,
                                 std::span<const std::size_t> pred_idx, std::size_t w) {
    // Greedy two-pointer sweep: with the interval compatibility |g - p| <= w
    // on a line, matching the leftmost compatible pair is always optimal.
    std::size_t i = 0, j = 0, matched = 0;
    while (i < gold_idx.size() && j < pred_idx.size()) {
        const std::size_t g = gold_idx[i];
        const std::size_t p = pred_idx[j];
        if (g + w >= p && p + w >= g) {
            ++matched;
            ++i;
            ++j;
        } else if (g < p) {
            ++i;
        } else {
            ++j;
        }
    }
    return matched;
}

PrecisionRecall windowed(const LabelSequence& gold, const LabelSequence& pred, Label label,
                         std::size_t w) {
    check_pair(gold, pred);
    const std::vector<std::size_t> g = label_indices(gold, label);
    const std::vector<std::size_t> p = label_indices(pred, label);
    const std::size_t tp = windowed_match_count(g, p, w);
    PrecisionRecall out;
    if (!p.empty()) out.precision = static_cast<double>(tp) / static_cast<double>(p.size());
    if (!g.empty()) out.recall = static_cast<double>(tp) / static_cast<double>(g.size());
    return out;
}

PrecisionRecall windowed_macro(std::span<const LabelSequence> gold,
                               std::span<const LabelSequence> pred, Label label, std::size_t w) {
    std::vector<Value> precisions, recalls;
    for (const auto& [g, p] : paired(gold, pred)) {
        const PrecisionRecall pr = windowed(*g, *p, label, w);
        precisions.push_back(pr.precision);
        recalls.push_back(pr.recall);
    }
    return PrecisionRecall{mean_defined(precisions), mean_defined(recalls)};
}

CoverageScores coverage(const LabelSequence& gold, const LabelSequence& pred, Label label) {
    check_pair(gold, pred);
    const std::vector<Region> g = regions_with_label(gold, label);
    const std::vector<Region> p = regions_with_label(pred, label);
    return CoverageScores{directed_coverage(p, g), directed_coverage(g, p)};
}

CoverageScores coverage_macro(std::span<const LabelSequence> gold,
                              std::span<const LabelSequence> pred, Label label) {
    std::vector<Value> cps, crs;
    for (const auto& [g, p] : paired(gold, pred)) {
        const CoverageScores c = coverage(*g, *p, label);
        cps.push_back(c.c_p);
        crs.push_back(c.c_r);
    }
    return CoverageScores{mean_defined(cps), mean_defined(crs)};
}

std::vector<LengthBucket> recall_by_region_length(std::span<const LabelSequence> gold,
                                                  std::span<const LabelSequence> pred, Label label,
                                                  std::span<const std::size_t> bucket_upper_bounds) {
    for (std::size_t i = 1; i < bucket_upper_bounds.size(); ++i) {
        if (bucket_upper_bounds[i] <= bucket_upper_bounds[i - 1]) {
            throw DomainError("length bucket bounds must strictly ascend");
        }
    }
    std::vector<LengthBucket> buckets;
    std::size_t prev = 0;
    for (std::size_t upper : bucket_upper_bounds) {
        LengthBucket b;
        b.upper = upper;
        b.name = upper == prev + 1 ? std::to_string(upper)
                                   : std::to_string(prev + 1) + "-" + std::to_string(upper);
        buckets.push_back(std::move(b));
        prev = upper;
    }
    LengthBucket open;
    open.upper = SIZE_MAX;
    open.name = std::to_string(prev + 1) + "+";
    buckets.push_back(std::move(open));

    bool any_region = false;
    for (const auto& [g, p] : paired(gold, pred)) {
        for (const Region& r : regions_with_label(*g, label)) {
            any_region = true;
            auto it = std::find_if(buckets.begin(), buckets.end(),
                                   [&](const LengthBucket& b) { return r.length() <= b.upper; });
            it->posts += r.length();
            for (std::size_t i = r.start; i <= r.end; ++i) {
                if (p->labels[i] == label) ++it->correct;
            }
        }
    }
    if (!any_region) return {};
    for (LengthBucket& b : buckets) {
        if (b.posts > 0) {
            b.recall = static_cast<double>(b.correct) / static_cast<double>(b.posts);
        }
    }
    return buckets;
}

MetricsReport evaluate(std::span<const LabelSequence> gold, std::span<const LabelSequence> pred,
                       const ReportConfig& config) {
    const auto pairs = paired(gold, pred);  // validates alignment up front
    MetricsReport report;
    report.post_level = post_level(gold, pred);

    for (std::size_t w : config.windows) {
        std::array<PrecisionRecall, kNumLabels> per_label;
        std::array<Value, kNumLabels> precisions, recalls;
        for (std::size_t c = 0; c < kNumLabels; ++c) {
            per_label[c] = windowed_macro(gold, pred, static_cast<Label>(c), w);
            precisions[c] = per_label[c].precision;
            recalls[c] = per_label[c].recall;
        }
        report.windowed[w] = per_label;
        report.windowed_macro[w] =
            PrecisionRecall{macro_over_labels(precisions), macro_over_labels(recalls)};
    }

    std::array<Value, kNumLabels> cps, crs;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        report.coverage[c] = coverage_macro(gold, pred, static_cast<Label>(c));
        cps[c] = report.coverage[c].c_p;
        crs[c] = report.coverage[c].c_r;
    }
    report.coverage_macro = CoverageScores{macro_over_labels(cps), macro_over_labels(crs)};

    if (config.with_recall_by_length) {
        report.recall_by_length =
            recall_by_region_length(gold, pred, config.recall_by_length_label,
                                    config.length_buckets);
        report.recall_by_length_label = config.recall_by_length_label;
        report.has_recall_by_length = true;
    }

    if (config.per_timeline) {
        json detail = json::array();
        for (const auto& [g, p] : pairs) {
            json entry;
            entry["timeline_id"] = g->timeline_id;
            entry["posts"] = g->labels.size();
            for (Label label : config.labels) {
                json per_label;
                for (std::size_t w : config.windows) {
                    const PrecisionRecall pr = windowed(*g, *p, label, w);
                    json jw;
                    jw["precision"] = value_to_json(pr.precision);
                    jw["recall"] = value_to_json(pr.recall);
                    per_label["w=" + std::to_string(w)] = std::move(jw);
                }
                const CoverageScores c = coverage(*g, *p, label);
                json jc;
                jc["c_p"] = value_to_json(c.c_p);
                jc["c_r"] = value_to_json(c.c_r);
                per_label["coverage"] = std::move(jc);
                entry[to_string(label)] = std::move(per_label);
            }
            detail.push_back(std::move(entry));
        }
        report.per_timeline = std::move(detail);
    }
    return report;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
    json out;

    json post;
    const std::array<Label, kNumLabels> order = {Label::IS, Label::IE, Label::O};
    auto class_json = [](const ClassScores& s) {
        json j;
        j["precision"] = value_to_json(s.precision);
        j["recall"] = value_to_json(s.recall);
        j["f1"] = value_to_json(s.f1);
        return j;
    };
    for (Label l : order) {
        post[to_string(l)] = class_json(report.post_level.per_label[static_cast<std::size_t>(l)]);
    }
    post["macro"] = class_json(report.post_level.macro);
    out["post_level"] = std::move(post);

    json windowed_json;
    for (const auto& [w, per_label] : report.windowed) {
        json jw;
        for (Label l : order) {
            const PrecisionRecall& pr = per_label[static_cast<std::size_t>(l)];
            json jl;
            jl["precision"] = value_to_json(pr.precision);
            jl["recall"] = value_to_json(pr.recall);
            jw[to_string(l)] = std::move(jl);
        }
        const PrecisionRecall& macro = report.windowed_macro.at(w);
        json jm;
        jm["precision"] = value_to_json(macro.precision);
        jm["recall"] = value_to_json(macro.recall);
        jw["macro"] = std::move(jm);
        windowed_json["w=" + std::to_string(w)] = std::move(jw);
    }
    out["windowed"] = std::move(windowed_json);

    json cov;
    auto coverage_json = [](const CoverageScores& c) {
        json j;
        j["c_p"] = value_to_json(c.c_p);
        j["c_r"] = value_to_json(c.c_r);
        return j;
    };
    for (Label l : order) {
        cov[to_string(l)] = coverage_json(report.coverage[static_cast<std::size_t>(l)]);
    }
    cov["macro"] = coverage_json(report.coverage_macro);
    out["coverage"] = std::move(cov);

    if (report.has_recall_by_length) {
        json rbl;
        rbl["label"] = to_string(report.recall_by_length_label);
        json buckets = json::array();
        for (const LengthBucket& b : report.recall_by_length) {
            json jb;
            jb["length"] = b.name;
            jb["posts"] = b.posts;
            jb["correct"] = b.correct;
            jb["recall"] = value_to_json(b.recall);
            buckets.push_back(std::move(jb));
        }
        rbl["buckets"] = std::move(buckets);
        out["recall_by_length"] = std::move(rbl);
    }

    if (!report.per_timeline.empty()) out["per_timeline"] = report.per_timeline;
    return out;
}

std::string report_to_csv(const MetricsReport& report) {
    std::string out = "section,label,metric,value\n";
    auto emit = [&out](const std::string& section, const std::string& label,
                       const std::string& metric, const Value& v) {
        out += section + "," + label + "," + metric + ",";
        if (v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", *v);
            out += buf;
        }
        out += "\n";
    };
    const std::array<Label, kNumLabels> order = {Label::IS, Label::IE, Label::O};

    for (Label l : order) {
        const ClassScores& s = report.post_level.per_label[static_cast<std::size_t>(l)];
        emit("post_level", to_string(l), "precision", s.precision);
        emit("post_level", to_string(l), "recall", s.recall);
        emit("post_level", to_string(l), "f1", s.f1);
    }
    emit("post_level", "macro", "precision", report.post_level.macro.precision);
    emit("post_level", "macro", "recall", report.post_level.macro.recall);
    emit("post_level", "macro", "f1", report.post_level.macro.f1);

    for (const auto& [w, per_label] : report.windowed) {
        const std::string section = "windowed.w=" + std::to_string(w);
        for (Label l : order) {
            const PrecisionRecall& pr = per_label[static_cast<std::size_t>(l)];
            emit(section, to_string(l), "precision", pr.precision);
            emit(section, to_string(l), "recall", pr.recall);
        }
        const PrecisionRecall& macro = report.windowed_macro.at(w);
        emit(section, "macro", "precision", macro.precision);
        emit(section, "macro", "recall", macro.recall);
    }

    for (Label l : order) {
        const CoverageScores& c = report.coverage[static_cast<std::size_t>(l)];
        emit("coverage", to_string(l), "c_p", c.c_p);
        emit("coverage", to_string(l), "c_r", c.c_r);
    }
    emit("coverage", "macro", "c_p", report.coverage_macro.c_p);
    emit("coverage", "macro", "c_r", report.coverage_macro.c_r);

    if (report.has_recall_by_length) {
        const std::string section =
            "recall_by_length." + to_string(report.recall_by_length_label);
        for (const LengthBucket& b : report.recall_by_length) {
            emit(section, b.name, "posts", static_cast<double>(b.posts));
            emit(section, b.name, "correct", static_cast<double>(b.correct));
            emit(section, b.name, "recall", b.recall);
        }
    }
    return out;
}

std::string render_report_table(const nlohmann::ordered_json& report) {
    std::string out;
    auto row = [&out](const std::string& label, const std::vector<std::string>& cells) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%-8s", label.c_str());
        out += buf;
        for (const std::string& c : cells) {
            std::snprintf(buf, sizeof(buf), "%8s", c.c_str());
            out += buf;
        }
        out += "\n";
    };

    const std::vector<std::string> labels = {"IS", "IE", "O", "macro"};
    row("", {"P", "R", "F1", "C_p", "C_r"});
    for (const std::string& l : labels) {
        std::vector<std::string> cells;
        const json& pl = report.at("post_level").at(l);
        cells.push_back(format_value(value_from_json(pl.at("precision"))));
        cells.push_back(format_value(value_from_json(pl.at("recall"))));
        cells.push_back(format_value(value_from_json(pl.at("f1"))));
        if (report.contains("coverage") && report.at("coverage").contains(l)) {
            const json& cov = report.at("coverage").at(l);
            cells.push_back(format_value(value_from_json(cov.at("c_p"))));
            cells.push_back(format_value(value_from_json(cov.at("c_r"))));
        } else {
            cells.push_back("--");
            cells.push_back("--");
        }
        row(l, cells);
    }

    if (report.contains("windowed") && !report.at("windowed").empty()) {
        out += "\nwindowed\n";
        for (const auto& [key, per_label] : report.at("windowed").items()) {
            out += key + "\n";
            row("", {"P_w", "R_w"});
            for (const std::string& l : labels) {
                if (!per_label.contains(l)) continue;
                const json& pr = per_label.at(l);
                row(l, {format_value(value_from_json(pr.at("precision"))),
                        format_value(value_from_json(pr.at("recall")))});
            }
        }
    }

    if (report.contains("recall_by_length")) {
        const json& rbl = report.at("recall_by_length");
        out += "\nrecall by gold-region length (" + rbl.at("label").get<std::string>() + ")\n";
        row("", {"posts", "recall"});
        for (const json& b : rbl.at("buckets")) {
            row(b.at("length").get<std::string>(),
                {std::to_string(b.at("posts").get<std::size_t>()),
                 format_value(value_from_json(b.at("recall")))});
        }
    }
    return out;
}

}  // namespace moc::metrics
