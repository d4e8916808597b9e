// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// moc: command line surface of the moments-of-change toolkit. Every
// subcommand is a thin adapter over the core library; all randomness is
// controlled by explicit seeds, and rerunning a subcommand with identical
// inputs produces byte-identical outputs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moc/annotation.hpp"
#include "moc/changepoint.hpp"
#include "moc/errors.hpp"
#include "moc/extraction.hpp"
#include "moc/io.hpp"
#include "moc/metrics.hpp"
#include "moc/models.hpp"
#include "moc/synth.hpp"
#include "moc/types.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "moc 0.1.0";

struct ExtractArgs {
    std::string posts_file;
    std::string out_timelines;
    std::string summary_file;
    double alpha = moc::changepoint::BocpdDefaults::kAlpha;
    double beta = moc::changepoint::BocpdDefaults::kBeta;
    double hazard = moc::changepoint::BocpdDefaults::kHazard;
    int r_reset = moc::changepoint::BocpdDefaults::kRReset;
    double mass_threshold = moc::changepoint::BocpdDefaults::kMassThreshold;
    int min_gap_days = moc::changepoint::BocpdDefaults::kMinGapDays;
    int window_days = 7;
    std::size_t min_posts = 10;
    std::size_t max_posts = 150;
    std::size_t sample = 0;
    bool one_per_user = false;
    std::uint64_t seed = 0;
    int threads = 0;
};

int run_extract(const ExtractArgs& args) {
    const std::vector<moc::Post> posts = moc::read_posts(args.posts_file);
    const std::vector<moc::changepoint::CountSeries> series = moc::extraction::daily_counts(posts);

    const moc::changepoint::GammaParams prior{args.alpha, args.beta};
    std::vector<moc::extraction::UserChangePoints> changes(series.size());
    const int threads =
        args.threads > 0 ? args.threads
                         : std::max(1u, std::thread::hardware_concurrency());
    auto detect_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto posterior =
                moc::changepoint::run_bocpd(series[i], prior, args.hazard);
            changes[i].user_id = series[i].user_id;
            changes[i].changepoints = moc::changepoint::declare_changepoints(
                posterior, args.r_reset, args.mass_threshold, args.min_gap_days);
        }
    };
    if (threads <= 1 || series.size() < 2) {
        detect_range(0, series.size());
    } else {
        const std::size_t n = static_cast<std::size_t>(threads);
        std::vector<std::thread> pool;
        const std::size_t chunk = (series.size() + n - 1) / n;
        for (std::size_t begin = 0; begin < series.size(); begin += chunk) {
            pool.emplace_back(detect_range, begin, std::min(series.size(), begin + chunk));
        }
        for (std::thread& t : pool) t.join();
    }

    moc::extraction::ExtractionSummary summary;
    const moc::extraction::ExtractionParams params{args.window_days, args.min_posts,
                                                   args.max_posts};
    std::vector<moc::Timeline> timelines =
        moc::extraction::extract_timelines(posts, changes, params, &summary);
    if (args.sample > 0) {
        timelines = moc::extraction::sample_timelines(timelines, args.sample, args.one_per_user,
                                                      args.seed);
        summary.sampled = timelines.size();
    }
    moc::write_timelines(args.out_timelines, timelines);

    if (!args.summary_file.empty()) {
        const moc::extraction::LengthStats stats = moc::extraction::length_stats(timelines);
        json doc;
        doc["candidates"] = summary.candidates;
        doc["dropped_short"] = summary.dropped_short;
        doc["dropped_long"] = summary.dropped_long;
        doc["kept"] = summary.kept;
        doc["sampled"] = summary.sampled;
        json lengths;
        lengths["count"] = stats.count;
        lengths["mean"] = stats.mean;
        lengths["stddev"] = stats.stddev;
        lengths["min"] = stats.min;
        lengths["max"] = stats.max;
        lengths["total_posts"] = stats.total_posts;
        doc["lengths"] = std::move(lengths);
        moc::write_json_document(args.summary_file, doc);
    }
    return 0;
}

struct AggregateArgs {
    std::string annotations_file;
    std::string timelines_file;
    std::string posts_file;
    std::string out_gold;
};

int run_aggregate(const AggregateArgs& args) {
    const std::vector<moc::Post> posts = moc::read_posts(args.posts_file);
    const moc::TimelinesLoad load = moc::read_timelines(args.timelines_file, posts);
    const auto records = moc::read_annotations(args.annotations_file);
    const auto set = moc::annotation::AnnotationSet::from_records(records);
    set.check_against(load.timelines);

    std::vector<moc::LabelsRecord> gold;
    gold.reserve(load.timelines.size());
    for (const moc::Timeline& t : load.timelines) {
        gold.push_back(moc::annotation::derive_gold(set, t));
    }
    moc::write_labels(args.out_gold, gold);
    return 0;
}

struct IaaArgs {
    std::string annotations_file;
    std::string timelines_file;
    std::string posts_file;
    std::string out_file;
};

int run_iaa(const IaaArgs& args) {
    const std::vector<moc::Post> posts = moc::read_posts(args.posts_file);
    const moc::TimelinesLoad load = moc::read_timelines(args.timelines_file, posts);
    const auto records = moc::read_annotations(args.annotations_file);
    const auto set = moc::annotation::AnnotationSet::from_records(records);
    set.check_against(load.timelines);

    json doc;
    for (const auto mode :
         {moc::annotation::AgreementMode::perfect, moc::annotation::AgreementMode::majority}) {
        json per_label;
        for (const moc::Label label : {moc::Label::IS, moc::Label::IE, moc::Label::O}) {
            const auto ratio = moc::annotation::positive_agreement(set, load.timelines, label, mode);
            if (ratio) {
                per_label[moc::to_string(label)] = *ratio;
            } else {
                per_label[moc::to_string(label)] = nullptr;
            }
        }
        doc[mode == moc::annotation::AgreementMode::perfect ? "perfect" : "majority"] =
            std::move(per_label);
    }
    if (args.out_file.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        moc::write_json_document(args.out_file, doc);
    }
    return 0;
}

struct EvaluateArgs {
    std::string gold_file;
    std::string pred_file;
    std::string out_file;
    std::string csv_file;
    std::vector<std::size_t> windows = {0, 1, 2, 3};
    bool per_timeline = false;
    bool recall_by_length = false;
    std::string recall_by_length_label = "IE";
    std::vector<std::size_t> length_buckets = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

int run_evaluate(const EvaluateArgs& args) {
    const auto gold = moc::to_label_sequences(moc::read_labels(args.gold_file));
    const auto pred = moc::to_label_sequences(moc::read_labels(args.pred_file));

    moc::metrics::ReportConfig config;
    config.windows = args.windows;
    config.per_timeline = args.per_timeline;
    config.with_recall_by_length = args.recall_by_length;
    config.recall_by_length_label = moc::label_from_string(args.recall_by_length_label);
    config.length_buckets = args.length_buckets;

    const moc::metrics::MetricsReport report = moc::metrics::evaluate(gold, pred, config);
    const json doc = moc::metrics::report_to_json(report);
    if (args.out_file.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        moc::write_json_document(args.out_file, doc);
    }
    if (!args.csv_file.empty()) {
        std::ofstream out(args.csv_file, std::ios::binary);
        if (!out) throw moc::Error("cannot open \"" + args.csv_file + "\" for writing");
        out << moc::metrics::report_to_csv(report);
    }
    return 0;
}

struct BaselineArgs {
    std::string model = "majority";
    std::string timelines_file;
    std::string posts_file;
    std::string gold_file;
    std::string vectors_file;
    std::string out_file;
    int folds = 5;
    std::uint64_t seed = 0;
    std::size_t context_radius = 0;
    int epochs = 40;
    std::size_t batch_size = 64;
    double learning_rate = 0.5;
    double l2 = 1e-4;
    double focal_gamma = 2.0;
    std::string fsd_mode = "centroid";
    std::vector<int> fsd_n = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int forecast_k = 3;
    double ridge_lambda = 1.0;
    std::vector<double> priors;
};

int run_baseline_cmd(const BaselineArgs& args) {
    const std::vector<moc::Post> posts = moc::read_posts(args.posts_file);
    const moc::TimelinesLoad load = moc::read_timelines(args.timelines_file, posts);
    for (const std::string& w : load.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<moc::LabelSequence> gold;
    if (!args.gold_file.empty()) {
        gold = moc::to_label_sequences(moc::read_labels(args.gold_file));
    }

    moc::models::BaselineConfig config;
    config.kind = moc::models::model_kind_from_string(args.model);
    config.folds = args.folds;
    config.seed = args.seed;
    config.context_radius = args.context_radius;
    config.train.epochs = args.epochs;
    config.train.batch_size = args.batch_size;
    config.train.learning_rate = args.learning_rate;
    config.train.l2 = args.l2;
    config.train.focal_gamma = args.focal_gamma;
    config.train.seed = args.seed;
    config.fsd_mode = args.fsd_mode == "nearest" ? moc::models::FsdMode::nearest
                                                 : moc::models::FsdMode::centroid;
    config.fsd_n_list = args.fsd_n;
    config.forecast_k = args.forecast_k;
    config.ridge_lambda = args.ridge_lambda;
    if (!args.priors.empty()) {
        if (args.priors.size() != moc::kNumLabels) {
            throw moc::ConfigError("--priors needs exactly three values: O,IS,IE");
        }
        std::array<double, moc::kNumLabels> priors{};
        std::copy(args.priors.begin(), args.priors.end(), priors.begin());
        config.priors = priors;
    }

    std::vector<moc::VectorRecord> vectors;
    const std::vector<moc::VectorRecord>* vectors_ptr = nullptr;
    if (!args.vectors_file.empty()) {
        vectors = moc::read_vectors(args.vectors_file);
        vectors_ptr = &vectors;
    }

    const auto predictions =
        moc::models::run_baseline(load.timelines, gold, config, vectors_ptr);
    std::vector<moc::LabelsRecord> records;
    records.reserve(predictions.size());
    for (const moc::LabelSequence& p : predictions) {
        records.push_back(moc::LabelsRecord{p.timeline_id, p.labels, {}, {}});
    }
    moc::write_labels(args.out_file, records);
    return 0;
}

struct SynthArgs {
    std::string out_dir;
    int users = 50;
    int days = 60;
    std::uint64_t seed = 0;
    double base_rate = 1.0;
    double changed_rate = 6.0;
    double change_fraction = 0.5;
    double noise = 0.08;
    int annotators = 3;
};

int run_synth(const SynthArgs& args) {
    moc::synth::SynthConfig config;
    config.n_users = args.users;
    config.days = args.days;
    config.seed = args.seed;
    config.base_rate = args.base_rate;
    config.changed_rate = args.changed_rate;
    config.change_fraction = args.change_fraction;
    config.annotator_noise = args.noise;
    config.n_annotators = args.annotators;

    const moc::synth::SynthCorpus corpus = moc::synth::generate(config);
    const std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    moc::write_posts(dir / "posts.jsonl", corpus.posts);
    moc::write_timelines(dir / "timelines.jsonl", corpus.timelines);
    moc::write_labels(dir / "gold.jsonl", corpus.gold);
    moc::write_annotations(dir / "annotations.jsonl", corpus.annotations);

    json planted = json::array();
    for (const moc::synth::PlantedChange& p : corpus.planted) {
        json j;
        j["user_id"] = p.user_id;
        j["date"] = p.date.to_string();
        j["rate_before"] = p.rate_before;
        j["rate_after"] = p.rate_after;
        planted.push_back(std::move(j));
    }
    json doc;
    doc["users"] = config.n_users;
    doc["days"] = config.days;
    doc["seed"] = config.seed;
    doc["posts"] = corpus.posts.size();
    doc["timelines"] = corpus.timelines.size();
    doc["planted_changes"] = std::move(planted);
    moc::write_json_document(dir / "manifest.json", doc);
    return 0;
}

struct ReportArgs {
    std::string in_file;
    std::string out_file;
};

int run_report(const ReportArgs& args) {
    const json doc = moc::read_json_document(args.in_file);
    const std::string table = moc::metrics::render_report_table(doc);
    if (args.out_file.empty()) {
        std::cout << table;
    } else {
        std::ofstream out(args.out_file, std::ios::binary);
        if (!out) throw moc::Error("cannot open \"" + args.out_file + "\" for writing");
        out << table;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moments-of-change toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand(
        "extract", "Detect posting-frequency change points and extract candidate timelines");
    extract->add_option("--posts", extract_args.posts_file, "posts JSONL file")
        ->required();
    extract->add_option("--out-timelines", extract_args.out_timelines, "output timelines JSONL")
        ->required();
    extract->add_option("--summary", extract_args.summary_file, "output extraction summary JSON");
    extract->add_option("--alpha", extract_args.alpha, "Gamma prior shape");
    extract->add_option("--beta", extract_args.beta, "Gamma prior rate");
    extract->add_option("--hazard", extract_args.hazard, "constant change hazard per day");
    extract->add_option("--r-reset", extract_args.r_reset, "run-length threshold for declaration");
    extract->add_option("--mass-threshold", extract_args.mass_threshold,
                        "posterior mass that must sit at or below r-reset");
    extract->add_option("--min-gap-days", extract_args.min_gap_days,
                        "minimum days between declarations");
    extract->add_option("--window-days", extract_args.window_days, "timeline half-window in days");
    extract->add_option("--min-posts", extract_args.min_posts, "minimum posts per timeline");
    extract->add_option("--max-posts", extract_args.max_posts, "maximum posts per timeline");
    extract->add_option("--sample", extract_args.sample, "sample this many timelines (0 = keep all)");
    extract->add_flag("--one-per-user", extract_args.one_per_user,
                      "sample at most one timeline per user");
    extract->add_option("--seed", extract_args.seed, "sampling seed")->envname("MOC_SEED");
    extract->add_option("--threads", extract_args.threads, "worker threads (0 = all cores)")
        ->envname("MOC_THREADS");

    AggregateArgs aggregate_args;
    CLI::App* aggregate =
        app.add_subcommand("aggregate", "Derive majority-vote gold labels from annotations");
    aggregate->add_option("--annotations", aggregate_args.annotations_file, "annotations JSONL")
        ->required();
    aggregate->add_option("--timelines", aggregate_args.timelines_file, "timelines JSONL")
        ->required();
    aggregate->add_option("--posts", aggregate_args.posts_file, "posts JSONL")
        ->required();
    aggregate->add_option("--out-gold", aggregate_args.out_gold, "output gold labels JSONL")
        ->required();

    IaaArgs iaa_args;
    CLI::App* iaa = app.add_subcommand("iaa", "Positive inter-annotator agreement per label");
    iaa->add_option("--annotations", iaa_args.annotations_file, "annotations JSONL")
        ->required();
    iaa->add_option("--timelines", iaa_args.timelines_file, "timelines JSONL")
        ->required();
    iaa->add_option("--posts", iaa_args.posts_file, "posts JSONL")
        ->required();
    iaa->add_option("--out", iaa_args.out_file, "output JSON (default stdout)");

    EvaluateArgs evaluate_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
    evaluate->add_option("--gold", evaluate_args.gold_file, "gold labels JSONL")
        ->required();
    evaluate->add_option("--pred", evaluate_args.pred_file, "predicted labels JSONL")
        ->required();
    evaluate->add_option("--out", evaluate_args.out_file, "output report JSON (default stdout)");
    evaluate->add_option("--csv", evaluate_args.csv_file, "optional flat CSV export");
    evaluate->add_option("--windows", evaluate_args.windows, "window sizes for P_w/R_w")
        ->delimiter(',');
    evaluate->add_flag("--per-timeline", evaluate_args.per_timeline,
                       "include per-timeline detail in the report");
    evaluate->add_flag("--recall-by-length", evaluate_args.recall_by_length,
                       "include recall per gold-region length");
    evaluate->add_option("--recall-by-length-label", evaluate_args.recall_by_length_label,
                         "label for the recall-by-length table");
    evaluate->add_option("--length-buckets", evaluate_args.length_buckets,
                         "bucket upper bounds for recall-by-length")
        ->delimiter(',');

    BaselineArgs baseline_args;
    CLI::App* baseline = app.add_subcommand("baseline", "Run a baseline model with cross-validation");
    baseline
        ->add_option("--model", baseline_args.model,
                     "majority | random | linear-ce | linear-focal | fsd | scd-op | scd-fp")
        ->required();
    baseline->add_option("--timelines", baseline_args.timelines_file, "timelines JSONL")
        ->required();
    baseline->add_option("--posts", baseline_args.posts_file, "posts JSONL")
        ->required();
    baseline->add_option("--gold", baseline_args.gold_file,
                         "gold labels JSONL (required for supervised models)");
    baseline->add_option("--vectors", baseline_args.vectors_file,
                         "external post vectors JSONL replacing tf-idf");
    baseline->add_option("--out", baseline_args.out_file, "output predictions JSONL")->required();
    baseline->add_option("--folds", baseline_args.folds, "cross-validation folds");
    baseline->add_option("--seed", baseline_args.seed, "random seed")->envname("MOC_SEED");
    baseline->add_option("--context-radius", baseline_args.context_radius,
                         "posts of context on each side fed to the classifier");
    baseline->add_option("--epochs", baseline_args.epochs, "training epochs");
    baseline->add_option("--batch-size", baseline_args.batch_size, "mini-batch size");
    baseline->add_option("--learning-rate", baseline_args.learning_rate, "learning rate");
    baseline->add_option("--l2", baseline_args.l2, "L2 regularization strength");
    baseline->add_option("--focal-gamma", baseline_args.focal_gamma, "focal loss gamma");
    baseline->add_option("--fsd-mode", baseline_args.fsd_mode, "centroid | nearest");
    baseline->add_option("--fsd-n", baseline_args.fsd_n, "FSD history sizes")->delimiter(',');
    baseline->add_option("--forecast-k", baseline_args.forecast_k, "forecaster history length");
    baseline->add_option("--ridge-lambda", baseline_args.ridge_lambda, "forecaster ridge strength");
    baseline->add_option("--priors", baseline_args.priors,
                         "random-baseline class priors O,IS,IE (default: gold distribution)")
        ->delimiter(',');

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted changes");
    synth->add_option("--out-dir", synth_args.out_dir, "output directory")->required();
    synth->add_option("--users", synth_args.users, "number of users");
    synth->add_option("--days", synth_args.days, "days of posting history");
    synth->add_option("--seed", synth_args.seed, "generator seed")->envname("MOC_SEED");
    synth->add_option("--base-rate", synth_args.base_rate, "posts/day before a change");
    synth->add_option("--changed-rate", synth_args.changed_rate, "posts/day after a change");
    synth->add_option("--change-fraction", synth_args.change_fraction,
                      "fraction of users with a planted change");
    synth->add_option("--noise", synth_args.noise, "annotator flip probability");
    synth->add_option("--annotators", synth_args.annotators, "number of simulated annotators");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Render a report JSON as a table");
    report->add_option("--in", report_args.in_file, "report JSON file")
        ->required();
    report->add_option("--out", report_args.out_file, "output text file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (extract->parsed()) return run_extract(extract_args);
        if (aggregate->parsed()) return run_aggregate(aggregate_args);
        if (iaa->parsed()) return run_iaa(iaa_args);
        if (evaluate->parsed()) return run_evaluate(evaluate_args);
        if (baseline->parsed()) return run_baseline_cmd(baseline_args);
        if (synth->parsed()) return run_synth(synth_args);
        if (report->parsed()) return run_report(report_args);
    } catch (const moc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
