#include "cli.hpp"

#include "emgstand/dataset.hpp"
#include "emgstand/error.hpp"
#include "emgstand/evaluation.hpp"
#include "emgstand/persistence.hpp"
#include "emgstand/rng.hpp"
#include "emgstand/selection.hpp"
#include "emgstand/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace emgstand::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Flag combinations that make no sense; reported before any work starts.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // inputs and outputs
    std::string manifest;
    std::string features_file;
    std::string out;
    std::string text_out;
    std::string confusion_out;
    std::string json_out;
    std::string model_file;
    std::string trial;
    std::string trial_id;
    double sample_rate_hz = kDefaultSampleRateHz;

    // features
    std::string features = "power";
    double start_s = 0.0;
    double duration_s = kDefaultPowerWindowS;
    double ar_window_ms = kDefaultArWindowMs;
    double ar_hop_ms = kDefaultArWindowMs;
    std::size_t ar_order = kDefaultArOrder;
    bool allow_short = false;
    std::string channels;

    // models
    std::string model = "lda";
    double gamma = 0.79;
    double c = 11.0;
    std::string kernel_convention = "gamma";
    double pca_target = 0.98;
    std::size_t pca_components = 0;
    bool no_pca = false;
    bool standardize = false;
    std::string lda_priors = "equal";
    bool no_ridge = false;
    bool allow_ar_regression = false;

    // evaluation
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool no_stratify = false;
    std::string grouping = "trial";
    std::size_t jobs = 1;

    // channel selection
    std::string models = "lda";
    std::string k_range = "1..6";
    std::string primary;
    bool all_rows = false;

    // simulation
    std::size_t n_trials = 109;
    double sim_duration_s = 60.0;
    std::string informative = "all";
    std::string snr = "10";
    double gain_slope = 0.15;
    double jitter = 0.1;
    bool pole_mode = false;
    std::string weights;
};

// ---------------------------------------------------------------------------
// flag parsing helpers

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find(sep, pos);
        out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::size_t parse_size(std::string_view s, std::string_view what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError(std::string(what) + ": '" + std::string(s) + "' is not a count");
    return v;
}

double parse_real(std::string_view s, std::string_view what) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError(std::string(what) + ": '" + std::string(s) + "' is not a number");
    return v;
}

/// "1..6", "2", or "1,3,5".
std::vector<std::size_t> parse_k_range(std::string_view s) {
    std::vector<std::size_t> ks;
    if (const auto dots = s.find(".."); dots != std::string_view::npos) {
        const std::size_t lo = parse_size(s.substr(0, dots), "--k-range");
        const std::size_t hi = parse_size(s.substr(dots + 2), "--k-range");
        if (lo > hi) throw UsageError("--k-range: empty range " + std::string(s));
        for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
        for (const auto& part : split(s, ',')) ks.push_back(parse_size(part, "--k-range"));
    }
    for (std::size_t k : ks) {
        if (k < 1 || k > 6) throw UsageError("--k-range: k must lie in 1..6, got " + std::to_string(k));
    }
    return ks;
}

std::optional<MuscleSet> parse_channels(const std::string& s) {
    if (s.empty() || s == "all") return std::nullopt;
    const auto set = MuscleSet::parse(s);
    if (!set) throw UsageError("--channels: cannot parse '" + s + "' (expected muscle names such as VL,SOL)");
    return set;
}

FeatureConfig feature_config(const Options& o, FeatureKind kind) {
    FeatureConfig fc;
    fc.kind = kind;
    fc.start_s = o.start_s;
    fc.duration_s = o.duration_s;
    fc.ar_window_ms = o.ar_window_ms;
    fc.ar_hop_ms = o.ar_hop_ms;
    fc.ar_order = o.ar_order;
    fc.allow_short = o.allow_short;
    return fc;
}

ModelSpec model_spec(const Options& o, ModelKind kind) {
    ModelSpec spec;
    spec.kind = kind;
    spec.lda.ridge = !o.no_ridge;
    spec.lda.priors = o.lda_priors == "empirical" ? LdaPriors::Empirical : LdaPriors::Equal;
    spec.svm.gamma = o.gamma;
    spec.svm.c = o.c;
    spec.svm.convention = *parse_kernel_convention(o.kernel_convention);
    spec.svm.standardize = o.standardize;
    if (o.no_pca) {
        spec.svm.pca_target.reset();
    } else {
        spec.svm.pca_target = o.pca_target;
        if (o.pca_components > 0) spec.svm.pca_components = o.pca_components;
    }
    spec.ols.allow_ridge = !o.no_ridge;
    return spec;
}

CvOptions cv_options(const Options& o) {
    CvOptions cv;
    cv.k = o.folds;
    cv.seed = o.seed;
    cv.stratified = !o.no_stratify;
    cv.grouping = *parse_grouping(o.grouping);
    cv.jobs = std::max<std::size_t>(o.jobs, 1);
    return cv;
}

void check_model_features(const Options& o, ModelKind model, FeatureKind features) {
    if (model == ModelKind::LinReg && features == FeatureKind::Ar && !o.allow_ar_regression) {
        throw UsageError("--model linreg expects --features power (pass --allow-ar-regression to override)");
    }
}

void check_common(const Options& o) {
    if (!(o.duration_s > 0.0)) throw UsageError("--duration-s must be positive");
    if (o.start_s < 0.0) throw UsageError("--start-s must be non-negative");
    if (!(o.ar_window_ms > 0.0) || !(o.ar_hop_ms > 0.0)) throw UsageError("--ar-window-ms and --ar-hop-ms must be positive");
    if (o.ar_order == 0) throw UsageError("--ar-order must be at least 1");
    if (!(o.gamma > 0.0)) throw UsageError("--gamma must be positive");
    if (!(o.c > 0.0)) throw UsageError("--c must be positive");
    if (!(o.pca_target > 0.0 && o.pca_target <= 1.0)) throw UsageError("--pca-target must lie in (0, 1]");
}

json feature_json(const Options& o, FeatureKind kind) {
    json j = to_json(feature_config(o, kind));
    j["channels"] = o.channels.empty() ? "all" : o.channels;
    return j;
}

json model_json(const Options& o, ModelKind kind) {
    json j{{"kind", to_string(kind)}};
    if (kind == ModelKind::Svm) {
        j["gamma"] = o.gamma;
        j["c"] = o.c;
        j["kernel_convention"] = o.kernel_convention;
        j["standardize"] = o.standardize;
        j["pca_target"] = o.no_pca ? json(nullptr) : json(o.pca_target);
        j["pca_components"] = (o.no_pca || o.pca_components == 0) ? json(nullptr) : json(o.pca_components);
    } else if (kind == ModelKind::Lda) {
        j["ridge"] = !o.no_ridge;
        j["priors"] = o.lda_priors;
    } else {
        j["ridge_fallback"] = !o.no_ridge;
    }
    return j;
}

// Parallelism changes the schedule, never the result, so jobs stays out of
// the config echo and hash.
json cv_json(const Options& o) {
    return {{"folds", o.folds}, {"seed", o.seed}, {"stratified", !o.no_stratify}, {"grouping", o.grouping}};
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void log_run(std::ostream& err, std::string_view subcommand, std::uint64_t seed, const json& config) {
    err << "emgstand: run subcommand=" << subcommand << " seed=" << seed << " config_hash=" << hex64(fnv1a64(config.dump()))
        << '\n';
}

void write_text(const std::string& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) fail(Errc::IoError, "write failed for " + path);
}

void emit(std::ostream& out, const std::string& path, std::string_view text) {
    if (path.empty()) {
        out << text;
    } else {
        write_text(path, text);
    }
}

Dataset load_dataset(const Options& o, FeatureKind kind, std::vector<std::string>* warnings) {
    Dataset ds;
    if (!o.features_file.empty()) {
        ds = read_feature_csv(o.features_file);
        if (ds.kind != kind) {
            throw UsageError("--features " + std::string(to_string(kind)) + " does not match the " +
                             std::string(to_string(ds.kind)) + " features in " + o.features_file);
        }
    } else {
        const auto trials = load_manifest(o.manifest);
        ds = build_dataset(trials, feature_config(o, kind), warnings, std::max<std::size_t>(o.jobs, 1));
    }
    if (const auto muscles = parse_channels(o.channels)) ds = restrict_to_muscles(ds, *muscles);
    return ds;
}

void require_input(const Options& o) {
    if (o.manifest.empty() == o.features_file.empty()) throw UsageError("exactly one of --manifest or --features-file is required");
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    GeneratorConfig cfg;
    cfg.n_trials = o.n_trials;
    cfg.duration_s = o.sim_duration_s;
    cfg.sample_rate_hz = o.sample_rate_hz;
    cfg.seed = o.seed;
    cfg.snr = parse_real(o.snr, "--snr");
    cfg.gain_slope = o.gain_slope;
    cfg.trial_gain_jitter = o.jitter;
    cfg.score_dependent_poles = o.pole_mode;
    if (o.informative != "all") {
        const auto set = o.informative == "none" ? std::optional<MuscleSet>(MuscleSet{}) : MuscleSet::parse(o.informative);
        if (!set) throw UsageError("--informative: cannot parse '" + o.informative + "'");
        cfg.informative_muscles = *set;
    }
    if (!o.weights.empty()) {
        const auto parts = split(o.weights, ',');
        if (parts.size() != 10) throw UsageError("--weights needs 10 comma-separated values for scores 1..10");
        for (std::size_t i = 0; i < 10; ++i) cfg.score_weights[i] = parse_real(parts[i], "--weights");
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.detail());
    }

    const json config{{"subcommand", "simulate"},
                      {"n_trials", cfg.n_trials},
                      {"duration_s", cfg.duration_s},
                      {"sample_rate_hz", cfg.sample_rate_hz},
                      {"seed", cfg.seed},
                      {"informative", cfg.informative_muscles.to_string(",")},
                      {"snr", std::isinf(cfg.snr) ? json("inf") : json(cfg.snr)},
                      {"gain_slope", cfg.gain_slope},
                      {"trial_gain_jitter", cfg.trial_gain_jitter},
                      {"score_dependent_poles", cfg.score_dependent_poles},
                      {"score_weights", cfg.score_weights}};
    log_run(err, "simulate", o.seed, config);

    const auto trials = synth_dataset(cfg, o.out);
    json summary{{"manifest", (fs::path(o.out) / "manifest.json").generic_string()}, {"n_trials", trials.size()}, {"config", config}};
    out << summary.dump(2) << '\n';
    return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out, std::ostream& err) {
    const FeatureKind kind = *parse_feature_kind(o.features);
    const json config{{"subcommand", "features"}, {"manifest", o.manifest}, {"features", feature_json(o, kind)}};
    log_run(err, "features", o.seed, config);

    std::vector<std::string> warnings;
    Options in = o;
    in.features_file.clear();
    const Dataset ds = load_dataset(in, kind, &warnings);
    for (const auto& w : warnings) err << "emgstand: warning " << w << '\n';
    write_feature_csv(o.out, ds);
    out << json{{"features_file", o.out}, {"n_samples", ds.size()}, {"dim", ds.dim()}}.dump(2) << '\n';
    return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    const ModelKind model = *parse_model_kind(o.model);
    const FeatureKind kind = *parse_feature_kind(o.features);
    check_model_features(o, model, kind);
    const json config{{"subcommand", "train"},
                      {"input", o.manifest.empty() ? o.features_file : o.manifest},
                      {"model", model_json(o, model)},
                      {"features", feature_json(o, kind)}};
    log_run(err, "train", o.seed, config);

    std::vector<std::string> warnings;
    const Dataset ds = load_dataset(o, kind, &warnings);
    for (const auto& w : warnings) err << "emgstand: warning " << w << '\n';
    if (ds.size() == 0) fail(Errc::TooFewTrials, "no samples to train on");
    std::vector<StandingScore> scores;
    for (const auto& s : ds.samples) scores.push_back(s.score);

    ModelDocument doc{fit_model(model_spec(o, model), ds.matrix(), scores), feature_config(o, kind), ds.feature_names};
    save_model(o.out, doc);
    out << json{{"model_file", o.out}, {"model", to_string(model)}, {"n_samples", ds.size()}, {"n_trials", ds.trials().size()}}.dump(2)
        << '\n';
    return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    const ModelKind model = *parse_model_kind(o.model);
    const FeatureKind kind = *parse_feature_kind(o.features);
    check_model_features(o, model, kind);
    if (o.grouping == "window" && kind != FeatureKind::Ar) throw UsageError("--grouping window needs --features ar");
    if (o.folds < 2) throw UsageError("--folds must be at least 2");

    json config{{"subcommand", "evaluate"},
                {"input", o.manifest.empty() ? o.features_file : o.manifest},
                {"model", model_json(o, model)},
                {"features", feature_json(o, kind)},
                {"cv", cv_json(o)}};
    log_run(err, "evaluate", o.seed, config);

    std::vector<std::string> warnings;
    const Dataset ds = load_dataset(o, kind, &warnings);
    EvaluationReport report = cross_validate(model_spec(o, model), ds, cv_options(o));
    report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
    for (const auto& w : report.warnings) err << "emgstand: warning " << w << '\n';
    config["config_hash"] = hex64(fnv1a64(config.dump()));
    report.config = config;

    emit(out, o.out, to_json(report).dump(2) + "\n");
    if (!o.text_out.empty()) write_text(o.text_out, to_text(report));
    if (!o.confusion_out.empty()) write_text(o.confusion_out, confusion_csv(report));
    return kExitOk;
}

SelectionMetric metric_for(ModelKind m) {
    switch (m) {
        case ModelKind::Lda: return SelectionMetric::LdaAccuracy;
        case ModelKind::Svm: return SelectionMetric::SvmAccuracy;
        case ModelKind::LinReg: return SelectionMetric::RegressionErrorStd;
    }
    return SelectionMetric::LdaAccuracy;
}

int cmd_select_channels(const Options& o, std::ostream& out, std::ostream& err) {
    std::vector<ModelKind> models;
    for (const auto& name : split(o.models, ',')) {
        const auto m = parse_model_kind(name);
        if (!m) throw UsageError("--models: unknown model '" + name + "'");
        if (std::find(models.begin(), models.end(), *m) == models.end()) models.push_back(*m);
    }
    const auto ks = parse_k_range(o.k_range);
    SelectionMetric primary = metric_for(models.front());
    if (!o.primary.empty()) {
        const auto p = parse_selection_metric(o.primary);
        if (!p) throw UsageError("--primary: unknown metric '" + o.primary + "'");
        if (std::none_of(models.begin(), models.end(), [&](ModelKind m) { return metric_for(m) == *p; })) {
            throw UsageError("--primary " + o.primary + " is not produced by --models " + o.models);
        }
        primary = *p;
    }
    if (o.folds < 2) throw UsageError("--folds must be at least 2");
    if (!o.channels.empty()) throw UsageError("--channels does not apply to select-channels");

    json model_cfg = json::array();
    for (ModelKind m : models) model_cfg.push_back(model_json(o, m));
    const json config{{"subcommand", "select-channels"},
                      {"manifest", o.manifest},
                      {"models", model_cfg},
                      {"power_features", feature_json(o, FeatureKind::Power)},
                      {"ar_features", feature_json(o, FeatureKind::Ar)},
                      {"cv", cv_json(o)},
                      {"k_range", ks},
                      {"primary", to_string(primary)}};
    log_run(err, "select-channels", o.seed, config);

    // SVM works on AR windows, the other families on per-trial power
    std::map<FeatureKind, Dataset> datasets;
    const auto trials = load_manifest(o.manifest);
    std::vector<SubsetEvaluator> evaluators;
    for (ModelKind m : models) {
        const FeatureKind kind = m == ModelKind::Svm ? FeatureKind::Ar : FeatureKind::Power;
        if (!datasets.contains(kind)) {
            std::vector<std::string> warnings;
            datasets[kind] = build_dataset(trials, feature_config(o, kind), &warnings, std::max<std::size_t>(o.jobs, 1));
            for (const auto& w : warnings) err << "emgstand: warning " << w << '\n';
        }
        CvOptions cv = cv_options(o);
        cv.jobs = 1;  // subsets are the parallel unit
        evaluators.push_back({metric_for(m), model_spec(o, m), column_subset_builder(datasets[kind]), cv});
    }
    const SelectionTable table = best_subset_per_k(evaluators, ks, std::max<std::size_t>(o.jobs, 1));

    emit(out, o.out, selection_csv(table, primary, o.all_rows));
    if (!o.json_out.empty()) {
        json j = to_json(table);
        j["config"] = config;
        write_text(o.json_out, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
    const json config{{"subcommand", "predict"}, {"model_file", o.model_file}, {"trial", o.trial}, {"sample_rate_hz", o.sample_rate_hz}};
    log_run(err, "predict", o.seed, config);

    const ModelDocument doc = load_model(o.model_file);
    const Recording rec = load_recording_any(o.trial, o.sample_rate_hz, o.trial_id);
    std::string warning;
    const auto features = extract_features(rec, doc.features, &warning);
    if (!warning.empty()) err << "emgstand: warning " << warning << '\n';
    if (features.empty()) fail(Errc::WindowTooShort, "trial " + rec.trial_id() + " yields no feature windows");

    // the model may use a channel subset; pick its columns by name
    std::vector<std::size_t> columns;
    for (const auto& name : doc.feature_names) {
        const auto& names = features.front().names;
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) fail(Errc::MuscleAbsentFromRecording, "trial " + rec.trial_id() + " has no feature " + name);
        columns.push_back(static_cast<std::size_t>(it - names.begin()));
    }

    const ModelKind kind = kind_of(doc.model);
    std::vector<double> preds;
    for (const auto& fv : features) {
        std::vector<double> x;
        x.reserve(columns.size());
        for (std::size_t c : columns) x.push_back(fv.values[c]);
        preds.push_back(predict(doc.model, x));
    }

    json result{{"trial_id", rec.trial_id()}, {"model", to_string(kind)}, {"n_windows", preds.size()}};
    if (kind == ModelKind::LinReg) {
        const double estimate = std::accumulate(preds.begin(), preds.end(), 0.0) / static_cast<double>(preds.size());
        const int score = static_cast<int>(std::lround(std::clamp(estimate, 1.0, 10.0)));
        result["score_estimate"] = estimate;
        result["score"] = score;
        result["assistance"] = to_string(StandingScore(score).assistance());
    } else {
        std::map<int, std::size_t> votes;
        for (double p : preds) ++votes[static_cast<int>(std::lround(p))];
        int best = votes.begin()->first;
        for (const auto& [label, count] : votes) {
            if (count > votes[best]) best = label;
        }
        if (kind == ModelKind::Lda) {
            result["class"] = best;
            result["assistance"] = best == 1 ? "Independent" : "Assisted";
        } else {
            result["score"] = best;
            result["assistance"] = to_string(StandingScore(best).assistance());
        }
    }
    out << result.dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// flag registration

void add_feature_flags(CLI::App* app, Options& o, bool with_kind) {
    if (with_kind) {
        app->add_option("--features", o.features, "Feature kind")->check(CLI::IsMember({"power", "ar"}))->capture_default_str();
    }
    app->add_option("--start-s", o.start_s, "Offset of the analysis window from the start of each trial (s)")->capture_default_str();
    app->add_option("--duration-s", o.duration_s, "Length of the power window and of the AR analysis span (s)")->capture_default_str();
    app->add_option("--ar-window-ms", o.ar_window_ms, "AR window length (ms)")->capture_default_str();
    app->add_option("--ar-hop-ms", o.ar_hop_ms, "AR window hop (ms)")->capture_default_str();
    app->add_option("--ar-order", o.ar_order, "AR model order")->capture_default_str();
    app->add_flag("--allow-short", o.allow_short, "Use the whole recording when it is shorter than the window");
}

void add_model_flags(CLI::App* app, Options& o, bool with_kind) {
    if (with_kind) {
        app->add_option("--model", o.model, "Model family")->check(CLI::IsMember({"lda", "svm", "linreg"}))->capture_default_str();
    }
    app->add_option("--gamma", o.gamma, "RBF kernel parameter")->capture_default_str();
    app->add_option("--c", o.c, "SVM box constraint")->capture_default_str();
    app->add_option("--kernel-convention", o.kernel_convention, "gamma: exp(-g d^2); scale: exp(-d^2 / g^2)")
        ->check(CLI::IsMember({"gamma", "scale"}))
        ->capture_default_str();
    app->add_option("--pca-target", o.pca_target, "Cumulative variance kept by PCA before the SVM")->capture_default_str();
    app->add_option("--pca-components", o.pca_components, "Fixed PCA dimension (0 = use --pca-target)")->capture_default_str();
    app->add_flag("--no-pca", o.no_pca, "Skip PCA before the SVM");
    app->add_flag("--standardize", o.standardize, "Z-score features before PCA and the SVM");
    app->add_option("--lda-priors", o.lda_priors, "LDA threshold priors")->check(CLI::IsMember({"equal", "empirical"}))->capture_default_str();
    app->add_flag("--no-ridge", o.no_ridge, "Fail on singular LDA/OLS systems instead of adding a small ridge");
    app->add_flag("--allow-ar-regression", o.allow_ar_regression, "Permit linreg on AR features");
}

void add_cv_flags(CLI::App* app, Options& o) {
    app->add_option("--folds", o.folds, "Number of cross-validation folds")->capture_default_str();
    app->add_flag("--no-stratify", o.no_stratify, "Do not stratify folds by class");
    app->add_option("--grouping", o.grouping, "Fold granularity; window leaks trial identity")
        ->check(CLI::IsMember({"trial", "window"}))
        ->capture_default_str();
}

void add_common_flags(CLI::App* app, Options& o) {
    app->add_option("--seed", o.seed, "Master random seed")->capture_default_str();
    app->add_option("--jobs", o.jobs, "Worker threads (results do not depend on it)")->capture_default_str();
}

std::string one_line(std::string s) {
    for (char& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

void report_error(std::ostream& err, std::string_view code, std::string_view category, int exit_code, const std::string& message) {
    err << "emgstand: error code=" << code << " category=" << category << " exit=" << exit_code
        << " message=" << json(one_line(message)).dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"EMG standing-quality pipeline", "emgstand"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Write a seeded synthetic dataset (trial CSVs and manifest.json)");
    simulate->add_option("--out", o.out, "Output directory")->required();
    simulate->add_option("--trials", o.n_trials, "Number of trials")->capture_default_str();
    simulate->add_option("--duration-s", o.sim_duration_s, "Trial length (s)")->capture_default_str();
    simulate->add_option("--sample-rate", o.sample_rate_hz, "Sample rate (Hz)")->capture_default_str();
    simulate->add_option("--informative", o.informative, "Muscles whose signal depends on the score (e.g. SOL,VL; all; none)")
        ->capture_default_str();
    simulate->add_option("--snr", o.snr, "Signal-to-noise power ratio (inf disables noise)")->capture_default_str();
    simulate->add_option("--gain-slope", o.gain_slope, "Relative gain increase per score step")->capture_default_str();
    simulate->add_option("--jitter", o.jitter, "Log-normal per-trial gain spread")->capture_default_str();
    simulate->add_flag("--pole-mode", o.pole_mode, "Also shift the dominant AR pole with the score");
    simulate->add_option("--weights", o.weights, "Ten comma-separated relative weights for scores 1..10");
    add_common_flags(simulate, o);

    auto* features = app.add_subcommand("features", "Extract power or AR features to CSV");
    features->add_option("--manifest", o.manifest, "Dataset manifest")->required();
    features->add_option("--out", o.out, "Output feature CSV")->required();
    features->add_option("--channels", o.channels, "Muscle subset, e.g. VL,SOL");
    add_feature_flags(features, o, true);
    add_common_flags(features, o);

    auto* train = app.add_subcommand("train", "Fit a model on every trial and save it as JSON");
    train->add_option("--manifest", o.manifest, "Dataset manifest");
    train->add_option("--features-file", o.features_file, "Precomputed feature CSV instead of a manifest");
    train->add_option("--out", o.out, "Output model file")->required();
    train->add_option("--channels", o.channels, "Muscle subset, e.g. VL,SOL");
    add_feature_flags(train, o, true);
    add_model_flags(train, o, true);
    add_common_flags(train, o);

    auto* evaluate = app.add_subcommand("evaluate", "Cross-validate a model and write a JSON report");
    evaluate->add_option("--manifest", o.manifest, "Dataset manifest");
    evaluate->add_option("--features-file", o.features_file, "Precomputed feature CSV instead of a manifest");
    evaluate->add_option("--out", o.out, "Report file (default: standard output)");
    evaluate->add_option("--text", o.text_out, "Also write a plain-text summary here");
    evaluate->add_option("--confusion-csv", o.confusion_out, "Also write the confusion matrix as CSV here");
    evaluate->add_option("--channels", o.channels, "Muscle subset, e.g. VL,SOL");
    add_feature_flags(evaluate, o, true);
    add_model_flags(evaluate, o, true);
    add_cv_flags(evaluate, o);
    add_common_flags(evaluate, o);

    auto* select = app.add_subcommand("select-channels", "Best muscle subset for each subset size");
    select->add_option("--manifest", o.manifest, "Dataset manifest")->required();
    select->add_option("--models", o.models, "Comma-separated model families to score (lda, svm, linreg)")->capture_default_str();
    select->add_option("--k-range", o.k_range, "Subset sizes: 1..6, 2, or 1,3")->capture_default_str();
    select->add_option("--primary", o.primary, "Metric that decides is_best_for_k (default: first model's)");
    select->add_flag("--all-rows", o.all_rows, "Write every subset, not only the winners");
    select->add_option("--out", o.out, "Output CSV (default: standard output)");
    select->add_option("--json", o.json_out, "Also write the full table as JSON here");
    select->add_option("--channels", o.channels, "Not supported here; rejected with a usage error");
    add_feature_flags(select, o, false);
    add_model_flags(select, o, false);
    add_cv_flags(select, o);
    add_common_flags(select, o);

    auto* predict_cmd = app.add_subcommand("predict", "Predict one trial with a saved model");
    predict_cmd->add_option("--model-file", o.model_file, "Model JSON written by train")->required();
    predict_cmd->add_option("--trial", o.trial, "Trial CSV")->required();
    predict_cmd->add_option("--trial-id", o.trial_id, "Trial id (default: file stem)");
    predict_cmd->add_option("--sample-rate", o.sample_rate_hz, "Sample rate (Hz)")->capture_default_str();
    predict_cmd->add_option("--seed", o.seed, "Logged only; prediction is deterministic");

    std::vector<std::string> argv_store{"emgstand"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, "Usage", "usage", kExitUsage, e.what());
        return kExitUsage;
    }

    try {
        check_common(o);
        if (*simulate) return cmd_simulate(o, out, err);
        if (*features) return cmd_features(o, out, err);
        if (*train) {
            require_input(o);
            return cmd_train(o, out, err);
        }
        if (*evaluate) {
            require_input(o);
            return cmd_evaluate(o, out, err);
        }
        if (*select) return cmd_select_channels(o, out, err);
        if (*predict_cmd) return cmd_predict(o, out, err);
        throw UsageError("no subcommand given");
    } catch (const UsageError& e) {
        report_error(err, "Usage", "usage", kExitUsage, e.what());
        return kExitUsage;
    } catch (const Error& e) {
        const bool convergence = e.category() == ErrorCategory::Convergence;
        const int code = convergence ? kExitConvergence : kExitData;
        report_error(err, to_string(e.code()), convergence ? "convergence" : "data", code, e.detail());
        return code;
    } catch (const fs::filesystem_error& e) {
        report_error(err, to_string(Errc::IoError), "data", kExitData, e.what());
        return kExitData;
    } catch (const std::exception& e) {
        report_error(err, "Internal", "internal", 1, e.what());
        return 1;
    }
}

}  // namespace emgstand::cli
