#include "emgstand/dataset.hpp"

#include "emgstand/error.hpp"
#include "emgstand/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace emgstand {

namespace {

constexpr std::string_view kArConventionComment =
    "# AR coefficients in prediction form: x[t] ~ a1*x[t-1] + a2*x[t-2] + ... ; innovation term omitted";

std::optional<MuscleLabel> channel_of_feature(std::string_view name) {
    const std::size_t suffix = name.find("_a");
    if (suffix != std::string_view::npos && name.find('_') != suffix) name = name.substr(0, suffix);
    return MuscleLabel::parse(name);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(FeatureKind k) noexcept { return k == FeatureKind::Ar ? "ar" : "power"; }

std::optional<FeatureKind> parse_feature_kind(std::string_view s) noexcept {
    if (s == "power") return FeatureKind::Power;
    if (s == "ar") return FeatureKind::Ar;
    return std::nullopt;
}

Matrix Dataset::matrix() const {
    Matrix m(samples.size(), dim());
    for (std::size_t r = 0; r < samples.size(); ++r) std::copy(samples[r].values.begin(), samples[r].values.end(), m.row(r).begin());
    return m;
}

Matrix Dataset::matrix(std::span<const std::size_t> rows) const {
    Matrix m(rows.size(), dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& v = samples[rows[r]].values;
        std::copy(v.begin(), v.end(), m.row(r).begin());
    }
    return m;
}

std::vector<std::pair<std::string, StandingScore>> Dataset::trials() const {
    std::map<std::string, StandingScore> seen;
    for (const auto& s : samples) seen.emplace(s.trial_id, s.score);
    return {seen.begin(), seen.end()};
}

std::vector<FeatureVector> extract_features(const Recording& rec, const FeatureConfig& config, std::string* warning) {
    double duration = config.duration_s;
    const double available = rec.duration_s() - config.start_s;
    const double one_sample = 1.0 / rec.sample_rate_hz();
    if (duration > available + 0.5 * one_sample && config.allow_short) {
        if (warning != nullptr) {
            *warning = "trial " + rec.trial_id() + " is " + std::to_string(rec.duration_s()) +
                       " s, shorter than the requested window; using the full recording";
        }
        duration = available;
    }
    if (config.kind == FeatureKind::Power) return {power_features(rec, config.start_s, duration)};
    const Recording span = slice_window(rec, config.start_s, duration);
    return ar_features(span, config.ar_window_ms, config.ar_hop_ms, config.ar_order);
}

void append_trial(Dataset& ds, std::span<const FeatureVector> features, StandingScore score) {
    for (const auto& fv : features) {
        if (ds.feature_names.empty() && ds.samples.empty()) ds.feature_names = fv.names;
        if (fv.names != ds.feature_names) {
            fail(Errc::DimensionMismatch, "trial " + fv.trial_id + " has a different feature layout");
        }
        ds.samples.push_back({fv.trial_id, fv.window_index, fv.values, score});
    }
}

Dataset build_dataset(std::span<const TrialDescriptor> trials, const FeatureConfig& config,
                      std::vector<std::string>* warnings, std::size_t jobs) {
    Dataset ds;
    ds.kind = config.kind;
    if (trials.empty()) return ds;

    // the first trial fixes the channel layout every other trial must match
    const Recording first = load_recording_any(trials[0].recording_path, trials[0].sample_rate_hz, trials[0].trial_id);
    const std::vector<MuscleLabel> expected = first.channels();

    std::vector<std::vector<FeatureVector>> features(trials.size());
    std::vector<std::string> trial_warnings(trials.size());
    parallel_for(trials.size(), jobs, [&](std::size_t i) {
        const auto& t = trials[i];
        if (i == 0) {
            features[i] = extract_features(first, config, &trial_warnings[i]);
            return;
        }
        const Recording rec = load_recording(t.recording_path, expected, t.sample_rate_hz, t.trial_id);
        features[i] = extract_features(rec, config, &trial_warnings[i]);
    });
    for (std::size_t i = 0; i < trials.size(); ++i) {
        if (!trial_warnings[i].empty() && warnings != nullptr) warnings->push_back(trial_warnings[i]);
        append_trial(ds, features[i], trials[i].score);
    }
    return ds;
}

Dataset restrict_to_muscles(const Dataset& ds, MuscleSet muscles) {
    if (muscles.empty()) fail(Errc::EmptySelection, "no muscles selected");
    std::vector<std::size_t> keep;
    MuscleSet present;
    for (std::size_t i = 0; i < ds.feature_names.size(); ++i) {
        const auto label = channel_of_feature(ds.feature_names[i]);
        if (!label) fail(Errc::InvalidArgument, "feature " + ds.feature_names[i] + " is not tied to a channel");
        present.insert(label->muscle);
        if (muscles.contains(label->muscle)) keep.push_back(i);
    }
    for (Muscle m : muscles.members()) {
        if (!present.contains(m)) fail(Errc::MuscleAbsentFromRecording, std::string(to_string(m)) + " has no features");
    }
    Dataset out;
    out.kind = ds.kind;
    for (std::size_t i : keep) out.feature_names.push_back(ds.feature_names[i]);
    out.samples.reserve(ds.samples.size());
    for (const auto& s : ds.samples) {
        Sample r{s.trial_id, s.window_index, {}, s.score};
        r.values.reserve(keep.size());
        for (std::size_t i : keep) r.values.push_back(s.values[i]);
        out.samples.push_back(std::move(r));
    }
    return out;
}

void write_feature_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write " + path.string());
    if (ds.kind == FeatureKind::Ar) out << kArConventionComment << '\n';
    out << "trial_id,window_index";
    for (const auto& n : ds.feature_names) out << ',' << n;
    out << ",score\n";
    for (const auto& s : ds.samples) {
        out << s.trial_id << ',';
        if (s.window_index) out << *s.window_index;
        for (double v : s.values) out << ',' << format_double(v);
        out << ',' << s.score.value() << '\n';
    }
    if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

Dataset read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::MissingFile, "cannot open " + path.string());
    Dataset ds;
    std::string line;
    bool header_seen = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            ds.kind = FeatureKind::Ar;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (!header_seen) {
            if (cells.size() < 3 || cells[0] != "trial_id" || cells[1] != "window_index" || cells.back() != "score") {
                fail(Errc::HeaderMismatch, path.string() + ": expected header trial_id,window_index,...,score");
            }
            ds.feature_names.assign(cells.begin() + 2, cells.end() - 1);
            header_seen = true;
            continue;
        }
        if (cells.size() != ds.feature_names.size() + 3) {
            fail(Errc::RaggedRows, path.string() + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " fields");
        }
        Sample s;
        s.trial_id = cells[0];
        if (!cells[1].empty()) s.window_index = static_cast<std::size_t>(std::stoull(cells[1]));
        for (std::size_t i = 0; i < ds.feature_names.size(); ++i) {
            const auto& c = cells[i + 2];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size() || !std::isfinite(v)) {
                fail(Errc::NonFiniteSample, path.string() + ": row " + std::to_string(row) + " feature " + ds.feature_names[i]);
            }
            s.values.push_back(v);
        }
        int score = 0;
        const auto& sc = cells.back();
        const auto [ptr, ec] = std::from_chars(sc.data(), sc.data() + sc.size(), score);
        if (ec != std::errc{} || ptr != sc.data() + sc.size()) {
            fail(Errc::MalformedManifest, path.string() + ": row " + std::to_string(row) + " has an invalid score");
        }
        s.score = StandingScore(score);
        ds.samples.push_back(std::move(s));
        ++row;
    }
    if (!header_seen) fail(Errc::HeaderMismatch, path.string() + ": empty feature file");
    if (ds.kind == FeatureKind::Power && std::any_of(ds.samples.begin(), ds.samples.end(),
                                                     [](const Sample& s) { return s.window_index.has_value(); })) {
        ds.kind = FeatureKind::Ar;
    }
    return ds;
}

}  // namespace emgstand
