#include "emgstand/error.hpp"
#include "emgstand/signal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace emgstand {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::MissingFile, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <typename F>
void for_each_field(std::string_view line, F&& f) {
    std::size_t col = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        f(col++, line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
}

Recording parse_recording(const fs::path& path, const std::vector<MuscleLabel>* expected, double sample_rate_hz,
                          std::string trial_id) {
    const std::string text = read_file(path);
    std::string_view rest(text);

    auto next_line = [&rest]() -> std::optional<std::string_view> {
        if (rest.empty()) return std::nullopt;
        const std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        return trim_cr(line);
    };

    const auto header = next_line();
    if (!header || header->empty()) fail(Errc::HeaderMismatch, path.string() + ": missing header row");

    std::vector<MuscleLabel> columns;
    for_each_field(*header, [&](std::size_t, std::string_view name) {
        const auto label = MuscleLabel::parse(trim_spaces(name));
        if (!label) fail(Errc::HeaderMismatch, path.string() + ": unknown channel name '" + std::string(name) + "'");
        columns.push_back(*label);
    });
    if (expected != nullptr) {
        auto lhs = columns;
        auto rhs = *expected;
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        if (lhs != rhs) {
            std::string want;
            for (const auto& l : rhs) want += (want.empty() ? "" : ",") + l.name();
            fail(Errc::HeaderMismatch, path.string() + ": header does not match expected channels {" + want + "}");
        }
    }

    std::vector<std::vector<double>> samples(columns.size());
    const std::size_t approx_rows = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    for (auto& s : samples) s.reserve(approx_rows);

    std::size_t row = 0;
    while (auto line = next_line()) {
        if (line->empty() && rest.empty()) break;  // trailing newline
        std::size_t fields = 0;
        for_each_field(*line, [&](std::size_t col, std::string_view cell) {
            fields = col + 1;
            if (col >= columns.size()) return;
            cell = trim_spaces(cell);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                fail(Errc::NonFiniteSample, path.string() + ": row " + std::to_string(row) + " column " +
                                                columns[col].name() + " is not a finite number");
            }
            samples[col].push_back(v);
        });
        if (fields != columns.size()) {
            fail(Errc::RaggedRows, path.string() + ": row " + std::to_string(row) + " has " + std::to_string(fields) +
                                       " fields, expected " + std::to_string(columns.size()));
        }
        ++row;
    }
    if (row == 0) fail(Errc::EmptySignal, path.string() + ": no sample rows");
    if (trial_id.empty()) trial_id = path.stem().string();
    return Recording(std::move(trial_id), sample_rate_hz, std::move(columns), std::move(samples));
}

}  // namespace

Recording load_recording(const fs::path& path, std::span<const MuscleLabel> expected_channels, double sample_rate_hz,
                         std::string trial_id) {
    const std::vector<MuscleLabel> expected(expected_channels.begin(), expected_channels.end());
    return parse_recording(path, &expected, sample_rate_hz, std::move(trial_id));
}

Recording load_recording_any(const fs::path& path, double sample_rate_hz, std::string trial_id) {
    return parse_recording(path, nullptr, sample_rate_hz, std::move(trial_id));
}

void write_recording(const fs::path& path, const Recording& rec, int significant_digits) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write " + path.string());
    std::string buf;
    for (std::size_t c = 0; c < rec.channel_count(); ++c) {
        if (c > 0) buf += ',';
        buf += rec.channels()[c].name();
    }
    buf += '\n';
    char cell[64];
    for (std::size_t t = 0; t < rec.sample_count(); ++t) {
        for (std::size_t c = 0; c < rec.channel_count(); ++c) {
            if (c > 0) buf += ',';
            const auto res = std::to_chars(cell, cell + sizeof cell, rec.channel(c)[t], std::chars_format::general,
                                           significant_digits);
            buf.append(cell, res.ptr);
        }
        buf += '\n';
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

std::vector<TrialDescriptor> load_manifest(const fs::path& path) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::MalformedManifest, path.string() + ": " + e.what());
    }
    if (!doc.is_object()) fail(Errc::MalformedManifest, path.string() + ": top level must be an object");

    double rate = kDefaultSampleRateHz;
    if (doc.contains("sample_rate_hz")) {
        const auto& r = doc["sample_rate_hz"];
        if (!r.is_number() || !(r.get<double>() > 0.0)) {
            fail(Errc::MalformedManifest, path.string() + ": field sample_rate_hz must be a positive number");
        }
        rate = r.get<double>();
    }
    if (!doc.contains("trials") || !doc["trials"].is_array()) {
        fail(Errc::MalformedManifest, path.string() + ": field trials must be an array");
    }

    const fs::path base = path.parent_path();
    std::vector<TrialDescriptor> out;
    const auto& trials = doc["trials"];
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        const std::string where = path.string() + ": trials[" + std::to_string(i) + "]";
        if (!t.is_object()) fail(Errc::MalformedManifest, where + " must be an object");
        if (!t.contains("id") || !t["id"].is_string()) fail(Errc::MalformedManifest, where + ".id must be a string");
        if (!t.contains("path") || !t["path"].is_string()) fail(Errc::MalformedManifest, where + ".path must be a string");
        if (!t.contains("score") || !t["score"].is_number_integer()) {
            fail(Errc::MalformedManifest, where + ".score must be an integer");
        }
        const auto id = t["id"].get<std::string>();
        const auto score = t["score"].get<long long>();
        if (score < 1 || score > 10) {
            fail(Errc::ScoreOutOfRange, "trial " + id + " has score " + std::to_string(score) + " outside [1, 10]");
        }
        fs::path rec_path = t["path"].get<std::string>();
        if (rec_path.is_relative()) rec_path = base / rec_path;
        out.push_back({id, rec_path, StandingScore(static_cast<int>(score)), rate});
    }
    return out;
}

void write_manifest(const fs::path& path, double sample_rate_hz, std::span<const TrialDescriptor> trials) {
    nlohmann::json doc;
    doc["sample_rate_hz"] = sample_rate_hz;
    doc["trials"] = nlohmann::json::array();
    const fs::path base = fs::absolute(path.parent_path().empty() ? fs::path(".") : path.parent_path()).lexically_normal();
    for (const auto& t : trials) {
        fs::path p = fs::absolute(t.recording_path).lexically_normal().lexically_relative(base);
        if (p.empty()) p = fs::absolute(t.recording_path);
        doc["trials"].push_back({{"id", t.trial_id}, {"path", p.generic_string()}, {"score", t.score.value()}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

}  // namespace emgstand
