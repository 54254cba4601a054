#include "emgstand/signal.hpp"

#include "emgstand/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace emgstand {

namespace {

constexpr std::array<std::string_view, kMuscleCount> kMuscleNames = {"GL", "MH", "VL", "TA", "MG", "SOL"};

}  // namespace

std::string_view to_string(Muscle m) noexcept { return kMuscleNames[static_cast<std::size_t>(m)]; }

std::optional<Muscle> parse_muscle(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kMuscleCount; ++i) {
        if (kMuscleNames[i] == name) return static_cast<Muscle>(i);
    }
    return std::nullopt;
}

std::string MuscleLabel::name() const {
    std::string out = side == Side::R ? "R_" : "L_";
    out += to_string(muscle);
    return out;
}

MuscleLabel MuscleLabel::from_canonical_index(std::size_t index) {
    if (index >= kChannelCount) fail(Errc::InvalidArgument, "channel index " + std::to_string(index) + " out of range");
    return {static_cast<Muscle>(index / 2), index % 2 == 0 ? Side::R : Side::L};
}

std::optional<MuscleLabel> MuscleLabel::parse(std::string_view name) noexcept {
    if (name.size() < 3 || name[1] != '_') return std::nullopt;
    Side side{};
    if (name[0] == 'R') {
        side = Side::R;
    } else if (name[0] == 'L') {
        side = Side::L;
    } else {
        return std::nullopt;
    }
    const auto muscle = parse_muscle(name.substr(2));
    if (!muscle) return std::nullopt;
    return MuscleLabel{*muscle, side};
}

std::vector<MuscleLabel> canonical_channels() {
    std::vector<MuscleLabel> out;
    out.reserve(kChannelCount);
    for (std::size_t i = 0; i < kChannelCount; ++i) out.push_back(MuscleLabel::from_canonical_index(i));
    return out;
}

MuscleSet::MuscleSet(std::initializer_list<Muscle> muscles) {
    for (Muscle m : muscles) insert(m);
}

std::optional<MuscleSet> MuscleSet::parse(std::string_view text) {
    MuscleSet out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find_first_of(",+ ", pos);
        const std::string_view token = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        if (!token.empty()) {
            const auto m = parse_muscle(token);
            if (!m) return std::nullopt;
            out.insert(*m);
        }
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

std::size_t MuscleSet::size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Muscle> MuscleSet::members() const {
    std::vector<Muscle> out;
    for (Muscle m : kAllMuscles) {
        if (contains(m)) out.push_back(m);
    }
    return out;
}

std::string MuscleSet::to_string(std::string_view sep) const {
    std::string out;
    for (Muscle m : members()) {
        if (!out.empty()) out += sep;
        out += emgstand::to_string(m);
    }
    return out;
}

std::string_view to_string(Assistance a) noexcept {
    return a == Assistance::Independent ? "Independent" : "Assisted";
}

StandingScore::StandingScore(int value) : value_(value) {
    if (value < 1 || value > 10) fail(Errc::ScoreOutOfRange, "score " + std::to_string(value) + " outside [1, 10]");
}

Recording::Recording(std::string trial_id, double sample_rate_hz, std::vector<MuscleLabel> channels,
                     std::vector<std::vector<double>> samples)
    : trial_id_(std::move(trial_id)), sample_rate_hz_(sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        fail(Errc::InvalidArgument, "sample rate must be positive and finite");
    }
    if (channels.empty()) fail(Errc::EmptySelection, "recording has no channels");
    if (channels.size() != samples.size()) {
        fail(Errc::DimensionMismatch, std::to_string(channels.size()) + " labels for " +
                                          std::to_string(samples.size()) + " sample rows");
    }
    std::vector<std::size_t> order(channels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return channels[a] < channels[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (channels[order[i]] == channels[order[i - 1]]) {
            fail(Errc::HeaderMismatch, "duplicate channel " + channels[order[i]].name());
        }
    }
    const std::size_t n = samples.front().size();
    if (n == 0) fail(Errc::EmptySignal, "recording has no samples");
    channels_.reserve(channels.size());
    samples_.reserve(channels.size());
    for (std::size_t idx : order) {
        if (samples[idx].size() != n) fail(Errc::RaggedRows, "channel " + channels[idx].name() + " has a different sample count");
        for (std::size_t t = 0; t < n; ++t) {
            if (!std::isfinite(samples[idx][t])) {
                fail(Errc::NonFiniteSample, "channel " + channels[idx].name() + " sample " + std::to_string(t));
            }
        }
        channels_.push_back(channels[idx]);
        samples_.push_back(std::move(samples[idx]));
    }
}

std::optional<std::size_t> Recording::find_channel(MuscleLabel label) const noexcept {
    const auto it = std::find(channels_.begin(), channels_.end(), label);
    if (it == channels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - channels_.begin());
}

MuscleSet Recording::muscles() const noexcept {
    MuscleSet out;
    for (const auto& c : channels_) out.insert(c.muscle);
    return out;
}

Recording slice_window(const Recording& rec, double start_s, double duration_s) {
    if (!(start_s >= 0.0) || !(duration_s > 0.0) || !std::isfinite(start_s) || !std::isfinite(duration_s)) {
        fail(Errc::WindowOutOfBounds, "window start must be >= 0 and duration > 0");
    }
    const double rate = rec.sample_rate_hz();
    const auto first = static_cast<std::size_t>(std::llround(start_s * rate));
    const auto count = static_cast<std::size_t>(std::llround(duration_s * rate));
    if (count == 0 || first + count > rec.sample_count()) {
        fail(Errc::WindowOutOfBounds, "window [" + std::to_string(start_s) + " s, +" + std::to_string(duration_s) +
                                          " s) exceeds recording " + rec.trial_id() + " of " +
                                          std::to_string(rec.duration_s()) + " s");
    }
    std::vector<std::vector<double>> out;
    out.reserve(rec.channel_count());
    for (std::size_t c = 0; c < rec.channel_count(); ++c) {
        const auto ch = rec.channel(c);
        out.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(first),
                         ch.begin() + static_cast<std::ptrdiff_t>(first + count));
    }
    return Recording(rec.trial_id(), rate, rec.channels(), std::move(out));
}

Recording select_channels(const Recording& rec, MuscleSet muscles) {
    if (muscles.empty()) fail(Errc::EmptySelection, "no muscles selected");
    std::vector<MuscleLabel> labels;
    std::vector<std::vector<double>> samples;
    for (Muscle m : muscles.members()) {
        for (Side s : {Side::R, Side::L}) {
            const MuscleLabel label{m, s};
            const auto idx = rec.find_channel(label);
            if (!idx) fail(Errc::MuscleAbsentFromRecording, label.name() + " not in recording " + rec.trial_id());
            const auto ch = rec.channel(*idx);
            labels.push_back(label);
            samples.emplace_back(ch.begin(), ch.end());
        }
    }
    return Recording(rec.trial_id(), rec.sample_rate_hz(), std::move(labels), std::move(samples));
}

}  // namespace emgstand
