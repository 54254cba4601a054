#include "emgstand/simulate.hpp"

#include "emgstand/error.hpp"
#include "emgstand/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace emgstand {

namespace {

// reference amplitude (mV RMS) per muscle at score 1
constexpr std::array<double, kMuscleCount> kReferenceRms = {0.040, 0.030, 0.060, 0.035, 0.050, 0.080};

constexpr double kPrimaryRadius = 0.9;
constexpr double kPrimaryCos = 0.95;
constexpr double kPoleCosStep = 0.025;
constexpr double kSecondaryRadius = 0.7;
constexpr std::size_t kBurnIn = 2000;

}  // namespace

void GeneratorConfig::validate() const {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) fail(Errc::InvalidConfig, "duration_s must be positive");
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) fail(Errc::InvalidConfig, "sample_rate_hz must be positive");
    if (!(snr > 0.0)) fail(Errc::InvalidConfig, "snr must be positive");
    if (!(gain_slope >= 0.0)) fail(Errc::InvalidConfig, "gain_slope must be nonnegative");
    if (!(trial_gain_jitter >= 0.0)) fail(Errc::InvalidConfig, "trial_gain_jitter must be nonnegative");
    double total = 0.0;
    for (double w : score_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) fail(Errc::InvalidConfig, "score weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0)) fail(Errc::InvalidConfig, "score weights must not all be zero");
    if (std::llround(duration_s * sample_rate_hz) < 1) fail(Errc::InvalidConfig, "trial shorter than one sample");
}

std::array<double, 4> shaping_coefficients(const GeneratorConfig& cfg, Muscle muscle, StandingScore score) {
    double c1 = kPrimaryCos;
    if (cfg.score_dependent_poles && cfg.informative_muscles.contains(muscle)) {
        c1 -= kPoleCosStep * static_cast<double>(score.value() - 1);
    }
    const double c2 = std::cos(2.0 * std::numbers::pi * 0.2);
    // each pole pair contributes x_t = p x_{t-1} + q x_{t-2}
    const double p1 = 2.0 * kPrimaryRadius * c1;
    const double q1 = -kPrimaryRadius * kPrimaryRadius;
    const double p2 = 2.0 * kSecondaryRadius * c2;
    const double q2 = -kSecondaryRadius * kSecondaryRadius;
    return {p1 + p2, q1 + q2 - p1 * p2, -(p1 * q2 + p2 * q1), -q1 * q2};
}

double channel_gain(const GeneratorConfig& cfg, Muscle muscle, StandingScore score) {
    const double g0 = kReferenceRms[static_cast<std::size_t>(muscle)];
    if (!cfg.informative_muscles.contains(muscle)) return g0;
    return g0 * (1.0 + cfg.gain_slope * static_cast<double>(score.value() - 1));
}

double shaping_variance(const std::array<double, 4>& a) {
    // sum of squared impulse response
    std::array<double, 4> hist{};
    double h = 1.0;
    double total = 0.0;
    for (int t = 0; t < 20000; ++t) {
        if (t > 0) h = a[0] * hist[0] + a[1] * hist[1] + a[2] * hist[2] + a[3] * hist[3];
        total += h * h;
        hist = {h, hist[0], hist[1], hist[2]};
    }
    return total;
}

std::string synth_trial_id(std::size_t trial_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trial_%03zu", trial_index);
    return buf;
}

Recording synth_trial(StandingScore score, const GeneratorConfig& cfg, std::size_t trial_index) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate_hz));
    const auto channels = canonical_channels();
    std::vector<std::vector<double>> samples(channels.size(), std::vector<double>(n));
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Muscle m = channels[c].muscle;
        Rng rng(derive_seed(cfg.seed, "channel", trial_index * kChannelCount + c));
        const auto a = shaping_coefficients(cfg, m, score);
        // the filter is normalized so that gain equals the channel RMS
        const double unit_std = std::sqrt(shaping_variance(a));
        const double jitter = cfg.trial_gain_jitter > 0.0 ? std::exp(cfg.trial_gain_jitter * rng.normal()) : 1.0;
        const double gain = channel_gain(cfg, m, score) * jitter / unit_std;
        const double noise_std = std::isinf(cfg.snr) ? 0.0 : kReferenceRms[static_cast<std::size_t>(m)] / std::sqrt(cfg.snr);

        std::array<double, 4> hist{};
        auto& out = samples[c];
        for (std::size_t t = 0; t < kBurnIn + n; ++t) {
            const double x = a[0] * hist[0] + a[1] * hist[1] + a[2] * hist[2] + a[3] * hist[3] + rng.normal();
            hist = {x, hist[0], hist[1], hist[2]};
            if (t >= kBurnIn) {
                double v = gain * x;
                if (noise_std > 0.0) v += noise_std * rng.normal();
                out[t - kBurnIn] = v;
            }
        }
    }
    return Recording(synth_trial_id(trial_index), cfg.sample_rate_hz, channels, std::move(samples));
}

std::vector<StandingScore> draw_scores(const GeneratorConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, "scores"));
    double total = 0.0;
    for (double w : cfg.score_weights) total += w;
    std::vector<StandingScore> out;
    out.reserve(cfg.n_trials);
    for (std::size_t i = 0; i < cfg.n_trials; ++i) {
        const double u = rng.uniform() * total;
        double acc = 0.0;
        int chosen = 10;
        for (int s = 1; s <= 10; ++s) {
            const double w = cfg.score_weights[static_cast<std::size_t>(s - 1)];
            acc += w;
            if (w > 0.0 && u < acc) {
                chosen = s;
                break;
            }
        }
        // guard against round-off landing past the last positive weight
        while (cfg.score_weights[static_cast<std::size_t>(chosen - 1)] == 0.0) --chosen;
        out.emplace_back(chosen);
    }
    return out;
}

std::vector<SyntheticTrial> synth_trials(const GeneratorConfig& cfg) {
    const auto scores = draw_scores(cfg);
    std::vector<SyntheticTrial> out;
    out.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({synth_trial(scores[i], cfg, i), scores[i]});
    return out;
}

std::vector<TrialDescriptor> synth_dataset(const GeneratorConfig& cfg, const std::filesystem::path& out_dir) {
    const auto scores = draw_scores(cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(Errc::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<TrialDescriptor> trials;
    trials.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const Recording rec = synth_trial(scores[i], cfg, i);
        const auto file = out_dir / (rec.trial_id() + ".csv");
        write_recording(file, rec);
        trials.push_back({rec.trial_id(), file, scores[i], cfg.sample_rate_hz});
    }
    write_manifest(out_dir / "manifest.json", cfg.sample_rate_hz, trials);
    return trials;
}

}  // namespace emgstand
