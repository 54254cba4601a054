#pragma once

#include "emgstand/signal.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

namespace emgstand {

/// Synthetic EMG generator settings. Each channel is white Gaussian noise
/// driven through a stable AR(4) shaping filter with score-dependent gain,
/// plus white measurement noise.
struct GeneratorConfig {
    std::size_t n_trials = 109;
    double duration_s = 60.0;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::uint64_t seed = 0;
    /// Relative weights of scores 1..10.
    std::array<double, 10> score_weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    MuscleSet informative_muscles = MuscleSet::all();
    /// Reference signal power over measurement-noise power; infinity disables noise.
    double snr = 10.0;
    /// Gain law g = g0 * (1 + gain_slope * (score - 1)) on informative muscles.
    double gain_slope = 0.15;
    /// Log-normal per-trial, per-channel gain spread (electrode contact variation).
    double trial_gain_jitter = 0.1;
    /// Also move the dominant AR pole pair with score on informative muscles.
    bool score_dependent_poles = false;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Prediction-form AR(4) coefficients of the shaping filter used for a
/// muscle at a score (score only matters with score_dependent_poles).
std::array<double, 4> shaping_coefficients(const GeneratorConfig& cfg, Muscle muscle, StandingScore score);

/// Deterministic gain g(muscle, score) before per-trial jitter.
double channel_gain(const GeneratorConfig& cfg, Muscle muscle, StandingScore score);

/// Stationary variance of the shaping filter driven by unit-variance noise.
double shaping_variance(const std::array<double, 4>& coefficients);

/// One 12-channel trial; bit-identical for the same (seed, trial_index, score).
Recording synth_trial(StandingScore score, const GeneratorConfig& cfg, std::size_t trial_index);

/// Scores for trials 0..n_trials-1 drawn from score_weights.
std::vector<StandingScore> draw_scores(const GeneratorConfig& cfg);

std::string synth_trial_id(std::size_t trial_index);

struct SyntheticTrial {
    Recording recording;
    StandingScore score;
};

/// All trials in memory.
std::vector<SyntheticTrial> synth_trials(const GeneratorConfig& cfg);

/// Writes one CSV per trial and `manifest.json` into `out_dir` (created if
/// needed). Returns the manifest entries. Throws IoError.
std::vector<TrialDescriptor> synth_dataset(const GeneratorConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace emgstand
