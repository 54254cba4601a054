#pragma once

#include "emgstand/features.hpp"
#include "emgstand/linalg.hpp"
#include "emgstand/signal.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emgstand {

enum class FeatureKind { Power, Ar };

std::string_view to_string(FeatureKind k) noexcept;
std::optional<FeatureKind> parse_feature_kind(std::string_view s) noexcept;

/// Parameters of feature extraction; stored with trained models so the same
/// features can be recomputed at prediction time.
struct FeatureConfig {
    FeatureKind kind = FeatureKind::Power;
    double start_s = 0.0;
    double duration_s = kDefaultPowerWindowS;  // power window, and AR analysis span
    double ar_window_ms = kDefaultArWindowMs;
    double ar_hop_ms = kDefaultArWindowMs;
    std::size_t ar_order = kDefaultArOrder;
    /// Use the whole recording when it is shorter than the requested window.
    bool allow_short = false;

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// One labeled observation. Power features give one sample per trial; AR
/// features give one sample per analysis window.
struct Sample {
    std::string trial_id;
    std::optional<std::size_t> window_index;
    std::vector<double> values;
    StandingScore score{1};
};

struct Dataset {
    FeatureKind kind = FeatureKind::Power;
    std::vector<std::string> feature_names;
    std::vector<Sample> samples;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return feature_names.size(); }
    [[nodiscard]] Matrix matrix() const;
    [[nodiscard]] Matrix matrix(std::span<const std::size_t> rows) const;
    /// Distinct trial ids, sorted, each paired with its score.
    [[nodiscard]] std::vector<std::pair<std::string, StandingScore>> trials() const;
};

/// Extracts features of one recording according to `config`. A recording
/// shorter than the window is an error unless `config.allow_short`, in
/// which case the full recording is used and `warning` (if given) is set.
std::vector<FeatureVector> extract_features(const Recording& rec, const FeatureConfig& config,
                                            std::string* warning = nullptr);

/// Appends the feature vectors of one trial.
void append_trial(Dataset& ds, std::span<const FeatureVector> features, StandingScore score);

/// Loads every trial of a manifest and extracts its features. Trials are
/// processed on up to `jobs` threads and appended in manifest order.
Dataset build_dataset(std::span<const TrialDescriptor> trials, const FeatureConfig& config,
                      std::vector<std::string>* warnings = nullptr, std::size_t jobs = 1);

/// Keeps only the feature columns that belong to channels of `muscles`.
/// Equivalent to select_channels followed by feature extraction, because
/// every feature is computed from a single channel.
Dataset restrict_to_muscles(const Dataset& ds, MuscleSet muscles);

/// CSV with header `trial_id,window_index,<names...>,score`. AR exports
/// start with a `#` comment line documenting the coefficient convention.
void write_feature_csv(const std::filesystem::path& path, const Dataset& ds);
Dataset read_feature_csv(const std::filesystem::path& path);

}  // namespace emgstand
