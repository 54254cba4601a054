#pragma once

#include "emgstand/signal.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emgstand {

inline constexpr std::size_t kDefaultArOrder = 4;
inline constexpr double kDefaultPowerWindowS = 50.0;
inline constexpr double kDefaultArWindowMs = 250.0;

/// Named feature values for one trial (power) or one analysis window (AR).
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> names;
    std::string trial_id;
    std::optional<std::size_t> window_index;
};

/// x minus its arithmetic mean.
std::vector<double> remove_dc(std::span<const double> x);

/// (1/N) * sum of x_i^2. Throws EmptySignal.
double mean_power(std::span<const double> x);

/// Biased autocorrelation r[k] = (1/N) sum_{t=k}^{N-1} x_t x_{t-k}, k = 0..max_lag.
/// Throws LagTooLarge when max_lag >= N.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

struct LevinsonResult {
    std::vector<double> coefficients;  // a_1..a_p, prediction form
    std::vector<double> reflection;    // k_1..k_p
    double prediction_error = 0.0;     // innovation variance estimate
};

/// Solves the Yule-Walker system for autocorrelation r[0..p] by the
/// Levinson-Durbin recursion. Throws DegenerateSignal when r[0] is not
/// positive or the prediction error collapses below 1e-12 * r[0].
LevinsonResult levinson_durbin(std::span<const double> r);

/// Yule-Walker AR coefficients a_1..a_order with x̂_t = sum_k a_k x_{t-k}.
/// The innovation term is not returned. Throws OrderTooLarge, DegenerateSignal.
std::vector<double> ar_fit(std::span<const double> x, std::size_t order = kDefaultArOrder);

/// One mean-power value per channel over the window, after per-channel DC
/// removal. Names are channel names ("R_GL", ...).
FeatureVector power_features(const Recording& rec, double start_s = 0.0, double duration_s = kDefaultPowerWindowS);

/// Per-window AR coefficients concatenated over channels in canonical
/// order. Each window is DC-removed before fitting; a trailing partial
/// window is dropped. Names are "<channel>_a<k>".
std::vector<FeatureVector> ar_features(const Recording& rec, double window_ms = kDefaultArWindowMs,
                                       double hop_ms = kDefaultArWindowMs, std::size_t order = kDefaultArOrder);

std::vector<std::string> power_feature_names(std::span<const MuscleLabel> channels);
std::vector<std::string> ar_feature_names(std::span<const MuscleLabel> channels, std::size_t order = kDefaultArOrder);

/// Number of complete windows: floor((n - window) / hop) + 1, or 0 when n < window.
std::size_t window_count(std::size_t n_samples, std::size_t window_samples, std::size_t hop_samples) noexcept;

}  // namespace emgstand
