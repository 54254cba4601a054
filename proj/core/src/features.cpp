#include "emgstand/features.hpp"

#include "emgstand/error.hpp"

#include <cmath>
#include <numeric>

namespace emgstand {

std::vector<double> remove_dc(std::span<const double> x) {
    if (x.empty()) return {};
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - mean;
    return out;
}

double mean_power(std::span<const double> x) {
    if (x.empty()) fail(Errc::EmptySignal, "mean power of an empty signal");
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) {
        fail(Errc::LagTooLarge, "lag " + std::to_string(max_lag) + " needs more than " + std::to_string(n) + " samples");
    }
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) acc += x[t] * x[t - k];
        r[k] = acc / static_cast<double>(n);
    }
    return r;
}

LevinsonResult levinson_durbin(std::span<const double> r) {
    if (r.size() < 2) fail(Errc::InvalidArgument, "levinson_durbin needs at least r[0] and r[1]");
    const std::size_t order = r.size() - 1;
    if (!(r[0] > 0.0) || !std::isfinite(r[0])) fail(Errc::DegenerateSignal, "zero-energy signal (r[0] = 0)");

    LevinsonResult out;
    out.coefficients.assign(order, 0.0);
    out.reflection.assign(order, 0.0);
    std::vector<double> prev(order, 0.0);
    double err = r[0];
    for (std::size_t m = 1; m <= order; ++m) {
        double acc = r[m];
        for (std::size_t j = 1; j < m; ++j) acc -= out.coefficients[j - 1] * r[m - j];
        const double k = acc / err;
        prev = out.coefficients;
        out.coefficients[m - 1] = k;
        for (std::size_t j = 1; j < m; ++j) out.coefficients[j - 1] = prev[j - 1] - k * prev[m - j - 1];
        out.reflection[m - 1] = k;
        err *= (1.0 - k * k);
        if (!(err > 1e-12 * r[0])) {
            fail(Errc::DegenerateSignal, "prediction error vanished at order " + std::to_string(m));
        }
    }
    out.prediction_error = err;
    return out;
}

std::vector<double> ar_fit(std::span<const double> x, std::size_t order) {
    if (order == 0) fail(Errc::InvalidArgument, "AR order must be positive");
    if (x.size() <= order) {
        fail(Errc::OrderTooLarge, "AR(" + std::to_string(order) + ") needs more than " + std::to_string(x.size()) + " samples");
    }
    const auto r = autocorrelation(x, order);
    if (!(r[0] > 0.0)) fail(Errc::DegenerateSignal, "zero-energy signal");
    return levinson_durbin(r).coefficients;
}

std::size_t window_count(std::size_t n_samples, std::size_t window_samples, std::size_t hop_samples) noexcept {
    if (window_samples == 0 || hop_samples == 0 || n_samples < window_samples) return 0;
    return (n_samples - window_samples) / hop_samples + 1;
}

std::vector<std::string> power_feature_names(std::span<const MuscleLabel> channels) {
    std::vector<std::string> out;
    out.reserve(channels.size());
    for (const auto& c : channels) out.push_back(c.name());
    return out;
}

std::vector<std::string> ar_feature_names(std::span<const MuscleLabel> channels, std::size_t order) {
    std::vector<std::string> out;
    out.reserve(channels.size() * order);
    for (const auto& c : channels) {
        for (std::size_t k = 1; k <= order; ++k) out.push_back(c.name() + "_a" + std::to_string(k));
    }
    return out;
}

FeatureVector power_features(const Recording& rec, double start_s, double duration_s) {
    const Recording window = slice_window(rec, start_s, duration_s);
    FeatureVector fv;
    fv.trial_id = rec.trial_id();
    fv.names = power_feature_names(window.channels());
    fv.values.reserve(window.channel_count());
    for (std::size_t c = 0; c < window.channel_count(); ++c) {
        fv.values.push_back(mean_power(remove_dc(window.channel(c))));
    }
    return fv;
}

std::vector<FeatureVector> ar_features(const Recording& rec, double window_ms, double hop_ms, std::size_t order) {
    if (!(window_ms > 0.0) || !(hop_ms > 0.0)) fail(Errc::InvalidArgument, "AR window and hop must be positive");
    const double rate = rec.sample_rate_hz();
    const auto window = static_cast<std::size_t>(std::llround(window_ms * rate / 1000.0));
    const auto hop = static_cast<std::size_t>(std::llround(hop_ms * rate / 1000.0));
    if (window < order + 1) {
        fail(Errc::WindowTooShort, std::to_string(window_ms) + " ms is " + std::to_string(window) +
                                       " samples, AR(" + std::to_string(order) + ") needs at least " +
                                       std::to_string(order + 1));
    }
    if (hop == 0) fail(Errc::InvalidArgument, "AR hop rounds to zero samples");

    const std::size_t count = window_count(rec.sample_count(), window, hop);
    const auto names = ar_feature_names(rec.channels(), order);
    std::vector<FeatureVector> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        FeatureVector fv;
        fv.trial_id = rec.trial_id();
        fv.window_index = w;
        fv.names = names;
        fv.values.reserve(names.size());
        for (std::size_t c = 0; c < rec.channel_count(); ++c) {
            const auto segment = rec.channel(c).subspan(w * hop, window);
            try {
                const auto centered = remove_dc(segment);
                // a constant window leaves only round-off after DC removal
                if (!(mean_power(centered) > 1e-12 * mean_power(segment))) {
                    fail(Errc::DegenerateSignal, "window is constant");
                }
                const auto coefs = ar_fit(centered, order);
                fv.values.insert(fv.values.end(), coefs.begin(), coefs.end());
            } catch (const Error& e) {
                throw e.with_context("trial " + rec.trial_id() + " channel " + rec.channels()[c].name() + " window " +
                                     std::to_string(w));
            }
        }
        out.push_back(std::move(fv));
    }
    return out;
}

}  // namespace emgstand
