#include "emgstand/error.hpp"
#include "emgstand/models.hpp"

#include <cmath>

namespace emgstand {

double LdaModel::decision(std::span<const double> x) const { return dot(w, x) - b; }

LdaModel lda_fit(const Matrix& x, std::span<const Assistance> y, const LdaOptions& options) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (y.size() != n) fail(Errc::LengthMismatch, "LDA labels do not match rows");
    if (p == 0) fail(Errc::DimensionMismatch, "LDA needs at least one feature");

    std::vector<double> mu0(p, 0.0);
    std::vector<double> mu1(p, 0.0);
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    for (std::size_t r = 0; r < n; ++r) {
        auto& mu = y[r] == Assistance::Independent ? mu1 : mu0;
        (y[r] == Assistance::Independent ? n1 : n0) += 1;
        for (std::size_t c = 0; c < p; ++c) mu[c] += x(r, c);
    }
    if (n0 == 0 || n1 == 0) fail(Errc::SingleClassData, "LDA training data contains only one class");
    for (std::size_t c = 0; c < p; ++c) {
        mu0[c] /= static_cast<double>(n0);
        mu1[c] /= static_cast<double>(n1);
    }

    Matrix sw(p, p);
    std::vector<double> d(p);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& mu = y[r] == Assistance::Independent ? mu1 : mu0;
        for (std::size_t c = 0; c < p; ++c) d[c] = x(r, c) - mu[c];
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) sw(i, j) += d[i] * d[j];
        }
    }
    const double denom = static_cast<double>(n > 2 ? n - 2 : 1);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            sw(i, j) /= denom;
            sw(j, i) = sw(i, j);
        }
    }

    double tol = 1e-12;
    if (options.ridge) {
        double eps = 1e-6 * trace(sw) / static_cast<double>(p);
        if (!(eps > 0.0)) eps = 1e-6;
        for (std::size_t i = 0; i < p; ++i) sw(i, i) += eps;
        tol = 0.0;
    }
    std::vector<double> diff(p);
    for (std::size_t c = 0; c < p; ++c) diff[c] = mu1[c] - mu0[c];
    auto w = cholesky_solve(sw, diff, tol);
    if (!w) fail(Errc::SingularCovariance, "pooled within-class covariance is singular");
    if (!(norm2(*w) > 0.0)) fail(Errc::DegenerateData, "class means coincide; no discriminant direction");

    LdaModel m;
    m.w = std::move(*w);
    std::vector<double> mid(p);
    for (std::size_t c = 0; c < p; ++c) mid[c] = 0.5 * (mu0[c] + mu1[c]);
    m.b = dot(m.w, mid);
    if (options.priors == LdaPriors::Empirical) m.b -= std::log(static_cast<double>(n1) / static_cast<double>(n0));
    m.mean_assisted = std::move(mu0);
    m.mean_independent = std::move(mu1);
    return m;
}

Assistance lda_predict(const LdaModel& m, std::span<const double> x) {
    if (x.size() != m.w.size()) {
        fail(Errc::DimensionMismatch, "LDA expects " + std::to_string(m.w.size()) + " features, got " + std::to_string(x.size()));
    }
    return m.decision(x) > 0.0 ? Assistance::Independent : Assistance::Assisted;
}

}  // namespace emgstand
