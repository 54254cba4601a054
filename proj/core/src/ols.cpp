#include "emgstand/error.hpp"
#include "emgstand/models.hpp"

namespace emgstand {

LinRegModel ols_fit(const Matrix& x, std::span<const double> y, const OlsOptions& options) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols() + 1;
    if (y.size() != n) fail(Errc::LengthMismatch, "regression targets do not match rows");
    if (n < p) {
        fail(Errc::TooFewTrials, std::to_string(n) + " observations for " + std::to_string(p) + " coefficients");
    }

    // normal equations on the design [1 | X]
    Matrix xtx(p, p);
    std::vector<double> xty(p, 0.0);
    std::vector<double> row(p);
    for (std::size_t r = 0; r < n; ++r) {
        row[0] = 1.0;
        for (std::size_t c = 1; c < p; ++c) row[c] = x(r, c - 1);
        for (std::size_t i = 0; i < p; ++i) {
            xty[i] += row[i] * y[r];
            for (std::size_t j = i; j < p; ++j) xtx(i, j) += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < i; ++j) xtx(i, j) = xtx(j, i);
    }

    LinRegModel m;
    if (auto beta = cholesky_solve(xtx, xty)) {
        m.beta = std::move(*beta);
        return m;
    }
    if (!options.allow_ridge) fail(Errc::RankDeficient, "design matrix does not have full column rank");
    const double lambda = 1e-10 * trace(xtx) / static_cast<double>(p);
    for (std::size_t i = 0; i < p; ++i) xtx(i, i) += lambda;
    auto beta = cholesky_solve(xtx, xty, 0.0);
    if (!beta) fail(Errc::RankDeficient, "design matrix is singular even with ridge");
    m.beta = std::move(*beta);
    m.ridge_applied = true;
    return m;
}

double ols_predict(const LinRegModel& m, std::span<const double> x) {
    if (x.size() + 1 != m.beta.size()) {
        fail(Errc::DimensionMismatch, "regression expects " + std::to_string(m.beta.size() - 1) + " features, got " +
                                          std::to_string(x.size()));
    }
    double v = m.beta[0];
    for (std::size_t i = 0; i < x.size(); ++i) v += m.beta[i + 1] * x[i];
    return v;
}

}  // namespace emgstand
