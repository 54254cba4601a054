#include "emgstand/linalg.hpp"

#include "emgstand/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emgstand {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) fail(Errc::DimensionMismatch, "ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::span<const std::vector<double>> rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) fail(Errc::DimensionMismatch, "rows of unequal length");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> indices) const {
    Matrix out(rows_, indices.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t j = 0; j < indices.size(); ++j) out(r, j) = (*this)(r, indices[j]);
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) fail(Errc::DimensionMismatch, "matrix product shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) fail(Errc::DimensionMismatch, "matrix-vector shape mismatch");
    std::vector<double> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += x(r, c);
    }
    for (double& m : mean) m /= static_cast<double>(x.rows());
    return mean;
}

Matrix covariance(const Matrix& x) {
    if (x.rows() < 2) fail(Errc::TooFewTrials, "covariance needs at least two rows");
    const auto mean = column_means(x);
    const std::size_t p = x.cols();
    Matrix cov(p, p);
    std::vector<double> centered(p);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < p; ++c) centered[c] = x(r, c) - mean[c];
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) cov(i, j) += centered[i] * centered[j];
        }
    }
    const double denom = static_cast<double>(x.rows() - 1);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            cov(i, j) /= denom;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

SymmetricEigen sym_eigen(const Matrix& a) {
    if (a.rows() != a.cols()) fail(Errc::NotSymmetric, "matrix is not square");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale) {
                fail(Errc::NotSymmetric, "A(" + std::to_string(i) + "," + std::to_string(j) + ") differs from its transpose");
            }
        }
    }

    Matrix m = a;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * (a(i, j) + a(j, i));
    }
    Matrix v = Matrix::identity(n);
    const double threshold = 1e-12 * frobenius_norm(m);

    auto off_norm = [&m, n] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * m(i, j) * m(i, j);
        }
        return std::sqrt(acc);
    };

    constexpr int kMaxSweeps = 100;
    int sweeps = 0;
    while (off_norm() > threshold) {
        if (sweeps == kMaxSweeps) {
            fail(Errc::NoConvergence, "Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
        }
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                m(p, q) = m(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&m](std::size_t x, std::size_t y) { return m(x, x) > m(y, y); });

    SymmetricEigen out;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        out.values[i] = m(src, src);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < n; ++k) {
            if (std::abs(v(k, src)) > std::abs(v(arg, src))) arg = k;
        }
        const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = sign * v(k, src);
    }
    return out;
}

std::optional<std::vector<double>> cholesky_solve(const Matrix& a, std::span<const double> b, double rel_pivot_tol) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) fail(Errc::DimensionMismatch, "cholesky_solve shape mismatch");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    if (!(max_diag > 0.0)) return std::nullopt;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > rel_pivot_tol * max_diag)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

PcaTransform pca_fit(const Matrix& x, const PcaOptions& options) {
    if (x.rows() < 2) fail(Errc::TooFewTrials, "PCA needs at least two observations");
    if (!(options.variance_target > 0.0 && options.variance_target <= 1.0)) {
        fail(Errc::InvalidArgument, "variance target must lie in (0, 1]");
    }
    for (double v : x.data()) {
        if (!std::isfinite(v)) fail(Errc::NonFiniteSample, "PCA input contains a non-finite value");
    }
    const auto eig = sym_eigen(covariance(x));
    const std::size_t p = x.cols();
    std::vector<double> lambda(p);
    for (std::size_t i = 0; i < p; ++i) lambda[i] = std::max(0.0, eig.values[i]);
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    if (!(total > 0.0)) fail(Errc::DegenerateData, "data has zero total variance");

    std::size_t positive = 0;
    while (positive < p && lambda[positive] > 1e-14 * total) ++positive;

    std::size_t d = 0;
    if (options.components) {
        if (*options.components == 0) fail(Errc::InvalidArgument, "PCA component count must be positive");
        d = std::min(*options.components, positive);
    } else {
        double cumulative = 0.0;
        while (d < positive) {
            cumulative += lambda[d] / total;
            ++d;
            if (cumulative >= options.variance_target - 1e-12) break;
        }
    }

    PcaTransform t;
    t.mean = column_means(x);
    t.components = Matrix(d, p);
    t.explained_fraction.resize(d);
    t.eigenvalues = lambda;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < p; ++k) t.components(i, k) = eig.vectors(k, i);
        t.explained_fraction[i] = lambda[i] / total;
    }
    return t;
}

std::vector<double> pca_apply(const PcaTransform& t, std::span<const double> x) {
    if (x.size() != t.input_dim()) {
        fail(Errc::DimensionMismatch, "PCA expects " + std::to_string(t.input_dim()) + " inputs, got " +
                                          std::to_string(x.size()));
    }
    std::vector<double> centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - t.mean[i];
    return t.components * std::span<const double>(centered);
}

Matrix pca_apply(const PcaTransform& t, const Matrix& x) {
    Matrix out(x.rows(), t.output_dim());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto z = pca_apply(t, x.row(r));
        std::copy(z.begin(), z.end(), out.row(r).begin());
    }
    return out;
}

std::vector<double> pca_reconstruct(const PcaTransform& t, std::span<const double> z) {
    if (z.size() != t.output_dim()) fail(Errc::DimensionMismatch, "PCA reconstruction dimension mismatch");
    std::vector<double> x = t.mean;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto comp = t.components.row(i);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += z[i] * comp[k];
    }
    return x;
}

}  // namespace emgstand
