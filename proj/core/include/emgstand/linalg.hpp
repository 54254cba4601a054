#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace emgstand {

/// Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    /// Builds an n x p matrix from n equally sized rows.
    static Matrix from_rows(std::span<const std::vector<double>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::vector<double> column(std::size_t c) const;
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transposed() const;
    /// Rows selected by index, in the given order.
    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> indices) const;
    [[nodiscard]] Matrix select_cols(std::span<const std::size_t> indices) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
double frobenius_norm(const Matrix& a);
double trace(const Matrix& a);

/// Column means of an n x p matrix.
std::vector<double> column_means(const Matrix& x);
/// Sample covariance (divisor n - 1) of the rows of x.
Matrix covariance(const Matrix& x);

struct SymmetricEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // column i pairs with values[i]
    int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a real symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm is below 1e-12 * ||A||_F, at most 100 sweeps.
/// Each eigenvector's largest-magnitude coordinate is made positive.
/// Throws NotSymmetric, NoConvergence.
SymmetricEigen sym_eigen(const Matrix& a);

/// Solves A x = b for symmetric positive definite A via Cholesky.
/// Returns nullopt when a pivot falls below `rel_pivot_tol` times the largest
/// diagonal entry (numerically rank deficient).
std::optional<std::vector<double>> cholesky_solve(const Matrix& a, std::span<const double> b,
                                                  double rel_pivot_tol = 1e-12);

struct PcaTransform {
    std::vector<double> mean;                // p
    Matrix components;                       // d x p, orthonormal rows
    std::vector<double> explained_fraction;  // d, descending
    std::vector<double> eigenvalues;         // all p covariance eigenvalues, descending

    [[nodiscard]] std::size_t input_dim() const noexcept { return mean.size(); }
    [[nodiscard]] std::size_t output_dim() const noexcept { return components.rows(); }
};

struct PcaOptions {
    double variance_target = 0.98;
    /// Fixed number of components; overrides variance_target. Capped at the
    /// number of strictly positive eigenvalues.
    std::optional<std::size_t> components;
};

/// Fits PCA on the rows of x (n >= 2). Throws DegenerateData when the data
/// has zero total variance, InvalidArgument for a bad target.
PcaTransform pca_fit(const Matrix& x, const PcaOptions& options = {});

/// components * (x - mean). Throws DimensionMismatch.
std::vector<double> pca_apply(const PcaTransform& t, std::span<const double> x);
Matrix pca_apply(const PcaTransform& t, const Matrix& x);

/// components^T * z + mean.
std::vector<double> pca_reconstruct(const PcaTransform& t, std::span<const double> z);

}  // namespace emgstand
