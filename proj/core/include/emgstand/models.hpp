#pragma once

#include "emgstand/linalg.hpp"
#include "emgstand/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace emgstand {

/// Per-feature z-scoring with training-set statistics. Constant features
/// keep scale 1 so they map to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] Matrix apply(const Matrix& x) const;
};

// ---------------------------------------------------------------------------
// Linear discriminant analysis (two classes)

enum class LdaPriors { Equal, Empirical };

struct LdaOptions {
    /// Adds 1e-6 * trace(S_w) / p to the pooled covariance diagonal.
    bool ridge = true;
    LdaPriors priors = LdaPriors::Equal;
};

struct LdaModel {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> mean_assisted;
    std::vector<double> mean_independent;

    /// Independent iff w.x > b; points on the hyperplane are Assisted.
    [[nodiscard]] double decision(std::span<const double> x) const;
};

/// Fisher discriminant w = (S_w + eps I)^-1 (mu_independent - mu_assisted).
/// Throws SingleClassData, SingularCovariance (ridge disabled), DegenerateData.
LdaModel lda_fit(const Matrix& x, std::span<const Assistance> y, const LdaOptions& options = {});
Assistance lda_predict(const LdaModel& m, std::span<const double> x);

// ---------------------------------------------------------------------------
// Sequential minimal optimization

struct SmoOptions {
    double c = 11.0;
    double tol = 1e-3;
    int max_passes = 50;
};

struct SmoResult {
    std::vector<double> alphas;
    double bias = 0.0;  // f(x) = sum_i alpha_i y_i K(x_i, x) + bias
    std::size_t iterations = 0;
    double objective = 0.0;  // dual objective sum(alpha) - 1/2 alpha'Qalpha
};

/// Solves the soft-margin SVM dual for a precomputed kernel matrix and +-1
/// labels. Stops once the maximal KKT violation is below `tol`; throws
/// SmoNoConvergence after 20 * max_passes * max(n, 500) pair updates.
SmoResult smo_solve(const Matrix& kernel, std::span<const int> y, const SmoOptions& options = {});

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double svm_dual_objective(const Matrix& kernel, std::span<const int> y, std::span<const double> alphas);

// ---------------------------------------------------------------------------
// RBF-kernel SVM, one-vs-one

/// How the kernel parameter is read: Gamma gives exp(-g |u-v|^2); Scale
/// treats it as a length scale s and gives exp(-|u-v|^2 / s^2).
enum class KernelConvention { Gamma, Scale };

std::string_view to_string(KernelConvention k) noexcept;
std::optional<KernelConvention> parse_kernel_convention(std::string_view s) noexcept;

struct SvmOptions {
    double gamma = 0.79;
    double c = 11.0;
    KernelConvention convention = KernelConvention::Gamma;
    /// Off by default: AR coefficients are already unit-free, and z-scoring
    /// a ~48-dim input makes exp(-0.79 d^2) vanish off the diagonal.
    bool standardize = false;
    /// Cumulative variance kept by PCA; nullopt disables PCA.
    std::optional<double> pca_target = 0.98;
    /// Fixed PCA dimension, overriding pca_target.
    std::optional<std::size_t> pca_components;
    double tol = 1e-3;
    int max_passes = 50;
};

struct SvmBinary {
    int positive_class = 0;  // label +1
    int negative_class = 0;  // label -1
    Matrix support_vectors;
    std::vector<double> dual_coefs;  // alpha_i * y_i
    double bias = 0.0;
};

struct SvmModel {
    std::vector<int> classes;  // sorted
    std::optional<Standardizer> standardizer;
    std::optional<PcaTransform> pca;
    double gamma = 0.79;
    double c = 11.0;
    KernelConvention convention = KernelConvention::Gamma;
    std::vector<SvmBinary> machines;

    /// Coefficient g in exp(-g |u-v|^2) for the configured convention.
    [[nodiscard]] double kernel_coefficient() const noexcept;
    [[nodiscard]] std::size_t input_dim() const noexcept;
    /// Standardize then project, as done during training.
    [[nodiscard]] std::vector<double> transform(std::span<const double> x) const;
    [[nodiscard]] double decision(const SvmBinary& machine, std::span<const double> z) const;
};

double rbf_kernel(std::span<const double> u, std::span<const double> v, double coefficient);

/// Throws SingleClassData; SmoNoConvergence names the failing class pair.
SvmModel svm_fit(const Matrix& x, std::span<const int> y, const SvmOptions& options = {});

/// Majority vote over all pairwise machines; ties go to the lower class.
int svm_predict(const SvmModel& m, std::span<const double> x);

// ---------------------------------------------------------------------------
// Ordinary least squares

struct OlsOptions {
    /// On a rank-deficient design, add a tiny ridge instead of failing.
    bool allow_ridge = true;
};

struct LinRegModel {
    std::vector<double> beta;  // intercept first
    bool ridge_applied = false;
};

/// Solves the normal equations with an intercept column. Throws
/// TooFewTrials, RankDeficient (ridge disabled).
LinRegModel ols_fit(const Matrix& x, std::span<const double> y, const OlsOptions& options = {});
double ols_predict(const LinRegModel& m, std::span<const double> x);

// ---------------------------------------------------------------------------
// Uniform front for the evaluation layer

enum class ModelKind { Lda, Svm, LinReg };

std::string_view to_string(ModelKind k) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept;

struct ModelSpec {
    ModelKind kind = ModelKind::Lda;
    LdaOptions lda;
    SvmOptions svm;
    OlsOptions ols;
};

using TrainedModel = std::variant<LdaModel, SvmModel, LinRegModel>;

/// Fits the model family in `spec` on rows of x with clinical scores.
/// LDA trains on the assisted/independent split of the scores.
TrainedModel fit_model(const ModelSpec& spec, const Matrix& x, std::span<const StandingScore> scores);

/// LDA: 0 (Assisted) or 1 (Independent). SVM: predicted score.
/// Linear regression: real-valued score estimate.
double predict(const TrainedModel& model, std::span<const double> x);

ModelKind kind_of(const TrainedModel& model) noexcept;

}  // namespace emgstand
