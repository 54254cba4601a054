#include "emgstand/error.hpp"
#include "emgstand/models.hpp"

#include <cmath>

namespace emgstand {

Standardizer Standardizer::fit(const Matrix& x) {
    if (x.rows() < 2) fail(Errc::TooFewTrials, "standardization needs at least two rows");
    Standardizer s;
    s.mean = column_means(x);
    s.scale.assign(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(r, c) - s.mean[c];
            s.scale[c] += d * d;
        }
    }
    for (double& v : s.scale) {
        v = std::sqrt(v / static_cast<double>(x.rows() - 1));
        if (!(v > 0.0)) v = 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    if (x.size() != mean.size()) fail(Errc::DimensionMismatch, "standardizer dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / scale[i];
    return out;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.cols() != mean.size()) fail(Errc::DimensionMismatch, "standardizer dimension mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
    }
    return out;
}

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Lda: return "lda";
        case ModelKind::Svm: return "svm";
        case ModelKind::LinReg: return "linreg";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept {
    if (s == "lda") return ModelKind::Lda;
    if (s == "svm") return ModelKind::Svm;
    if (s == "linreg") return ModelKind::LinReg;
    return std::nullopt;
}

TrainedModel fit_model(const ModelSpec& spec, const Matrix& x, std::span<const StandingScore> scores) {
    if (scores.size() != x.rows()) fail(Errc::LengthMismatch, "labels do not match rows");
    switch (spec.kind) {
        case ModelKind::Lda: {
            std::vector<Assistance> y;
            y.reserve(scores.size());
            for (auto s : scores) y.push_back(s.assistance());
            return lda_fit(x, y, spec.lda);
        }
        case ModelKind::Svm: {
            std::vector<int> y;
            y.reserve(scores.size());
            for (auto s : scores) y.push_back(s.value());
            return svm_fit(x, y, spec.svm);
        }
        case ModelKind::LinReg: {
            std::vector<double> y;
            y.reserve(scores.size());
            for (auto s : scores) y.push_back(static_cast<double>(s.value()));
            return ols_fit(x, y, spec.ols);
        }
    }
    fail(Errc::InvalidArgument, "unknown model kind");
}

double predict(const TrainedModel& model, std::span<const double> x) {
    struct Visitor {
        std::span<const double> x;
        double operator()(const LdaModel& m) const { return lda_predict(m, x) == Assistance::Independent ? 1.0 : 0.0; }
        double operator()(const SvmModel& m) const { return static_cast<double>(svm_predict(m, x)); }
        double operator()(const LinRegModel& m) const { return ols_predict(m, x); }
    };
    return std::visit(Visitor{x}, model);
}

ModelKind kind_of(const TrainedModel& model) noexcept {
    switch (model.index()) {
        case 0: return ModelKind::Lda;
        case 1: return ModelKind::Svm;
        default: return ModelKind::LinReg;
    }
}

}  // namespace emgstand
