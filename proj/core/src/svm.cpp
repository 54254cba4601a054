#include "emgstand/error.hpp"
#include "emgstand/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace emgstand {

std::string_view to_string(KernelConvention k) noexcept { return k == KernelConvention::Scale ? "scale" : "gamma"; }

std::optional<KernelConvention> parse_kernel_convention(std::string_view s) noexcept {
    if (s == "gamma") return KernelConvention::Gamma;
    if (s == "scale") return KernelConvention::Scale;
    return std::nullopt;
}

double rbf_kernel(std::span<const double> u, std::span<const double> v, double coefficient) {
    return std::exp(-coefficient * squared_distance(u, v));
}

double SvmModel::kernel_coefficient() const noexcept {
    return convention == KernelConvention::Gamma ? gamma : 1.0 / (gamma * gamma);
}

std::size_t SvmModel::input_dim() const noexcept {
    if (standardizer) return standardizer->mean.size();
    if (pca) return pca->input_dim();
    return machines.empty() ? 0 : machines.front().support_vectors.cols();
}

std::vector<double> SvmModel::transform(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        fail(Errc::DimensionMismatch, "SVM expects " + std::to_string(input_dim()) + " features, got " + std::to_string(x.size()));
    }
    std::vector<double> z = standardizer ? standardizer->apply(x) : std::vector<double>(x.begin(), x.end());
    if (pca) z = pca_apply(*pca, z);
    return z;
}

double SvmModel::decision(const SvmBinary& machine, std::span<const double> z) const {
    const double g = kernel_coefficient();
    double f = machine.bias;
    for (std::size_t i = 0; i < machine.dual_coefs.size(); ++i) {
        f += machine.dual_coefs[i] * rbf_kernel(machine.support_vectors.row(i), z, g);
    }
    return f;
}

SvmModel svm_fit(const Matrix& x, std::span<const int> y, const SvmOptions& options) {
    if (y.size() != x.rows()) fail(Errc::LengthMismatch, "SVM labels do not match rows");
    if (!(options.gamma > 0.0) || !(options.c > 0.0)) fail(Errc::InvalidArgument, "gamma and C must be positive");
    const std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2) fail(Errc::SingleClassData, "SVM training data contains fewer than two classes");

    SvmModel m;
    m.classes.assign(distinct.begin(), distinct.end());
    m.gamma = options.gamma;
    m.c = options.c;
    m.convention = options.convention;

    Matrix z = x;
    if (options.standardize) {
        m.standardizer = Standardizer::fit(z);
        z = m.standardizer->apply(z);
    }
    if (options.pca_target || options.pca_components) {
        PcaOptions po;
        if (options.pca_target) po.variance_target = *options.pca_target;
        po.components = options.pca_components;
        m.pca = pca_fit(z, po);
        z = pca_apply(*m.pca, z);
    }

    const double g = m.kernel_coefficient();
    const SmoOptions smo{options.c, options.tol, options.max_passes};
    for (std::size_t a = 0; a < m.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < m.classes.size(); ++b) {
            std::vector<std::size_t> rows;
            std::vector<int> labels;
            for (std::size_t r = 0; r < y.size(); ++r) {
                if (y[r] == m.classes[a] || y[r] == m.classes[b]) {
                    rows.push_back(r);
                    labels.push_back(y[r] == m.classes[a] ? 1 : -1);
                }
            }
            const std::size_t n = rows.size();
            Matrix k(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                k(i, i) = 1.0;
                for (std::size_t j = i + 1; j < n; ++j) k(i, j) = k(j, i) = rbf_kernel(z.row(rows[i]), z.row(rows[j]), g);
            }
            SmoResult sol;
            try {
                sol = smo_solve(k, labels, smo);
            } catch (const Error& e) {
                throw e.with_context("class pair (" + std::to_string(m.classes[a]) + ", " + std::to_string(m.classes[b]) + ")");
            }
            SvmBinary machine;
            machine.positive_class = m.classes[a];
            machine.negative_class = m.classes[b];
            machine.bias = sol.bias;
            std::vector<std::size_t> sv;
            for (std::size_t i = 0; i < n; ++i) {
                if (sol.alphas[i] > 0.0) {
                    sv.push_back(rows[i]);
                    machine.dual_coefs.push_back(sol.alphas[i] * labels[i]);
                }
            }
            machine.support_vectors = z.select_rows(sv);
            m.machines.push_back(std::move(machine));
        }
    }
    return m;
}

int svm_predict(const SvmModel& m, std::span<const double> x) {
    const auto z = m.transform(x);
    std::vector<int> votes(m.classes.size(), 0);
    auto index_of = [&m](int cls) {
        return static_cast<std::size_t>(std::lower_bound(m.classes.begin(), m.classes.end(), cls) - m.classes.begin());
    };
    for (const auto& machine : m.machines) {
        const double f = m.decision(machine, z);
        ++votes[index_of(f > 0.0 ? machine.positive_class : machine.negative_class)];
    }
    // max_element returns the first maximum, i.e. the lowest class on ties
    const auto best = std::max_element(votes.begin(), votes.end());
    return m.classes[static_cast<std::size_t>(best - votes.begin())];
}

}  // namespace emgstand
