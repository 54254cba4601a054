#include "emgstand/error.hpp"
#include "emgstand/models.hpp"

#include <cmath>
#include <limits>

namespace emgstand {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

double svm_dual_objective(const Matrix& kernel, std::span<const int> y, std::span<const double> alphas) {
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        linear += alphas[i];
        if (alphas[i] == 0.0) continue;
        for (std::size_t j = 0; j < alphas.size(); ++j) {
            quad += alphas[i] * alphas[j] * static_cast<double>(y[i] * y[j]) * kernel(i, j);
        }
    }
    return linear - 0.5 * quad;
}

// Two-variable decomposition with maximal-violating-pair selection using
// second-order gain (Fan, Chen & Lin working-set rule).
SmoResult smo_solve(const Matrix& kernel, std::span<const int> y, const SmoOptions& options) {
    const std::size_t n = y.size();
    if (kernel.rows() != n || kernel.cols() != n) fail(Errc::DimensionMismatch, "kernel matrix does not match labels");
    if (!(options.c > 0.0)) fail(Errc::InvalidArgument, "box constraint C must be positive");
    if (!(options.tol > 0.0)) fail(Errc::InvalidArgument, "SMO tolerance must be positive");
    bool has_pos = false;
    bool has_neg = false;
    for (int label : y) {
        if (label == 1) {
            has_pos = true;
        } else if (label == -1) {
            has_neg = true;
        } else {
            fail(Errc::InvalidArgument, "SMO labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) fail(Errc::SingleClassData, "SMO needs both label signs");

    const double c = options.c;
    auto q = [&](std::size_t i, std::size_t j) { return static_cast<double>(y[i] * y[j]) * kernel(i, j); };
    auto in_up = [&](std::size_t t, const std::vector<double>& a) {
        return (y[t] == 1 && a[t] < c) || (y[t] == -1 && a[t] > 0.0);
    };
    auto in_low = [&](std::size_t t, const std::vector<double>& a) {
        return (y[t] == 1 && a[t] > 0.0) || (y[t] == -1 && a[t] < c);
    };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // Q alpha - e
    const std::size_t max_iter = 20 * static_cast<std::size_t>(std::max(options.max_passes, 1)) * std::max<std::size_t>(n, 500);

    std::size_t iter = 0;
    while (true) {
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t, alpha) && -y[t] * grad[t] >= gmax) {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_gain = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t, alpha)) continue;
            const double yg = y[t] * grad[t];
            gmax2 = std::max(gmax2, yg);
            if (i == n) continue;
            const double diff = gmax + yg;
            if (diff > 0.0) {
                double quad = kernel(i, i) + kernel(t, t) - 2.0 * kernel(i, t);
                if (quad <= 0.0) quad = kTau;
                const double gain = -(diff * diff) / quad;
                if (gain <= best_gain) {
                    best_gain = gain;
                    j = t;
                }
            }
        }
        if (i == n || j == n || gmax + gmax2 < options.tol) break;
        if (++iter > max_iter) {
            fail(Errc::SmoNoConvergence, "no convergence after " + std::to_string(max_iter) + " updates (KKT gap " +
                                             std::to_string(gmax + gmax2) + ")");
        }

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        double quad = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
        if (quad <= 0.0) quad = kTau;
        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
    }

    // bias from free vectors, or the midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] == -1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] == 1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    double rho = 0.0;
    if (n_free > 0) {
        rho = sum_free / static_cast<double>(n_free);
    } else if (std::isfinite(ub) && std::isfinite(lb)) {
        rho = 0.5 * (ub + lb);
    } else {
        rho = std::isfinite(ub) ? ub : lb;
    }

    SmoResult out;
    out.iterations = iter;
    out.bias = -rho;
    double linear = 0.0;
    double quad_term = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        linear += alpha[t];
        quad_term += alpha[t] * (grad[t] + 1.0);
    }
    out.objective = linear - 0.5 * quad_term;
    out.alphas = std::move(alpha);
    return out;
}

}  // namespace emgstand
