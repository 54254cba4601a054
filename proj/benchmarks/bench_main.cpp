#include "emgstand/features.hpp"
#include "emgstand/linalg.hpp"
#include "emgstand/models.hpp"
#include "emgstand/simulate.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace emgstand;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    std::vector<double> x(n);
    for (double& v : x) v = d(gen);
    for (std::size_t t = 2; t < n; ++t) x[t] += 0.5 * x[t - 1] - 0.2 * x[t - 2];
    return x;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = d(gen);
    }
    return m;
}

}  // namespace

// one 250 ms window up to a long recording
static void BM_ArFit(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(ar_fit(x, 4));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ArFit)->Arg(500)->Arg(100'000);

static void BM_ArFeaturesTrial(benchmark::State& state) {
    GeneratorConfig cfg;
    cfg.duration_s = 10.0;
    const Recording rec = synth_trial(StandingScore(5), cfg, 0);
    for (auto _ : state) benchmark::DoNotOptimize(ar_features(rec));
}
BENCHMARK(BM_ArFeaturesTrial)->Unit(benchmark::kMillisecond);

static void BM_SymEigen(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const Matrix g = random_matrix(p, p, 2);
    Matrix a(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) a(i, j) = g(i, j) + g(j, i);
    }
    for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(a));
}
BENCHMARK(BM_SymEigen)->Arg(12)->Arg(48)->Unit(benchmark::kMicrosecond);

static void BM_SmoSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix x = random_matrix(n, 8, 3);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2 == 0 ? 1 : -1;
        x(i, 0) += 0.7 * y[i];
    }
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k(i, j) = rbf_kernel(x.row(i), x.row(j), 0.79);
    }
    for (auto _ : state) benchmark::DoNotOptimize(smo_solve(k, y));
}
BENCHMARK(BM_SmoSolve)->Arg(100)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_SvmFit(benchmark::State& state) {
    const std::size_t n = 400;
    const Matrix x = random_matrix(n, 48, 4);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 1 + static_cast<int>(i % 10);
    for (auto _ : state) benchmark::DoNotOptimize(svm_fit(x, y));
}
BENCHMARK(BM_SvmFit)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
