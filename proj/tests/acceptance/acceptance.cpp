// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to run
// a subset, e.g. `acceptance 1 2 9`.

#include "emgstand/error.hpp"
#include "emgstand/evaluation.hpp"
#include "emgstand/features.hpp"
#include "emgstand/linalg.hpp"
#include "emgstand/models.hpp"
#include "emgstand/selection.hpp"
#include "emgstand/simulate.hpp"

#include "cli.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace emgstand;

namespace {

// -- pinned tolerances and budgets ------------------------------------------

constexpr double kArCoefficientTol = 0.02;
constexpr double kArFitBudgetS = 1.0;
constexpr std::size_t kArSamples = 100'000;

constexpr int kSmoInstances = 200;
constexpr double kSmoObjectiveTol = 1e-4;
constexpr double kSmoKktTol = 1e-3;

constexpr int kEigenInstances = 100;
constexpr std::size_t kEigenMaxDim = 48;
constexpr double kEigenResidualTol = 1e-8;   // times ||A||_F
constexpr double kEigenTraceTol = 1e-8;      // absolute
constexpr double kPcaReconstructionTol = 1e-6;  // relative

constexpr int kOlsInstances = 50;
constexpr double kOlsTol = 1e-6;

constexpr std::uint64_t kSynthSeed = 7;
constexpr std::size_t kSynthTrials = 109;
constexpr double kSynthDurationS = 60.0;

constexpr double kLdaAccuracyMin = 0.85;
constexpr double kLdaBudgetS = 30.0;
constexpr double kLdaReferenceAccuracy = 0.8991;  // reported, not asserted

constexpr double kSvmAccuracyMin = 0.6;
constexpr double kSvmBand1Min = 0.9;
constexpr double kSvmBudgetS = 300.0;
// AR span per trial; see the notes on runtime in README
constexpr double kSvmSpanS = 10.0;

constexpr double kSelectionBudgetS = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

oracle::Dense to_dense(const Matrix& m) {
    oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m(r, c);
    }
    return d;
}

/// In-memory analogue of synth_dataset followed by feature extraction; one
/// trial at a time so a full 60 s dataset never sits in memory.
Dataset synth_features(const GeneratorConfig& cfg, const FeatureConfig& features) {
    Dataset ds;
    ds.kind = features.kind;
    const auto scores = draw_scores(cfg);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const Recording rec = synth_trial(scores[i], cfg, i);
        append_trial(ds, extract_features(rec, features), scores[i]);
    }
    return ds;
}

// -- criteria ----------------------------------------------------------------

Outcome ar_recovery() {
    using C = std::complex<double>;
    const std::vector<C> poles{std::polar(0.9, 0.3), std::polar(0.9, -0.3), std::polar(0.6, 1.2), std::polar(0.6, -1.2)};
    const auto truth = oracle::coefficients_from_poles(poles);
    const auto x = oracle::simulate_ar(truth, kArSamples, 2024);
    const auto t0 = Clock::now();
    const auto est = ar_fit(x, 4);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(est[k] - truth[k]));
    return {worst <= kArCoefficientTol && elapsed < kArFitBudgetS,
            fmt("max |a_k - truth| = %.4f (tol %.2f), fit %.1f ms on %zu samples (budget %.0f s)", worst, kArCoefficientTol,
                elapsed * 1e3, kArSamples, kArFitBudgetS)};
}

Outcome smo_small_duals() {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> cdist(0.1, 20.0);
    double worst_gap = 0.0;
    double worst_kkt = 0.0;
    for (int trial = 0; trial < kSmoInstances; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        const Matrix x = testutil::gaussian_matrix(n, 2, gen);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (gen() & 1) ? 1 : -1;
        y[0] = 1;
        y[1] = -1;
        const double c = cdist(gen);
        Matrix k(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                k(i, j) = trial % 2 == 0 ? rbf_kernel(x.row(i), x.row(j), 0.5) : dot(x.row(i), x.row(j));
            }
        }
        const auto res = smo_solve(k, y, {c, kSmoKktTol, 50});
        const auto dense = to_dense(k);
        worst_gap = std::max(worst_gap, std::abs(res.objective - oracle::grid_dual_max(dense, y, c)));
        worst_kkt = std::max(worst_kkt, oracle::kkt_violation(dense, y, res.alphas, res.bias, c));
    }
    return {worst_gap <= kSmoObjectiveTol && worst_kkt <= kSmoKktTol,
            fmt("%d duals of 2-4 points: max |objective - grid| = %.2e (tol %.0e), max KKT violation = %.2e (tol %.0e)",
                kSmoInstances, worst_gap, kSmoObjectiveTol, worst_kkt, kSmoKktTol)};
}

Outcome eigen_pca() {
    std::mt19937_64 gen(12);
    double worst_residual = 0.0;  // relative to ||A||_F
    double worst_trace = 0.0;
    double worst_pca = 0.0;
    for (int trial = 0; trial < kEigenInstances; ++trial) {
        const std::size_t p = 2 + gen() % (kEigenMaxDim - 1);
        const Matrix g = testutil::gaussian_matrix(p, p, gen);
        Matrix a(p, p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) a(i, j) = 0.5 * (g(i, j) + g(j, i));
        }
        const auto eig = sym_eigen(a);
        const double norm_a = frobenius_norm(a);
        double sum = 0.0;
        for (std::size_t col = 0; col < p; ++col) {
            std::vector<double> v(p);
            for (std::size_t r = 0; r < p; ++r) v[r] = eig.vectors(r, col);
            auto av = a * std::span<const double>(v);
            for (std::size_t r = 0; r < p; ++r) av[r] -= eig.values[col] * v[r];
            worst_residual = std::max(worst_residual, norm2(av) / norm_a);
            sum += eig.values[col];
        }
        worst_trace = std::max(worst_trace, std::abs(sum - trace(a)));

        // PCA on data whose covariance has a spread spectrum of the same size
        const std::size_t n = p + 20;
        Matrix x = testutil::gaussian_matrix(n, p, gen);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < p; ++c) x(r, c) *= 1.0 + static_cast<double>(c);
        }
        const std::size_t d = 1 + gen() % (p - 1);
        const auto pca = pca_fit(x, {0.98, d});
        double err = 0.0;
        for (std::size_t r = 0; r < n; ++r) err += squared_distance(pca_reconstruct(pca, pca_apply(pca, x.row(r))), x.row(r));
        err /= static_cast<double>(n - 1);
        double discarded = 0.0;
        for (std::size_t i = pca.output_dim(); i < p; ++i) discarded += pca.eigenvalues[i];
        worst_pca = std::max(worst_pca, std::abs(err - discarded) / discarded);
    }
    return {worst_residual <= kEigenResidualTol && worst_trace <= kEigenTraceTol && worst_pca <= kPcaReconstructionTol,
            fmt("%d symmetric matrices p <= %zu: max ||Av - lv||/||A|| = %.1e (tol %.0e), max |sum l - tr| = %.1e (tol %.0e), "
                "max PCA reconstruction rel. error = %.1e (tol %.0e)",
                kEigenInstances, kEigenMaxDim, worst_residual, kEigenResidualTol, worst_trace, kEigenTraceTol, worst_pca,
                kPcaReconstructionTol)};
}

Outcome ols_oracle() {
    std::mt19937_64 gen(13);
    double worst = 0.0;
    for (int trial = 0; trial < kOlsInstances; ++trial) {
        const std::size_t n = 20 + gen() % 60;
        const std::size_t p = 1 + gen() % 8;
        const Matrix x = testutil::gaussian_matrix(n, p, gen);
        auto y = testutil::gaussian(n, gen, 2.0);
        for (std::size_t i = 0; i < n; ++i) y[i] += 3.0 + x(i, 0);
        const auto m = ols_fit(x, y, {false});
        oracle::Dense design(n, std::vector<double>(p + 1, 1.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < p; ++c) design[i][c + 1] = x(i, c);
        }
        const auto ref = oracle::coordinate_descent_ls(design, y);
        for (std::size_t c = 0; c <= p; ++c) worst = std::max(worst, std::abs(m.beta[c] - ref[c]));
    }
    return {worst <= kOlsTol,
            fmt("%d problems: max |beta - coordinate descent| = %.1e (tol %.0e)", kOlsInstances, worst, kOlsTol)};
}

GeneratorConfig synth_config() {
    GeneratorConfig cfg;
    cfg.n_trials = kSynthTrials;
    cfg.duration_s = kSynthDurationS;
    cfg.seed = kSynthSeed;
    return cfg;
}

CvOptions synth_cv() {
    CvOptions cv;
    cv.seed = kSynthSeed;
    return cv;
}

Outcome lda_power_pipeline() {
    const auto t0 = Clock::now();
    const Dataset ds = synth_features(synth_config(), FeatureConfig{});
    const auto report = cross_validate(ModelSpec{}, ds, synth_cv());
    const double elapsed = seconds_since(t0);
    return {report.accuracy >= kLdaAccuracyMin && elapsed < kLdaBudgetS,
            fmt("LDA on 12 power features, %zu trials, grouped 10-fold: accuracy %.4f (min %.2f; reference %.4f), %.1f s "
                "(budget %.0f s)",
                ds.size(), report.accuracy, kLdaAccuracyMin, kLdaReferenceAccuracy, elapsed, kLdaBudgetS)};
}

Outcome svm_ar_pipeline() {
    const auto t0 = Clock::now();
    auto cfg = synth_config();
    cfg.score_dependent_poles = true;
    // the generator is prefix-stable, so a shorter trial is the head of the 60 s one
    cfg.duration_s = kSvmSpanS + 2.0;
    FeatureConfig features;
    features.kind = FeatureKind::Ar;
    features.duration_s = kSvmSpanS;
    const Dataset ds = synth_features(cfg, features);
    ModelSpec spec;
    spec.kind = ModelKind::Svm;
    const auto report = cross_validate(spec, ds, synth_cv());
    const double elapsed = seconds_since(t0);
    const double band1 = report.bands ? report.bands->within_band[0] : 0.0;
    return {report.accuracy >= kSvmAccuracyMin && band1 >= kSvmBand1Min && elapsed < kSvmBudgetS,
            fmt("SVM (gamma %.2f, C %.0f) on AR(4) windows, %zu windows over %.0f s per trial, grouped 10-fold: accuracy %.4f "
                "(min %.1f), within +-1 %.4f (min %.1f), %.1f s (budget %.0f s)",
                spec.svm.gamma, spec.svm.c, ds.size(), kSvmSpanS, report.accuracy, kSvmAccuracyMin, band1, kSvmBand1Min,
                elapsed, kSvmBudgetS)};
}

Outcome channel_selection() {
    const auto t0 = Clock::now();
    auto cfg = synth_config();
    cfg.informative_muscles = MuscleSet{Muscle::SOL, Muscle::VL};
    const Dataset full = synth_features(cfg, FeatureConfig{});
    SubsetEvaluator ev;
    ev.builder = column_subset_builder(full);
    ev.cv = synth_cv();
    // regression winners are printed for comparison; the verdict uses LDA
    SubsetEvaluator reg = ev;
    reg.metric = SelectionMetric::RegressionErrorStd;
    reg.spec.kind = ModelKind::LinReg;
    const std::vector<SubsetEvaluator> evs{ev, reg};
    const std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6};
    const auto table = best_subset_per_k(evs, ks);
    const double elapsed = seconds_since(t0);

    const auto* k1 = table.best_for(SelectionMetric::LdaAccuracy, 1);
    const auto* k2 = table.best_for(SelectionMetric::LdaAccuracy, 2);
    const bool ok2 = k2 != nullptr && k2->muscles == MuscleSet{Muscle::SOL, Muscle::VL};
    const bool ok1 = k1 != nullptr && k1->muscles.contains(Muscle::SOL);
    auto acc = [](const SubsetResult* r) { return r ? r->metrics.at(SelectionMetric::LdaAccuracy) : 0.0; };
    double sol = 0.0, vl = 0.0;
    for (const auto& r : table.all) {
        if (r.muscles == MuscleSet{Muscle::SOL}) sol = acc(&r);
        if (r.muscles == MuscleSet{Muscle::VL}) vl = acc(&r);
    }
    const auto* r1 = table.best_for(SelectionMetric::RegressionErrorStd, 1);
    const auto* r2 = table.best_for(SelectionMetric::RegressionErrorStd, 2);
    auto names = [](const SubsetResult* r) { return r ? r->muscles.to_string(",") : std::string("-"); };
    return {ok1 && ok2 && table.all.size() == 63 && elapsed < kSelectionBudgetS,
            fmt("informative {SOL,VL}, LDA on power, %zu subsets: k=2 best {%s} (%.4f), k=1 best {%s} (%.4f; SOL %.4f, VL %.4f); "
                "linreg error std for comparison: k=2 {%s}, k=1 {%s}; %.1f s (budget %.0f s)",
                table.all.size(), names(k2).c_str(), acc(k2), names(k1).c_str(), acc(k1), sol, vl, names(r2).c_str(),
                names(r1).c_str(), elapsed, kSelectionBudgetS)};
}

Outcome determinism() {
    testutil::TempDir dir("acceptance");
    auto run = [](const std::vector<std::string>& args, std::string* out_text) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        if (out_text) *out_text = out.str();
        if (code != 0) throw std::runtime_error("cli exit " + std::to_string(code) + ": " + err.str());
    };
    const std::string data = (dir / "data").string();
    run({"simulate", "--out", data, "--trials", "30", "--duration-s", "2", "--seed", "5", "--pole-mode"}, nullptr);
    const std::string manifest = data + "/manifest.json";

    std::size_t compared = 0;
    bool identical = true;
    for (const char* model : {"lda", "svm", "linreg"}) {
        const std::string features = std::string(model) == "svm" ? "ar" : "power";
        std::vector<std::string> base{"evaluate", "--manifest", manifest, "--model", model, "--features", features,
                                      "--duration-s", "2", "--folds", "5", "--seed", "42"};
        std::string reference;
        for (const char* jobs : {"1", "1", "4"}) {
            auto args = base;
            args.insert(args.end(), {"--jobs", jobs});
            std::string out;
            run(args, &out);
            if (reference.empty()) {
                reference = out;
            } else {
                identical = identical && out == reference;
                ++compared;
            }
        }
    }
    return {identical, fmt("evaluate reports for lda, svm and linreg, seed 42, --jobs 1/1/4: %zu comparisons, %s", compared,
                           identical ? "byte-identical" : "DIFFER")};
}

Outcome regression_bands() {
    struct Fixture {
        std::vector<double> pred, truth;
        std::array<double, 3> bands;
        double std;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({{1, 5, 9, 3}, {1, 5, 9, 3}, {1, 1, 1}, 0.0});
    fixtures.push_back({{3, 4, 5, 6}, {1, 2, 3, 4}, {0, 1, 1}, 0.0});
    fixtures.push_back({{6, 4, 6, 4, 6, 4}, {5, 5, 5, 5, 5, 5}, {1, 1, 1}, 1.0});
    fixtures.push_back({{1, 2, 3, 4}, {1, 4, 3, 8}, {0.5, 0.75, 0.75}, std::sqrt(2.75)});
    {
        // 45 estimates, 26 within +-1 (57.8%): 12 at +1, 12 at -1, 2 exact, 5 at +2, 5 at -2, 4 at +3, 5 at -3
        Fixture f;
        auto add = [&](int count, double error) {
            for (int i = 0; i < count; ++i) {
                const double t = 1.0 + static_cast<double>(f.truth.size() % 4);
                f.truth.push_back(t);
                f.pred.push_back(t + error);
            }
        };
        add(12, 1);
        add(12, -1);
        add(2, 0);
        add(5, 2);
        add(5, -2);
        add(4, 3);
        add(5, -3);
        f.bands = {26.0 / 45.0, 36.0 / 45.0, 1.0};
        f.std = std::sqrt(724.0) / 15.0;  // var = 145/45 - (1/15)^2
        fixtures.push_back(f);
    }
    bool ok = true;
    double worst_std = 0.0;
    std::string headline;
    for (const auto& f : fixtures) {
        const auto r = regression_report(f.pred, f.truth);
        ok = ok && r.within_band == f.bands;
        worst_std = std::max(worst_std, std::abs(r.error_std - f.std));
        headline = fmt("%.1f%% of the estimates are within +-1", 100.0 * r.within_band[0]);
    }
    ok = ok && worst_std <= 1e-12;
    return {ok, fmt("%zu fixtures: band fractions exact, max |std - expected| = %.1e; last fixture: %s", fixtures.size(),
                    worst_std, headline.c_str())};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "ar-oracle-recovery", ar_recovery},
        {2, "smo-correctness", smo_small_duals},
        {3, "eigen-pca-correctness", eigen_pca},
        {4, "ols-oracle", ols_oracle},
        {5, "synthetic-lda-power", lda_power_pipeline},
        {6, "synthetic-svm-ar", svm_ar_pipeline},
        {7, "channel-selection", channel_selection},
        {8, "determinism", determinism},
        {9, "regression-metrics", regression_bands},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.contains(c.id)) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
