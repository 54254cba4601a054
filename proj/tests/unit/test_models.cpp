#include "emgstand/error.hpp"
#include "emgstand/models.hpp"
#include "emgstand/persistence.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace emgstand;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an emgstand::Error");
    return Errc::InvalidArgument;
}

oracle::Dense to_dense(const Matrix& m) {
    oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m(r, c);
    }
    return d;
}

Matrix linear_kernel(const Matrix& x) { return x * x.transposed(); }

Matrix rbf_gram(const Matrix& x, double g) {
    Matrix k(x.rows(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) k(i, j) = std::exp(-g * squared_distance(x.row(i), x.row(j)));
    }
    return k;
}

/// Two Gaussian clusters `sep` apart along the first axis; rows alternate classes.
void clusters(std::size_t n, std::size_t p, double sep, std::mt19937_64& gen, Matrix& x, std::vector<Assistance>& y) {
    x = testutil::gaussian_matrix(n, p, gen);
    y.assign(n, Assistance::Assisted);
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 2 == 1) {
            y[i] = Assistance::Independent;
            x(i, 0) += sep;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// SMO

TEST_CASE("SMO on a hand-solvable two-point problem") {
    // 1-D points 3 (+1) and 1 (-1), linear kernel: alpha = 1/2 each, w = 1, b = -2
    const Matrix x{{3.0}, {1.0}};
    const std::vector<int> y{1, -1};
    const auto res = smo_solve(linear_kernel(x), y, {11.0, 1e-3, 50});
    CHECK(res.alphas[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.alphas[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.bias == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(res.objective == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("SMO puts identical points with opposite labels at the bound") {
    const Matrix k{{1.0, 1.0}, {1.0, 1.0}};
    const std::vector<int> y{1, -1};
    const auto res = smo_solve(k, y, {2.5, 1e-3, 50});
    CHECK(res.alphas[0] == doctest::Approx(2.5));
    CHECK(res.alphas[1] == doctest::Approx(2.5));
}

TEST_CASE("SMO matches a dense grid search on small duals") {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::size_t> size(2, 4);
    std::uniform_real_distribution<double> cdist(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = size(gen);
        const Matrix x = testutil::gaussian_matrix(n, 2, gen);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (gen() & 1) ? 1 : -1;
        y[0] = 1;
        y[1] = -1;
        const double c = cdist(gen);
        const Matrix k = trial % 2 == 0 ? rbf_gram(x, 0.5) : linear_kernel(x);
        const auto res = smo_solve(k, y, {c, 1e-3, 50});
        const double grid = oracle::grid_dual_max(to_dense(k), y, c);
        CHECK(std::abs(res.objective - grid) <= 1e-4);
        CHECK(oracle::kkt_violation(to_dense(k), y, res.alphas, res.bias, c) <= 1e-3);
        for (double a : res.alphas) {
            CHECK(a >= 0.0);
            CHECK(a <= c);
        }
    }
}

TEST_CASE("SMO satisfies KKT conditions on larger problems") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 60;
        Matrix x = testutil::gaussian_matrix(n, 3, gen);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i % 2 == 0 ? 1 : -1;
            x(i, 0) += y[i] * 0.8;
        }
        const Matrix k = rbf_gram(x, 0.3);
        const double c = trial % 2 == 0 ? 1.0 : 11.0;
        const auto res = smo_solve(k, y, {c, 1e-3, 50});
        CHECK(oracle::kkt_violation(to_dense(k), y, res.alphas, res.bias, c) <= 1e-3);
        double balance = 0.0;
        for (std::size_t i = 0; i < n; ++i) balance += res.alphas[i] * y[i];
        CHECK(std::abs(balance) <= 1e-9 * c * static_cast<double>(n));
        CHECK(res.objective == doctest::Approx(svm_dual_objective(k, y, res.alphas)));
    }
}

TEST_CASE("SMO input errors") {
    const Matrix k = Matrix::identity(2);
    CHECK(code_of([&] { smo_solve(k, std::vector<int>{1, 1}); }) == Errc::SingleClassData);
    CHECK(code_of([&] { smo_solve(k, std::vector<int>{1, 0}); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { smo_solve(k, std::vector<int>{1, -1, 1}); }) == Errc::DimensionMismatch);
    CHECK(code_of([&] { smo_solve(k, std::vector<int>{1, -1}, {0.0, 1e-3, 50}); }) == Errc::InvalidArgument);
}

// ---------------------------------------------------------------------------
// LDA

TEST_CASE("LDA separates well-separated clusters") {
    std::mt19937_64 gen(10);
    Matrix x;
    std::vector<Assistance> y;
    clusters(200, 12, 6.0, gen, x, y);
    const auto m = lda_fit(x, y);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) correct += lda_predict(m, x.row(i)) == y[i];
    CHECK(static_cast<double>(correct) / 200.0 >= 0.99);
    CHECK(lda_predict(m, m.mean_independent) == Assistance::Independent);
    CHECK(lda_predict(m, m.mean_assisted) == Assistance::Assisted);
}

TEST_CASE("LDA on identical class distributions is at chance on held-out data") {
    std::mt19937_64 gen(11);
    Matrix x;
    std::vector<Assistance> y;
    clusters(400, 4, 0.0, gen, x, y);
    const auto m = lda_fit(x, y);
    Matrix test;
    std::vector<Assistance> ty;
    clusters(2000, 4, 0.0, gen, test, ty);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.rows(); ++i) correct += lda_predict(m, test.row(i)) == ty[i];
    CHECK(std::abs(static_cast<double>(correct) / 2000.0 - 0.5) <= 0.1);
}

TEST_CASE("LDA points on the hyperplane are Assisted") {
    const Matrix x{{0.0}, {0.1}, {1.9}, {2.0}};
    const std::vector<Assistance> y{Assistance::Assisted, Assistance::Assisted, Assistance::Independent, Assistance::Independent};
    const auto m = lda_fit(x, y);
    const std::vector<double> mid{m.b / m.w[0]};
    CHECK(m.decision(mid) == doctest::Approx(0.0).epsilon(1e-12));
    // evaluate exactly at w.x == b
    LdaModel exact = m;
    exact.w = {1.0};
    exact.b = 1.0;
    CHECK(lda_predict(exact, std::vector<double>{1.0}) == Assistance::Assisted);
    CHECK(lda_predict(exact, std::vector<double>{1.0 + 1e-12}) == Assistance::Independent);
}

TEST_CASE("LDA labels survive rescaling of (w, b) and affine transforms with refit") {
    std::mt19937_64 gen(12);
    Matrix x;
    std::vector<Assistance> y;
    clusters(120, 3, 2.5, gen, x, y);
    const auto m = lda_fit(x, y);

    LdaModel scaled = m;
    for (double& w : scaled.w) w *= 7.5;
    scaled.b *= 7.5;

    const Matrix a{{2.0, 0.3, -0.1}, {0.0, 0.5, 0.2}, {0.4, 0.0, 3.0}};
    Matrix moved = x * a.transposed();
    for (std::size_t i = 0; i < moved.rows(); ++i) {
        moved(i, 0) += 10.0;
        moved(i, 2) -= 4.0;
    }
    const auto refit = lda_fit(moved, y);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto base = lda_predict(m, x.row(i));
        CHECK(lda_predict(scaled, x.row(i)) == base);
        CHECK(lda_predict(refit, moved.row(i)) == base);
    }
}

TEST_CASE("LDA errors") {
    const Matrix x{{1.0, 2.0}, {2.0, 1.0}};
    CHECK(code_of([&] { lda_fit(x, std::vector<Assistance>{Assistance::Assisted, Assistance::Assisted}); }) == Errc::SingleClassData);
    const auto m = lda_fit(Matrix{{0.0, 0.0}, {1.0, 0.1}, {3.0, 3.0}, {4.0, 3.2}},
                           std::vector<Assistance>{Assistance::Assisted, Assistance::Assisted, Assistance::Independent, Assistance::Independent});
    CHECK(code_of([&] { lda_predict(m, std::vector<double>{1.0}); }) == Errc::DimensionMismatch);
    // one point per class: zero within-class scatter
    CHECK(code_of([] {
              lda_fit(Matrix{{0.0}, {1.0}}, std::vector<Assistance>{Assistance::Assisted, Assistance::Independent}, {false, LdaPriors::Equal});
          }) == Errc::SingularCovariance);
}

// ---------------------------------------------------------------------------
// SVM

TEST_CASE("SVM fits XOR exactly") {
    const Matrix x{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    const std::vector<int> y{3, 3, 8, 8};
    SvmOptions opt;
    opt.gamma = 2.0;
    opt.pca_target.reset();
    const auto m = svm_fit(x, y, opt);
    for (std::size_t i = 0; i < 4; ++i) CHECK(svm_predict(m, x.row(i)) == y[i]);
}

TEST_CASE("SVM multi-class behaviour") {
    std::mt19937_64 gen(13);
    Matrix x = testutil::gaussian_matrix(90, 4, gen);
    std::vector<int> y(90);
    for (std::size_t i = 0; i < 90; ++i) {
        y[i] = 1 + static_cast<int>(i % 3) * 4;  // classes 1, 5, 9
        for (std::size_t c = 0; c < 4; ++c) x(i, c) = 0.3 * x(i, c) + (c == i % 3 ? 3.0 : 0.0);
    }
    const auto m = svm_fit(x, y);
    CHECK(m.classes == std::vector<int>{1, 5, 9});
    CHECK(m.machines.size() == 3);
    for (const auto& mach : m.machines) {
        for (double dc : mach.dual_coefs) CHECK(std::abs(dc) <= m.c + 1e-12);
    }
    SUBCASE("deep inside a cluster predicts that class") {
        CHECK(svm_predict(m, std::vector<double>{3, 0, 0, 0}) == 1);
        CHECK(svm_predict(m, std::vector<double>{0, 3, 0, 0}) == 5);
        CHECK(svm_predict(m, std::vector<double>{0, 0, 3, 0}) == 9);
    }
    SUBCASE("predictions stay in the class vocabulary and are repeatable") {
        for (int i = 0; i < 50; ++i) {
            const auto q = testutil::gaussian(4, gen, 3.0);
            const int a = svm_predict(m, q);
            CHECK((a == 1 || a == 5 || a == 9));
            CHECK(svm_predict(m, q) == a);
        }
    }
    SUBCASE("single class is rejected") {
        CHECK(code_of([&] { svm_fit(x, std::vector<int>(90, 4)); }) == Errc::SingleClassData);
    }
}

TEST_CASE("two-class SVM prediction follows the sign of its machine") {
    std::mt19937_64 gen(14);
    Matrix x = testutil::gaussian_matrix(40, 2, gen);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = i % 2 == 0 ? 2 : 7;
    const auto m = svm_fit(x, y);  // random labels: heavily overlapping classes
    for (int i = 0; i < 100; ++i) {
        const auto q = testutil::gaussian(2, gen, 2.0);
        const double f = m.decision(m.machines[0], m.transform(q));
        CHECK(svm_predict(m, q) == (f > 0.0 ? m.machines[0].positive_class : m.machines[0].negative_class));
    }
}

TEST_CASE("kernel conventions coincide when s = 1 / sqrt(gamma)") {
    std::mt19937_64 gen(15);
    Matrix x = testutil::gaussian_matrix(60, 3, gen);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        y[i] = 1 + static_cast<int>(i % 3);
        x(i, i % 3) += 1.5;
    }
    SvmOptions g;
    g.gamma = 0.25;
    SvmOptions s = g;
    s.convention = KernelConvention::Scale;
    s.gamma = 2.0;  // 1 / sqrt(0.25)
    const auto mg = svm_fit(x, y, g);
    const auto ms = svm_fit(x, y, s);
    CHECK(mg.kernel_coefficient() == doctest::Approx(ms.kernel_coefficient()));
    for (int i = 0; i < 100; ++i) {
        const auto q = testutil::gaussian(3, gen, 2.0);
        CHECK(svm_predict(mg, q) == svm_predict(ms, q));
    }
}

TEST_CASE("stored transforms reproduce the training fit") {
    std::mt19937_64 gen(16);
    Matrix x = testutil::gaussian_matrix(80, 6, gen);
    std::vector<int> y(80);
    for (std::size_t i = 0; i < 80; ++i) {
        y[i] = i % 2 == 0 ? 3 : 6;
        for (std::size_t c = 0; c < 6; ++c) x(i, c) = x(i, c) * (1.0 + static_cast<double>(c)) + (y[i] == 6 ? 1.0 : 0.0);
    }
    SvmOptions opt;
    opt.standardize = true;
    opt.gamma = 0.1;
    const auto full = svm_fit(x, y, opt);
    REQUIRE(full.standardizer.has_value());
    REQUIRE(full.pca.has_value());

    Matrix z(80, full.pca->output_dim());
    for (std::size_t i = 0; i < 80; ++i) {
        const auto t = full.transform(x.row(i));
        std::copy(t.begin(), t.end(), z.row(i).begin());
    }
    SvmOptions plain = opt;
    plain.standardize = false;
    plain.pca_target.reset();
    const auto refit = svm_fit(z, y, plain);
    for (std::size_t i = 0; i < 80; ++i) CHECK(svm_predict(full, x.row(i)) == svm_predict(refit, z.row(i)));
}

// ---------------------------------------------------------------------------
// OLS

TEST_CASE("OLS") {
    std::mt19937_64 gen(17);
    SUBCASE("exactly linear data has zero residuals") {
        const Matrix x = testutil::gaussian_matrix(30, 4, gen);
        std::vector<double> y(30);
        for (std::size_t i = 0; i < 30; ++i) y[i] = 2.0 + x(i, 0) - 3.0 * x(i, 2) + 0.5 * x(i, 3);
        const auto m = ols_fit(x, y);
        for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(ols_predict(m, x.row(i)) - y[i]) <= 1e-9);
        CHECK_FALSE(m.ridge_applied);
    }
    SUBCASE("intercept only gives the mean") {
        const Matrix x(5, 0);
        const std::vector<double> y{1, 2, 3, 4, 10};
        const auto m = ols_fit(x, y);
        CHECK(m.beta.size() == 1);
        CHECK(m.beta[0] == doctest::Approx(4.0));
    }
    SUBCASE("residuals are orthogonal to every design column") {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix x = testutil::gaussian_matrix(40, 5, gen);
            const auto y = testutil::gaussian(40, gen, 3.0);
            const auto m = ols_fit(x, y);
            std::vector<double> resid(40);
            for (std::size_t i = 0; i < 40; ++i) resid[i] = y[i] - ols_predict(m, x.row(i));
            double sum = 0.0;
            for (double r : resid) sum += r;
            CHECK(std::abs(sum) <= 1e-8);
            for (std::size_t c = 0; c < 5; ++c) CHECK(std::abs(dot(resid, x.column(c))) <= 1e-8);
        }
    }
    SUBCASE("matches coordinate-descent least squares") {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix x = testutil::gaussian_matrix(50, 6, gen);
            const auto y = testutil::gaussian(50, gen, 2.0);
            const auto m = ols_fit(x, y);
            oracle::Dense design(50, std::vector<double>(7, 1.0));
            for (std::size_t i = 0; i < 50; ++i) {
                for (std::size_t c = 0; c < 6; ++c) design[i][c + 1] = x(i, c);
            }
            const auto ref = oracle::coordinate_descent_ls(design, y);
            for (std::size_t c = 0; c < 7; ++c) CHECK(std::abs(m.beta[c] - ref[c]) <= 1e-6);
        }
    }
    SUBCASE("rank deficiency") {
        Matrix x = testutil::gaussian_matrix(20, 3, gen);
        for (std::size_t i = 0; i < 20; ++i) x(i, 2) = x(i, 0) + x(i, 1);
        const auto y = testutil::gaussian(20, gen);
        CHECK(code_of([&] { ols_fit(x, y, {false}); }) == Errc::RankDeficient);
        const auto m = ols_fit(x, y);
        CHECK(m.ridge_applied);
    }
    SUBCASE("too few observations") {
        CHECK(code_of([&] { ols_fit(testutil::gaussian_matrix(3, 3, gen), std::vector<double>{1, 2, 3}); }) == Errc::TooFewTrials);
    }
}

// ---------------------------------------------------------------------------
// front end and persistence

TEST_CASE("fit_model dispatches and predict maps outputs") {
    std::mt19937_64 gen(18);
    Matrix x = testutil::gaussian_matrix(60, 3, gen);
    std::vector<StandingScore> scores;
    for (std::size_t i = 0; i < 60; ++i) {
        const int s = 1 + static_cast<int>(i % 10);
        scores.emplace_back(s);
        x(i, 0) += 0.8 * s;
    }
    ModelSpec lda;
    const auto ml = fit_model(lda, x, scores);
    CHECK(kind_of(ml) == ModelKind::Lda);
    const double pl = predict(ml, x.row(0));
    CHECK((pl == 0.0 || pl == 1.0));

    ModelSpec svm;
    svm.kind = ModelKind::Svm;
    const auto ms = fit_model(svm, x, scores);
    const double ps = predict(ms, x.row(0));
    CHECK(ps == std::round(ps));
    CHECK(ps >= 1.0);
    CHECK(ps <= 10.0);

    ModelSpec ols;
    ols.kind = ModelKind::LinReg;
    const auto mo = fit_model(ols, x, scores);
    CHECK(kind_of(mo) == ModelKind::LinReg);
}

TEST_CASE("model documents round-trip through JSON") {
    testutil::TempDir dir("models");
    std::mt19937_64 gen(19);
    Matrix x = testutil::gaussian_matrix(50, 4, gen);
    std::vector<StandingScore> scores;
    for (std::size_t i = 0; i < 50; ++i) {
        scores.emplace_back(1 + static_cast<int>(i % 10));
        x(i, 1) += 0.5 * scores.back().value();
    }
    const std::vector<std::string> names{"R_VL", "L_VL", "R_SOL", "L_SOL"};
    for (ModelKind kind : {ModelKind::Lda, ModelKind::Svm, ModelKind::LinReg}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.svm.standardize = true;
        FeatureConfig fc;
        fc.start_s = 2.5;
        const ModelDocument doc{fit_model(spec, x, scores), fc, names};
        save_model(dir / "m.json", doc);
        const ModelDocument back = load_model(dir / "m.json");
        CHECK(kind_of(back.model) == kind);
        CHECK(back.features == fc);
        CHECK(back.feature_names == names);
        for (int i = 0; i < 30; ++i) {
            const auto q = testutil::gaussian(4, gen, 3.0);
            CHECK(predict(back.model, q) == predict(doc.model, q));
        }
    }

    auto j = to_json(ModelDocument{fit_model(ModelSpec{}, x, scores), FeatureConfig{}, names});
    CHECK(j.at("format_version") == kModelFormatVersion);
    for (const char* key : {"model_kind", "standardizer", "pca", "parameters"}) CHECK(j.contains(key));
    j["format_version"] = kModelFormatVersion + 1;
    CHECK(code_of([&] { model_from_json(j); }) == Errc::UnsupportedFormatVersion);
    CHECK(code_of([] { model_from_json(nlohmann::json{{"format_version", kModelFormatVersion}, {"model_kind", "tree"}}); }) ==
          Errc::MalformedModel);
    CHECK(code_of([&] { load_model(dir / "absent.json"); }) == Errc::MissingFile);
}
