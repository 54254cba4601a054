#include "emgstand/persistence.hpp"

#include "emgstand/error.hpp"

#include <fstream>
#include <sstream>

namespace emgstand {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t expected_cols) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) return Matrix(0, expected_cols);
    return Matrix::from_rows(rows);
}

json standardizer_to_json(const std::optional<Standardizer>& s) {
    if (!s) return nullptr;
    return {{"mean", s->mean}, {"scale", s->scale}};
}

std::optional<Standardizer> standardizer_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    Standardizer s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.scale = j.at("scale").get<std::vector<double>>();
    if (s.mean.size() != s.scale.size()) fail(Errc::MalformedModel, "standardizer mean/scale lengths differ");
    return s;
}

json pca_to_json(const std::optional<PcaTransform>& p) {
    if (!p) return nullptr;
    return {{"mean", p->mean},
            {"components", matrix_to_json(p->components)},
            {"explained_fraction", p->explained_fraction},
            {"eigenvalues", p->eigenvalues}};
}

std::optional<PcaTransform> pca_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    PcaTransform p;
    p.mean = j.at("mean").get<std::vector<double>>();
    p.components = matrix_from_json(j.at("components"), p.mean.size());
    p.explained_fraction = j.at("explained_fraction").get<std::vector<double>>();
    if (j.contains("eigenvalues")) p.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    if (p.components.cols() != p.mean.size() || p.components.rows() != p.explained_fraction.size()) {
        fail(Errc::MalformedModel, "PCA block has inconsistent shapes");
    }
    return p;
}

}  // namespace

json to_json(const FeatureConfig& config) {
    return {{"kind", to_string(config.kind)},
            {"start_s", config.start_s},
            {"duration_s", config.duration_s},
            {"ar_window_ms", config.ar_window_ms},
            {"ar_hop_ms", config.ar_hop_ms},
            {"ar_order", config.ar_order},
            {"allow_short", config.allow_short}};
}

FeatureConfig feature_config_from_json(const json& j) {
    FeatureConfig c;
    const auto kind = parse_feature_kind(j.at("kind").get<std::string>());
    if (!kind) fail(Errc::MalformedModel, "unknown feature kind");
    c.kind = *kind;
    c.start_s = j.at("start_s").get<double>();
    c.duration_s = j.at("duration_s").get<double>();
    c.ar_window_ms = j.at("ar_window_ms").get<double>();
    c.ar_hop_ms = j.at("ar_hop_ms").get<double>();
    c.ar_order = j.at("ar_order").get<std::size_t>();
    c.allow_short = j.value("allow_short", false);
    return c;
}

json to_json(const ModelDocument& doc) {
    json out;
    out["format_version"] = kModelFormatVersion;
    out["model_kind"] = to_string(kind_of(doc.model));
    out["standardizer"] = nullptr;
    out["pca"] = nullptr;
    json params;
    if (const auto* lda = std::get_if<LdaModel>(&doc.model)) {
        params["w"] = lda->w;
        params["b"] = lda->b;
        params["mean_assisted"] = lda->mean_assisted;
        params["mean_independent"] = lda->mean_independent;
    } else if (const auto* svm = std::get_if<SvmModel>(&doc.model)) {
        out["standardizer"] = standardizer_to_json(svm->standardizer);
        out["pca"] = pca_to_json(svm->pca);
        params["gamma"] = svm->gamma;
        params["c"] = svm->c;
        params["kernel_convention"] = to_string(svm->convention);
        params["classes"] = svm->classes;
        json machines = json::array();
        for (const auto& m : svm->machines) {
            machines.push_back({{"positive_class", m.positive_class},
                                {"negative_class", m.negative_class},
                                {"bias", m.bias},
                                {"dual_coefs", m.dual_coefs},
                                {"support_vectors", matrix_to_json(m.support_vectors)}});
        }
        params["machines"] = std::move(machines);
    } else if (const auto* ols = std::get_if<LinRegModel>(&doc.model)) {
        params["beta"] = ols->beta;
        params["ridge_applied"] = ols->ridge_applied;
    }
    params["feature_config"] = to_json(doc.features);
    params["feature_names"] = doc.feature_names;
    out["parameters"] = std::move(params);
    return out;
}

ModelDocument model_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("format_version")) fail(Errc::MalformedModel, "missing format_version");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            fail(Errc::UnsupportedFormatVersion, "model format_version " + std::to_string(version) + ", expected " +
                                                     std::to_string(kModelFormatVersion));
        }
        const auto kind = parse_model_kind(j.at("model_kind").get<std::string>());
        if (!kind) fail(Errc::MalformedModel, "unknown model_kind");
        const json& params = j.at("parameters");

        ModelDocument doc{LdaModel{}, feature_config_from_json(params.at("feature_config")),
                          params.at("feature_names").get<std::vector<std::string>>()};
        switch (*kind) {
            case ModelKind::Lda: {
                LdaModel m;
                m.w = params.at("w").get<std::vector<double>>();
                m.b = params.at("b").get<double>();
                m.mean_assisted = params.value("mean_assisted", std::vector<double>{});
                m.mean_independent = params.value("mean_independent", std::vector<double>{});
                doc.model = std::move(m);
                break;
            }
            case ModelKind::Svm: {
                SvmModel m;
                m.standardizer = standardizer_from_json(j.at("standardizer"));
                m.pca = pca_from_json(j.at("pca"));
                m.gamma = params.at("gamma").get<double>();
                m.c = params.at("c").get<double>();
                const auto conv = parse_kernel_convention(params.at("kernel_convention").get<std::string>());
                if (!conv) fail(Errc::MalformedModel, "unknown kernel_convention");
                m.convention = *conv;
                m.classes = params.at("classes").get<std::vector<int>>();
                const std::size_t dim = m.pca ? m.pca->output_dim() : (m.standardizer ? m.standardizer->mean.size() : 0);
                for (const auto& mj : params.at("machines")) {
                    SvmBinary b;
                    b.positive_class = mj.at("positive_class").get<int>();
                    b.negative_class = mj.at("negative_class").get<int>();
                    b.bias = mj.at("bias").get<double>();
                    b.dual_coefs = mj.at("dual_coefs").get<std::vector<double>>();
                    b.support_vectors = matrix_from_json(mj.at("support_vectors"), dim);
                    if (b.support_vectors.rows() != b.dual_coefs.size()) {
                        fail(Errc::MalformedModel, "support vector count differs from dual coefficient count");
                    }
                    m.machines.push_back(std::move(b));
                }
                doc.model = std::move(m);
                break;
            }
            case ModelKind::LinReg: {
                LinRegModel m;
                m.beta = params.at("beta").get<std::vector<double>>();
                m.ridge_applied = params.value("ridge_applied", false);
                if (m.beta.empty()) fail(Errc::MalformedModel, "empty regression coefficients");
                doc.model = std::move(m);
                break;
            }
        }
        return doc;
    } catch (const json::exception& e) {
        fail(Errc::MalformedModel, e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot write " + path.string());
    out << to_json(doc).dump(2) << '\n';
    if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

ModelDocument load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::MissingFile, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        fail(Errc::MalformedModel, path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace emgstand
