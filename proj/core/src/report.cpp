#include "emgstand/evaluation.hpp"

#include <cstdio>
#include <sstream>

namespace emgstand {

using nlohmann::json;

namespace {

std::string label_name(ModelKind model, int label) {
    if (model == ModelKind::Lda) return label == 1 ? "Independent" : "Assisted";
    return std::to_string(label);
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
    return buf;
}

}  // namespace

json to_json(const EvaluationReport& r) {
    json out;
    out["model"] = to_string(r.model);
    out["features"] = to_string(r.features);
    out["grouping"] = to_string(r.grouping);
    out["seed"] = r.seed;
    out["n_units"] = r.predictions.size();
    out["n_folds"] = r.fold_sizes.size();
    out["stratified"] = r.stratified;
    out["accuracy"] = r.accuracy;
    out["fold_accuracies"] = r.fold_accuracies;
    out["fold_sizes"] = r.fold_sizes;
    json labels = json::array();
    for (int l : r.confusion.labels) labels.push_back(label_name(r.model, l));
    out["confusion"] = {{"labels", labels}, {"counts", r.confusion.counts}};
    if (r.bands) {
        out["within_band"] = {{"1", r.bands->within_band[0]}, {"2", r.bands->within_band[1]}, {"3", r.bands->within_band[2]}};
        out["error_std"] = r.bands->error_std;
    } else {
        out["within_band"] = nullptr;
        out["error_std"] = nullptr;
    }
    json preds = json::array();
    for (const auto& p : r.predictions) {
        preds.push_back({{"id", p.id}, {"truth", p.truth}, {"predicted", p.predicted}, {"fold", p.fold}});
    }
    out["predictions"] = std::move(preds);
    out["warnings"] = r.warnings;
    out["config"] = r.config;
    return out;
}

std::string to_text(const EvaluationReport& r) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %s\n", "model", std::string(to_string(r.model)).c_str());
    os << line;
    std::snprintf(line, sizeof line, "%-18s %s\n", "features", std::string(to_string(r.features)).c_str());
    os << line;
    std::snprintf(line, sizeof line, "%-18s %s (%zu folds, %s)\n", "grouping", std::string(to_string(r.grouping)).c_str(),
                  r.fold_sizes.size(), r.stratified ? "stratified" : "unstratified");
    os << line;
    std::snprintf(line, sizeof line, "%-18s %llu\n", "seed", static_cast<unsigned long long>(r.seed));
    os << line;
    std::snprintf(line, sizeof line, "%-18s %zu\n", "units", r.predictions.size());
    os << line;
    std::snprintf(line, sizeof line, "%-18s %s\n", "accuracy", percent(r.accuracy).c_str());
    os << line;
    if (r.bands) {
        for (std::size_t b = 0; b < 3; ++b) {
            std::snprintf(line, sizeof line, "within +-%zu%*s %s\n", b + 1, 8, "", percent(r.bands->within_band[b]).c_str());
            os << line;
        }
        std::snprintf(line, sizeof line, "%-18s %.4f\n", "error std", r.bands->error_std);
        os << line;
    }
    os << "\nconfusion (rows = truth, columns = predicted)\n";
    std::snprintf(line, sizeof line, "%12s", "");
    os << line;
    for (int l : r.confusion.labels) {
        std::snprintf(line, sizeof line, "%12s", label_name(r.model, l).c_str());
        os << line;
    }
    os << '\n';
    for (std::size_t i = 0; i < r.confusion.labels.size(); ++i) {
        std::snprintf(line, sizeof line, "%12s", label_name(r.model, r.confusion.labels[i]).c_str());
        os << line;
        for (std::size_t c : r.confusion.counts[i]) {
            std::snprintf(line, sizeof line, "%12zu", c);
            os << line;
        }
        os << '\n';
    }
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

std::string confusion_csv(const EvaluationReport& r) {
    std::ostringstream os;
    os << "truth";
    for (int l : r.confusion.labels) os << ',' << label_name(r.model, l);
    os << '\n';
    for (std::size_t i = 0; i < r.confusion.labels.size(); ++i) {
        os << label_name(r.model, r.confusion.labels[i]);
        for (std::size_t c : r.confusion.counts[i]) os << ',' << c;
        os << '\n';
    }
    return os.str();
}

}  // namespace emgstand
