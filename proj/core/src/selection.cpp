#include "emgstand/selection.hpp"

#include "emgstand/error.hpp"
#include "emgstand/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace emgstand {

std::vector<MuscleSet> enumerate_subsets(std::size_t k) {
    if (k < 1 || k > kMuscleCount) fail(Errc::KOutOfRange, "k = " + std::to_string(k) + " outside [1, 6]");
    std::vector<MuscleSet> out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        MuscleSet s;
        for (std::size_t i : idx) s.insert(kAllMuscles[i]);
        out.push_back(s);
        // advance to the next combination in lexicographic order
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == kMuscleCount - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

std::string_view to_string(SelectionMetric m) noexcept {
    switch (m) {
        case SelectionMetric::LdaAccuracy: return "lda_accuracy";
        case SelectionMetric::SvmAccuracy: return "svm_accuracy";
        case SelectionMetric::RegressionErrorStd: return "regression_error_std";
    }
    return "unknown";
}

std::optional<SelectionMetric> parse_selection_metric(std::string_view s) noexcept {
    for (auto m : {SelectionMetric::LdaAccuracy, SelectionMetric::SvmAccuracy, SelectionMetric::RegressionErrorStd}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

bool higher_is_better(SelectionMetric m) noexcept { return m != SelectionMetric::RegressionErrorStd; }

const SubsetResult* SelectionTable::best_for(SelectionMetric metric, std::size_t k) const {
    const auto it = best.find(metric);
    if (it == best.end()) return nullptr;
    for (const auto& r : it->second) {
        if (r.k == k) return &r;
    }
    return nullptr;
}

namespace {

double metric_value(SelectionMetric metric, const EvaluationReport& report) {
    if (metric == SelectionMetric::RegressionErrorStd) {
        if (!report.bands) fail(Errc::InvalidArgument, "regression_error_std needs a score-valued model");
        return report.bands->error_std;
    }
    return report.accuracy;
}

}  // namespace

SelectionTable best_subset_per_k(std::span<const SubsetEvaluator> evaluators, std::span<const std::size_t> ks,
                                 std::size_t jobs) {
    std::vector<std::size_t> k_order(ks.begin(), ks.end());
    std::sort(k_order.begin(), k_order.end(), std::greater<>());
    k_order.erase(std::unique(k_order.begin(), k_order.end()), k_order.end());

    SelectionTable table;
    for (std::size_t k : k_order) {
        for (MuscleSet s : enumerate_subsets(k)) table.all.push_back({s, k, {}});
    }

    std::vector<FoldAssignment> folds;
    folds.reserve(evaluators.size());
    for (const auto& ev : evaluators) folds.push_back(make_folds(ev.builder(MuscleSet::all()), ev.spec.kind, ev.cv));

    const std::size_t n_tasks = table.all.size() * evaluators.size();
    std::vector<double> values(n_tasks, 0.0);
    parallel_for(n_tasks, jobs, [&](std::size_t task) {
        const std::size_t row = task / evaluators.size();
        const std::size_t e = task % evaluators.size();
        const auto& subset = table.all[row];
        try {
            CvOptions cv = evaluators[e].cv;
            cv.jobs = 1;
            const auto report = cross_validate(evaluators[e].spec, evaluators[e].builder(subset.muscles), folds[e], cv);
            values[task] = metric_value(evaluators[e].metric, report);
        } catch (const Error& err) {
            throw err.with_context("k=" + std::to_string(subset.k) + " subset {" + subset.muscles.to_string(",") + "}");
        }
    });

    for (std::size_t row = 0; row < table.all.size(); ++row) {
        for (std::size_t e = 0; e < evaluators.size(); ++e) {
            table.all[row].metrics[evaluators[e].metric] = values[row * evaluators.size() + e];
        }
    }
    for (const auto& ev : evaluators) {
        auto& winners = table.best[ev.metric];
        for (std::size_t k : k_order) {
            const SubsetResult* best = nullptr;
            for (const auto& r : table.all) {
                if (r.k != k) continue;
                const double v = r.metrics.at(ev.metric);
                if (best == nullptr) {
                    best = &r;
                    continue;
                }
                const double b = best->metrics.at(ev.metric);
                if (higher_is_better(ev.metric) ? v > b : v < b) best = &r;
            }
            winners.push_back(*best);
        }
    }
    return table;
}

std::function<Dataset(MuscleSet)> column_subset_builder(Dataset full) {
    return [full = std::move(full)](MuscleSet muscles) { return restrict_to_muscles(full, muscles); };
}

std::string selection_csv(const SelectionTable& table, SelectionMetric primary, bool all_rows) {
    auto cell = [](const SubsetResult& r, SelectionMetric m) -> std::string {
        const auto it = r.metrics.find(m);
        if (it == r.metrics.end()) return {};
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, it->second);
        return std::string(buf, res.ptr);
    };
    std::ostringstream os;
    os << "k,muscles,lda_accuracy,svm_accuracy,regression_error_std,is_best_for_k\n";
    for (const auto& r : table.all) {
        const auto* best = table.best_for(primary, r.k);
        const bool is_best = best != nullptr && best->muscles == r.muscles;
        if (!all_rows && !is_best) continue;
        os << r.k << ',' << r.muscles.to_string(" ") << ',' << cell(r, SelectionMetric::LdaAccuracy) << ','
           << cell(r, SelectionMetric::SvmAccuracy) << ',' << cell(r, SelectionMetric::RegressionErrorStd) << ','
           << (is_best ? "true" : "false") << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const SelectionTable& table) {
    using nlohmann::json;
    auto row = [](const SubsetResult& r) {
        json metrics = json::object();
        for (const auto& [m, v] : r.metrics) metrics[std::string(to_string(m))] = v;
        return json{{"k", r.k}, {"muscles", r.muscles.to_string(" ")}, {"metrics", metrics}};
    };
    json out;
    json all = json::array();
    for (const auto& r : table.all) all.push_back(row(r));
    out["subsets"] = std::move(all);
    json best = json::object();
    for (const auto& [metric, winners] : table.best) {
        json list = json::array();
        for (const auto& r : winners) list.push_back(row(r));
        best[std::string(to_string(metric))] = std::move(list);
    }
    out["best"] = std::move(best);
    return out;
}

}  // namespace emgstand
