#pragma once

#include "emgstand/dataset.hpp"
#include "emgstand/evaluation.hpp"
#include "emgstand/models.hpp"
#include "emgstand/signal.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emgstand {

/// All C(6, k) muscle subsets in lexicographic order over canonical muscle
/// order. Throws KOutOfRange unless 1 <= k <= 6.
std::vector<MuscleSet> enumerate_subsets(std::size_t k);

enum class SelectionMetric { LdaAccuracy, SvmAccuracy, RegressionErrorStd };

std::string_view to_string(SelectionMetric m) noexcept;
std::optional<SelectionMetric> parse_selection_metric(std::string_view s) noexcept;
/// Accuracies are maximized, error spread is minimized.
bool higher_is_better(SelectionMetric m) noexcept;

struct SubsetResult {
    MuscleSet muscles;
    std::size_t k = 0;
    std::map<SelectionMetric, double> metrics;
};

/// One model family evaluated on every subset. `builder` maps a subset to
/// its dataset; folds are fixed once from the full-muscle dataset so every
/// subset sees the same trial partition.
struct SubsetEvaluator {
    SelectionMetric metric = SelectionMetric::LdaAccuracy;
    ModelSpec spec;
    std::function<Dataset(MuscleSet)> builder;
    CvOptions cv;
};

struct SelectionTable {
    std::vector<SubsetResult> all;  // k descending, then lexicographic
    /// Winner per metric per k (k descending). Ties keep the earlier subset.
    std::map<SelectionMetric, std::vector<SubsetResult>> best;

    [[nodiscard]] const SubsetResult* best_for(SelectionMetric metric, std::size_t k) const;
};

/// Evaluates every subset for every k in `ks` with every evaluator and keeps
/// the full table. Errors are rethrown with (k, subset) context.
SelectionTable best_subset_per_k(std::span<const SubsetEvaluator> evaluators, std::span<const std::size_t> ks,
                                 std::size_t jobs = 1);

/// Builder that slices feature columns out of a full-channel dataset.
std::function<Dataset(MuscleSet)> column_subset_builder(Dataset full);

/// CSV `k,muscles,lda_accuracy,svm_accuracy,regression_error_std,is_best_for_k`.
/// `is_best_for_k` refers to `primary`. With `all_rows` false only the
/// primary winners are written (one row per k).
std::string selection_csv(const SelectionTable& table, SelectionMetric primary, bool all_rows);

nlohmann::json to_json(const SelectionTable& table);

}  // namespace emgstand
