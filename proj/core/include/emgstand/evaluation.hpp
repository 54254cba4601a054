#pragma once

#include "emgstand/dataset.hpp"
#include "emgstand/models.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emgstand {

/// A unit of fold assignment (a trial, or a window in window mode) and the
/// class label used for stratification.
struct LabeledUnit {
    std::string id;
    int label = 0;
};

struct FoldAssignment {
    std::vector<std::vector<std::string>> folds;
    bool stratified = false;
    std::string warning;  // set when stratification was requested but dropped
};

/// Partitions units into k folds whose sizes differ by at most one. Units are
/// sorted by id before a seeded shuffle, so input order does not matter.
/// Stratified mode deals each class round-robin so every fold holds within
/// one unit of its proportional share; it falls back to unstratified (with a
/// warning) when any class has fewer than k units. Throws TooFewTrials.
FoldAssignment kfold_split(std::vector<LabeledUnit> units, std::size_t k, std::uint64_t seed, bool stratified = true);

/// Trial: folds hold whole trials. Window: folds hold individual windows
/// (leaks trial identity; for comparison only).
enum class Grouping { Trial, Window };

std::string_view to_string(Grouping g) noexcept;
std::optional<Grouping> parse_grouping(std::string_view s) noexcept;

struct BandReport {
    std::array<double, 3> within_band{};  // fractions with |error| <= 1, 2, 3
    double error_std = 0.0;              // population standard deviation
};

/// Throws LengthMismatch, TooFewTrials (fewer than two pairs).
BandReport regression_report(std::span<const double> predictions, std::span<const double> truths);

struct ConfusionMatrix {
    std::vector<int> labels;                       // row/column order
    std::vector<std::vector<std::size_t>> counts;  // rows = truth, columns = predicted

    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] std::size_t correct() const noexcept;
};

struct UnitPrediction {
    std::string id;
    double truth = 0.0;
    double predicted = 0.0;
    std::size_t fold = 0;
};

struct EvaluationReport {
    ModelKind model = ModelKind::Lda;
    FeatureKind features = FeatureKind::Power;
    Grouping grouping = Grouping::Trial;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    ConfusionMatrix confusion;
    std::optional<BandReport> bands;  // score-valued models only
    std::vector<double> fold_accuracies;
    std::vector<std::size_t> fold_sizes;
    std::vector<UnitPrediction> predictions;  // sorted by id
    bool stratified = false;
    std::vector<std::string> warnings;
    nlohmann::json config = nlohmann::json::object();
};

struct CvOptions {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    bool stratified = true;
    Grouping grouping = Grouping::Trial;
    std::size_t jobs = 1;
};

/// The units and stratification labels `cross_validate` uses for a dataset.
std::vector<LabeledUnit> cv_units(const Dataset& ds, ModelKind model, Grouping grouping);

/// Folds for `cross_validate` built from cv_units and kfold_split.
FoldAssignment make_folds(const Dataset& ds, ModelKind model, const CvOptions& options);

/// Fits on k-1 folds (standardizer and PCA included) and predicts the held
/// out fold. With trial grouping and window features, a trial's prediction
/// is the majority vote of its windows (lowest label on ties) or, for
/// regression, the mean. Fit errors are rethrown with the fold index.
EvaluationReport cross_validate(const ModelSpec& spec, const Dataset& ds, const FoldAssignment& folds,
                                const CvOptions& options);

/// Convenience: make_folds followed by cross_validate.
EvaluationReport cross_validate(const ModelSpec& spec, const Dataset& ds, const CvOptions& options);

nlohmann::json to_json(const EvaluationReport& report);
/// Aligned plain-text summary with the confusion matrix.
std::string to_text(const EvaluationReport& report);
/// Confusion matrix as CSV: header `truth,<labels...>`.
std::string confusion_csv(const EvaluationReport& report);

}  // namespace emgstand
