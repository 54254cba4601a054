#include "emgstand/evaluation.hpp"

#include "emgstand/error.hpp"
#include "emgstand/parallel.hpp"
#include "emgstand/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace emgstand {

std::string_view to_string(Grouping g) noexcept { return g == Grouping::Window ? "window" : "trial"; }

std::optional<Grouping> parse_grouping(std::string_view s) noexcept {
    if (s == "trial") return Grouping::Trial;
    if (s == "window") return Grouping::Window;
    return std::nullopt;
}

FoldAssignment kfold_split(std::vector<LabeledUnit> units, std::size_t k, std::uint64_t seed, bool stratified) {
    if (k < 2) fail(Errc::TooFewTrials, "k-fold needs k >= 2");
    if (k > units.size()) {
        fail(Errc::TooFewTrials, std::to_string(units.size()) + " units cannot fill " + std::to_string(k) + " folds");
    }
    std::sort(units.begin(), units.end(), [](const LabeledUnit& a, const LabeledUnit& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < units.size(); ++i) {
        if (units[i].id == units[i - 1].id) fail(Errc::InvalidArgument, "duplicate unit id " + units[i].id);
    }

    FoldAssignment out;
    out.folds.resize(k);
    Rng rng(derive_seed(seed, "folds"));

    std::map<int, std::vector<std::string>> by_class;
    for (const auto& u : units) by_class[u.label].push_back(u.id);
    if (stratified) {
        const bool enough = std::all_of(by_class.begin(), by_class.end(), [k](const auto& kv) { return kv.second.size() >= k; });
        if (!enough) {
            stratified = false;
            out.warning = "a class has fewer than " + std::to_string(k) + " units; using unstratified folds";
        }
    }
    out.stratified = stratified;

    std::vector<std::string> order;
    order.reserve(units.size());
    if (stratified) {
        for (auto& [label, ids] : by_class) {
            rng.shuffle(std::span<std::string>(ids));
            order.insert(order.end(), ids.begin(), ids.end());
        }
    } else {
        for (const auto& u : units) order.push_back(u.id);
        rng.shuffle(std::span<std::string>(order));
    }
    for (std::size_t i = 0; i < order.size(); ++i) out.folds[i % k].push_back(order[i]);
    for (auto& f : out.folds) std::sort(f.begin(), f.end());
    return out;
}

BandReport regression_report(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size()) {
        fail(Errc::LengthMismatch, std::to_string(predictions.size()) + " predictions for " + std::to_string(truths.size()) + " truths");
    }
    if (predictions.size() < 2) fail(Errc::TooFewTrials, "regression report needs at least two pairs");
    const auto n = static_cast<double>(predictions.size());
    BandReport r;
    double mean = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - truths[i];
        mean += e;
        for (std::size_t b = 0; b < 3; ++b) {
            if (std::abs(e) <= static_cast<double>(b + 1)) r.within_band[b] += 1.0;
        }
    }
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - truths[i] - mean;
        var += e * e;
    }
    for (double& f : r.within_band) f /= n;
    r.error_std = std::sqrt(var / n);
    return r;
}

std::size_t ConfusionMatrix::total() const noexcept {
    std::size_t t = 0;
    for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return t;
}

std::size_t ConfusionMatrix::correct() const noexcept {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

namespace {

std::string unit_id(const Sample& s, Grouping grouping) {
    if (grouping == Grouping::Window && s.window_index) return s.trial_id + "#" + std::to_string(*s.window_index);
    return s.trial_id;
}

int target_label(ModelKind model, StandingScore score) {
    if (model == ModelKind::Lda) return score.assistance() == Assistance::Independent ? 1 : 0;
    return score.value();
}

int as_class(ModelKind model, double prediction) {
    if (model == ModelKind::LinReg) return static_cast<int>(std::lround(std::clamp(prediction, 1.0, 10.0)));
    return static_cast<int>(std::lround(prediction));
}

int majority(std::span<const int> votes) {
    std::map<int, std::size_t> counts;
    for (int v : votes) ++counts[v];
    int best = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts) {  // ascending, so ties keep the lower label
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

struct FoldOutcome {
    std::vector<UnitPrediction> predictions;
};

}  // namespace

std::vector<LabeledUnit> cv_units(const Dataset& ds, ModelKind model, Grouping grouping) {
    std::map<std::string, int> units;
    for (const auto& s : ds.samples) units.emplace(unit_id(s, grouping), target_label(model, s.score));
    std::vector<LabeledUnit> out;
    out.reserve(units.size());
    for (const auto& [id, label] : units) out.push_back({id, label});
    return out;
}

FoldAssignment make_folds(const Dataset& ds, ModelKind model, const CvOptions& options) {
    return kfold_split(cv_units(ds, model, options.grouping), options.k, options.seed, options.stratified);
}

EvaluationReport cross_validate(const ModelSpec& spec, const Dataset& ds, const FoldAssignment& folds,
                                const CvOptions& options) {
    if (ds.samples.empty()) fail(Errc::TooFewTrials, "empty dataset");
    const std::size_t k = folds.folds.size();

    std::map<std::string, std::size_t> fold_of;
    for (std::size_t f = 0; f < k; ++f) {
        for (const auto& id : folds.folds[f]) {
            if (!fold_of.emplace(id, f).second) fail(Errc::InvalidArgument, "unit " + id + " appears in two folds");
        }
    }

    // canonical sample order so that fits do not depend on dataset order
    std::vector<std::size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&ds](std::size_t a, std::size_t b) {
        const auto& sa = ds.samples[a];
        const auto& sb = ds.samples[b];
        if (sa.trial_id != sb.trial_id) return sa.trial_id < sb.trial_id;
        return sa.window_index.value_or(0) < sb.window_index.value_or(0);
    });

    std::vector<std::size_t> sample_fold(ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto it = fold_of.find(unit_id(ds.samples[i], options.grouping));
        if (it == fold_of.end()) fail(Errc::InvalidArgument, "unit " + unit_id(ds.samples[i], options.grouping) + " is in no fold");
        sample_fold[i] = it->second;
    }

    std::vector<FoldOutcome> outcomes(k);
    parallel_for(k, options.jobs, [&](std::size_t f) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i : order) (sample_fold[i] == f ? test : train).push_back(i);
        if (test.empty()) return;
        try {
            std::vector<StandingScore> scores;
            scores.reserve(train.size());
            for (std::size_t i : train) scores.push_back(ds.samples[i].score);
            const TrainedModel model = fit_model(spec, ds.matrix(train), scores);

            // group held-out samples into units; the test list is already in canonical order
            std::map<std::string, std::vector<double>> unit_preds;
            std::map<std::string, int> unit_truth;
            for (std::size_t i : test) {
                const auto& s = ds.samples[i];
                const auto id = unit_id(s, options.grouping);
                unit_preds[id].push_back(predict(model, s.values));
                unit_truth[id] = target_label(spec.kind, s.score);
            }
            for (const auto& [id, preds] : unit_preds) {
                double value = 0.0;
                if (spec.kind == ModelKind::LinReg) {
                    value = std::accumulate(preds.begin(), preds.end(), 0.0) / static_cast<double>(preds.size());
                } else {
                    std::vector<int> votes;
                    votes.reserve(preds.size());
                    for (double p : preds) votes.push_back(as_class(spec.kind, p));
                    value = majority(votes);
                }
                outcomes[f].predictions.push_back({id, static_cast<double>(unit_truth[id]), value, f});
            }
        } catch (const Error& e) {
            throw e.with_context("fold " + std::to_string(f));
        }
    });

    EvaluationReport report;
    report.model = spec.kind;
    report.features = ds.kind;
    report.grouping = options.grouping;
    report.seed = options.seed;
    report.stratified = folds.stratified;
    if (!folds.warning.empty()) report.warnings.push_back(folds.warning);

    if (spec.kind == ModelKind::Lda) {
        report.confusion.labels = {0, 1};
    } else {
        for (int s = 1; s <= 10; ++s) report.confusion.labels.push_back(s);
    }
    const std::size_t nl = report.confusion.labels.size();
    report.confusion.counts.assign(nl, std::vector<std::size_t>(nl, 0));
    auto label_index = [&report](int label) {
        const auto& l = report.confusion.labels;
        return static_cast<std::size_t>(std::find(l.begin(), l.end(), label) - l.begin());
    };

    std::size_t correct_total = 0;
    std::size_t units_total = 0;
    for (std::size_t f = 0; f < k; ++f) {
        std::size_t correct = 0;
        for (const auto& p : outcomes[f].predictions) {
            const int truth = static_cast<int>(p.truth);
            const int pred = as_class(spec.kind, p.predicted);
            ++report.confusion.counts[label_index(truth)][label_index(pred)];
            if (truth == pred) ++correct;
            report.predictions.push_back(p);
        }
        const std::size_t n = outcomes[f].predictions.size();
        report.fold_sizes.push_back(n);
        report.fold_accuracies.push_back(n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n));
        correct_total += correct;
        units_total += n;
    }
    report.accuracy = units_total == 0 ? 0.0 : static_cast<double>(correct_total) / static_cast<double>(units_total);
    std::sort(report.predictions.begin(), report.predictions.end(),
              [](const UnitPrediction& a, const UnitPrediction& b) { return a.id < b.id; });

    if (spec.kind != ModelKind::Lda && report.predictions.size() >= 2) {
        std::vector<double> pred;
        std::vector<double> truth;
        for (const auto& p : report.predictions) {
            pred.push_back(p.predicted);
            truth.push_back(p.truth);
        }
        report.bands = regression_report(pred, truth);
    }
    return report;
}

EvaluationReport cross_validate(const ModelSpec& spec, const Dataset& ds, const CvOptions& options) {
    return cross_validate(spec, ds, make_folds(ds, spec.kind, options), options);
}

}  // namespace emgstand
