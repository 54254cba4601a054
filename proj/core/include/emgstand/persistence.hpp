#pragma once

#include "emgstand/dataset.hpp"
#include "emgstand/models.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace emgstand {

inline constexpr int kModelFormatVersion = 1;

/// A trained model together with what is needed to recompute its inputs.
struct ModelDocument {
    TrainedModel model;
    FeatureConfig features;
    std::vector<std::string> feature_names;
};

/// `{format_version, model_kind, standardizer, pca, parameters}`; matrices
/// are row-major nested arrays.
nlohmann::json to_json(const ModelDocument& doc);

/// Throws UnsupportedFormatVersion or MalformedModel.
ModelDocument model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

nlohmann::json to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const nlohmann::json& j);

}  // namespace emgstand
