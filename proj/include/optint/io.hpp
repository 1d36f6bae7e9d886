#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "optint/causal.hpp"
#include "optint/datagen.hpp"
#include "optint/graph.hpp"
#include "optint/models.hpp"
#include "optint/scm.hpp"

namespace optint::io {

using nlohmann::json;

// Graph document: {"n", "names"?, "edges": [{"from", "to", "weight"}]} with
// 1-based vertex indices. Duplicate edges and zero weights are rejected.
json to_json(const Dag& dag);
Dag dag_from_json(const json& doc);

// {"family": "gaussian", "mean", "stddev"} | {"family": "uniform", "lo", "hi"}
// | {"family": "constant", "value"}
json to_json(const NoiseSpec& noise);
NoiseSpec noise_from_json(const json& doc);

// Graph document plus "noises": one entry per variable.
json to_json(const Scm& scm);
Scm scm_from_json(const json& doc);
bool has_noises(const json& doc);

// {"kind", "bias", "coeffs", "predictor_indices", "target_index"}; 1-based.
json to_json(const PredictionModel& model);
PredictionModel model_from_json(const json& doc);

// Every field optional; missing ones keep their defaults.
json to_json(const DagGenConfig& config);
DagGenConfig datagen_config_from_json(const json& doc);

// {"target_variable", "value", "desired_prediction", "predicted_expectation",
//  "effects": [alpha...], "warnings": [...]}; variable index 1-based.
json plan_to_json(const InterventionPlan& plan, const Dag& dag, const std::vector<std::string>& warnings);

// Headered CSV, %.12g.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
std::string dump(const json& doc);

// "%.12g"
std::string format_number(double v);

}  // namespace optint::io
