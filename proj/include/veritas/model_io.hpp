#pragma once

#include "json.hpp"
#include "veritas/classifiers.hpp"

namespace veritas {

/// Lossless JSON form of a fitted model. Labels are stored as their index
/// (deceptive = 0, truthful = 1).
nlohmann::json model_to_json(const ClassifierModel& model);

/// Inverse of model_to_json. Throws CorruptBundle on missing or ill-typed fields.
ClassifierModel model_from_json(const nlohmann::json& j);

}  // namespace veritas
