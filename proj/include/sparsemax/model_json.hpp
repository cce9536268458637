#pragma once

#include <json.hpp>

#include "sparsemax/linear_model.hpp"

namespace smax {

// {"K", "D", "loss_kind", "W" (row-major), "b"}.
nlohmann::json model_to_json(const LinearModel& model);
// Throws ConfigError on a schema violation.
LinearModel model_from_json(const nlohmann::json& j);

}  // namespace smax
