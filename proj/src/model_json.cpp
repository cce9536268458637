#include "sparsemax/model_json.hpp"

#include "sparsemax/errors.hpp"

namespace smax {

nlohmann::json model_to_json(const LinearModel& model) {
  return {{"K", model.num_labels},
          {"D", model.num_features},
          {"loss_kind", to_string(model.loss)},
          {"W", model.weights},
          {"b", model.bias}};
}

LinearModel model_from_json(const nlohmann::json& j) {
  try {
    LinearModel model(j.at("K").get<std::size_t>(),
                      j.at("D").get<std::size_t>(),
                      loss_kind_from_string(j.at("loss_kind").get<std::string>()));
    auto weights = j.at("W").get<std::vector<double>>();
    auto bias = j.at("b").get<Vector>();
    if (weights.size() != model.weights.size() ||
        bias.size() != model.bias.size()) {
      throw ConfigError("model JSON: W or b has the wrong length");
    }
    model.weights = std::move(weights);
    model.bias = std::move(bias);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model JSON: ") + e.what());
  }
}

}  // namespace smax
