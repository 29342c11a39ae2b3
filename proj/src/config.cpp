#include "goefluct/config.hpp"

#include <json.hpp>

namespace goefluct {
namespace {

using nlohmann::json;

CovarianceModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("model must be an object with a \"kind\"");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fbm") {
        return CovarianceModel::fractional_brownian(j.at("hurst").get<double>());
    }
    if (kind == "bm") return CovarianceModel::brownian();
    if (kind == "ou") {
        return CovarianceModel::ornstein_uhlenbeck(j.at("theta").get<double>());
    }
    if (kind == "tabulated") {
        return CovarianceModel::tabulated(
            j.at("times").get<std::vector<double>>(),
            j.at("matrix").get<std::vector<std::vector<double>>>());
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

TestFunction function_from_json(const json& j) {
    if (j.is_string()) return TestFunction::parse(j.get<std::string>());
    if (j.is_object()) {
        if (j.contains("poly")) {
            return TestFunction::polynomial(j.at("poly").get<std::vector<double>>());
        }
        if (j.contains("name")) {
            return TestFunction::builtin(j.at("name").get<std::string>());
        }
    }
    throw std::invalid_argument(
        "test function must be a shorthand string, {\"poly\":[...]}, or "
        "{\"name\":...}");
}

}  // namespace

CovarianceModel model_from_json_text(const std::string& json_text) {
    return model_from_json(json::parse(json_text));
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("config must be an object");

    ExperimentConfig config;
    config.model = model_from_json(j.at("model"));
    config.n = j.at("n").get<int>();
    config.grid = TimeGrid(j.at("grid").get<std::vector<double>>());
    config.functions.clear();
    for (const auto& jf : j.at("functions")) {
        config.functions.push_back(function_from_json(jf));
    }
    config.replicas = j.at("replicas").get<int>();
    config.seed = j.value("seed", 0ull);
    config.validate();
    return config;
}

}  // namespace goefluct
