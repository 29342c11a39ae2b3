#pragma once

#include <string>

#include "goefluct/experiments.hpp"

namespace goefluct {

// Experiment configuration as a single JSON document:
//   {
//     "model": {"kind":"fbm","hurst":0.75} | {"kind":"bm"}
//              | {"kind":"ou","theta":1.0}
//              | {"kind":"tabulated","times":[...],"matrix":[[...]]},
//     "n": 40,
//     "grid": [0.5, 1.0],
//     "functions": ["x^2", {"poly":[0,0,1]}, {"name":"sin"}],
//     "replicas": 4000,
//     "seed": 7
//   }
// Throws std::invalid_argument (or json parse errors) on malformed input.
ExperimentConfig parse_experiment_config(const std::string& json_text);

CovarianceModel model_from_json_text(const std::string& json_text);

}  // namespace goefluct
