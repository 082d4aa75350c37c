#pragma once

// JSON form of ModelConfig. Example:
//
//   {
//     "n": 600, "inv_alpha": 3, "kappa": 0.5, "sigma_sq": 0.2,
//     "factor_cov": {"kind": "identity", "scale": 1},
//     "feature_noise_cov": {"kind": "toeplitz_mix", "q": 0.3, "scale": 0.01},
//     "response_noise_cov": {"kind": "identity"},
//     "loadings": {"kind": "scaled_unitary", "c_l": 4},
//     "beta_bar": "default",
//     "entry_distribution": "gaussian",
//     "seed": 7
//   }
//
// Covariance kinds: identity{scale}, toeplitz_mix{q, scale}, dense{matrix}.
// Loadings kinds: scaled_unitary{c_l}, leading_eigenvectors{q_L}, dense{matrix}.
// Unknown keys are rejected with ErrorKind::ConfigError.

#include <filesystem>

#include "json.hpp"

#include "frm/model.hpp"

namespace frm {

ModelConfig parse_model_config(const nlohmann::json& doc);
ModelConfig load_model_config(const std::filesystem::path& path);
nlohmann::json to_json(const ModelConfig& config);

}  // namespace frm
