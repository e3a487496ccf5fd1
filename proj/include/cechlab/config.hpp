#pragma once

#include <string>

#include <json.hpp>

#include "cechlab/experiment.hpp"

namespace cechlab {

inline constexpr const char* kVersion = "0.1.0";

/// Keys: d, k, theta, density {box: [[lo, hi], ...]}, radius {c, q}, n_grid,
/// trials, seed, field, m, max_trials, target_rse, threads. Missing keys keep
/// the defaults of `base`; unknown keys are a ConfigurationError.
ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});
ExperimentSpec load_spec(const std::string& path, ExperimentSpec base = {});
nlohmann::json spec_to_json(const ExperimentSpec& spec);

/// Versions and build facts recorded in every manifest.
nlohmann::json build_info();

/// Writes {command, parameters, outputs, build} as JSON to `path`.
void write_manifest(const std::string& path, const std::string& command, const nlohmann::json& parameters,
                    const nlohmann::json& outputs);

}  // namespace cechlab
