#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <springs/params.h>

namespace springs {

struct RunResult {
    std::vector<std::filesystem::path> files;  // CSVs, then the summary
    nlohmann::json summary;
};

/// Runnable names: the manifests plus the fig3-sta / fig3-oct views of fig3.
std::vector<std::string> experiment_names();

/// Defaults for a runnable name (aliases resolve to their base manifest).
ExperimentManifest experiment_manifest(const std::string& name);

/// Writes the CSVs and <name>_summary.json into manifest.output_dir. Solver errors
/// propagate unchanged. Output does not depend on `workers`.
RunResult run_experiment(const ExperimentManifest& manifest, std::size_t workers = 1);

/// The custom experiment with `method` preset, including that method's defaults.
ExperimentManifest design_manifest(const std::string& method);

/// Human-readable catalogue: parameters with defaults and CSV schemas.
std::string describe_experiments();

}  // namespace springs
