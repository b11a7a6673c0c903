#pragma once

#include "vortlab/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace vortlab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_precondition = 2,
    exit_divergence = 3,
    exit_io = 4,
};

/// Checks every precondition of the dispatched operation without running it.
/// Throws PreconditionError (or ConfigError) naming the violation.
void validate_config(const ExperimentConfig& cfg);

struct RunOutcome {
    std::filesystem::path csv;
    std::filesystem::path json;
    std::filesystem::path manifest;
};

/// Runs one experiment and writes <experiment>-<seed>.csv/.json and manifest.json into cfg.out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// One-line JSON error record: {"error": kind, "message": ..., "line": ...}.
std::string error_record(const std::string& kind, const std::string& message, int line = 0);

/// Library version string.
const char* version();

} // namespace vortlab
