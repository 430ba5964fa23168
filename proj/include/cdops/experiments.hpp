#pragma once

#include <string>

#include "cdops/config.hpp"

namespace cdops {

// Exit statuses of the batch runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitValidationError = 3;
inline constexpr int kExitNumericalFailure = 4;
inline constexpr int kExitInvariantViolation = 5;

struct RunResult {
    int exit_code = kExitOk;
    std::string summary;  // one-line human outcome, also printed to stdout
};

/// Runs a validated experiment configuration: writes report.txt (and CSVs
/// where the experiment produces profiles) under cfg.out_dir. Outputs are
/// deterministic for a fixed config and seed.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace cdops
