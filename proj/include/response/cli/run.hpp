#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "response/cli/problem_io.hpp"

namespace response::cli {

/// Exit codes of the solver front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_not_converged = 2,
    exit_certification = 3,
    exit_input = 4,
};

struct RunConfig {
    std::string command;  ///< solve-ode, solve-pde, sweep, probe-analytic, low-reg, verify, demo-liouville
    json problem;         ///< inline document (a path in the config is resolved at load)
    json solver = json::object();
    json options = json::object();  ///< command-specific settings
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
    /// "multiplier" or "multiplier:<mode index>"; honored only when built
    /// with fault injection.
    std::optional<std::string> inject_fault;
    json source;  ///< the config document as read, for echoing
};

/// Reads a run config.  A string "problem" and output_dir are paths
/// relative to the config file.
RunConfig load_config(const std::filesystem::path& path);

/// Executes the command and writes result.json (deterministic),
/// metadata.json and the CSV data into output_dir; on failure writes
/// error.json.  Never throws.
int run(const RunConfig& config);

}  // namespace response::cli
