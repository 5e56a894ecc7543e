#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acmdp {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitSolver = 2, kExitProperty = 3 };

struct RunConfig {
    /// analyze | evaluate | optimize | lp | simulate | reproduce
    std::string command;
    /// lp: sweep | solve. reproduce: example name.
    std::string target;
    std::string input_path;
    std::string policy_path;
    std::string drift_path;
    /// Empty: print to stdout.
    std::string output_dir;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> K;
    /// json | csv | both
    std::string format = "both";
    std::vector<std::size_t> Ks;
    std::string scheme = "geometric";
    std::string cost = "linear";
    bool exact = false;
    /// Start state (simulate, optimize, occupation example).
    std::size_t state = 0;
    /// Start point of the inventory walk.
    double start = 25.0;
    std::optional<std::size_t> n_traj;
};

struct RunResult {
    int exit_code = kExitOk;
    /// File name -> content.
    std::map<std::string, std::string> artifacts;
    std::string error;
};

/// Executes one command. Artifacts are written to output_dir (or printed when
/// it is empty) and also returned.
RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and calls run.
int cli_main(int argc, char** argv);

}  // namespace acmdp
