#pragma once

// Experiment drivers behind the command-line tool. Each command returns its
// exit code, the CSV body (if any) and human-readable summary lines.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quakebend/ptorus.hpp"

namespace quakebend::tools {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_invariant = 2, exit_nonconvergence = 3 };

struct RunConfig {
    std::string command;
    double l_gamma{symmetric_length()};
    std::string slope{"0/1"};
    double t_min{-1.5};
    double t_max{1.5};
    int t_count{61};
    int r_min{1};
    int r_max{20};
    std::uint64_t seed{0};
    std::string out;          ///< CSV destination; empty means standard output
    std::string word{"Y"};    ///< xi for converge
    double t{0.7};            ///< single bending angle for converge, fit and group
    std::string shears;       ///< "re1,im1,re2,im2[,re3,im3]" for forward and jacobian
    std::string traces;       ///< "x_re,x_im,y_re,y_im,z_re,z_im" for fit
    bool inject_failure{false};
};

struct CommandResult {
    int exit_code{exit_ok};
    std::string body; ///< CSV table (JSON for fuzz)
    std::vector<std::string> summary;
};

/// Raised for invalid configurations (exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Evenly spaced grid; throws ConfigError unless the count is odd, at least 3,
/// and one grid point is (snapped to) t = 0.
std::vector<double> t_grid(const RunConfig& cfg);

CommandResult cmd_c2(const RunConfig& cfg);
CommandResult cmd_converge(const RunConfig& cfg);
CommandResult cmd_fuzz(const RunConfig& cfg);
CommandResult cmd_forward(const RunConfig& cfg);
CommandResult cmd_fit(const RunConfig& cfg);
CommandResult cmd_jacobian(const RunConfig& cfg);
CommandResult cmd_track(const RunConfig& cfg);
CommandResult cmd_group(const RunConfig& cfg);

/// Dispatches on cfg.command and maps library errors onto exit codes.
CommandResult run(const RunConfig& cfg);

} // namespace quakebend::tools
