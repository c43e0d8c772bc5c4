#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "billiards/pipeline.hpp"

namespace billiards {

/// An orbit-catalog property check failed; maps to exit code 3.
class InvariantFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numeric = 2, exit_invariant = 3 };

/// Files written by one command, in write order.
struct CommandOutput {
    std::vector<std::filesystem::path> files;
};

CommandOutput cmd_spectrum(const RunConfig& config, SpectrumProvider& provider, std::ostream& log);
CommandOutput cmd_orbits(const RunConfig& config, std::ostream& log);
CommandOutput cmd_stats(const RunConfig& config, SpectrumProvider& provider, std::ostream& log);
CommandOutput cmd_fourier(const RunConfig& config, SpectrumProvider& provider, std::ostream& log);
/// Small fixed runs of every command under out_dir/selftest.
CommandOutput cmd_selftest(const RunConfig& config, SpectrumProvider& provider, std::ostream& log);

/// Parses argv-style arguments (without the program name), runs the subcommand and maps
/// exceptions to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace billiards
