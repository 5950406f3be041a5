#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mslab/cli/config.hpp"

namespace mslab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitOutOfRegime = 4,
};

const std::vector<std::string>& command_names();

// Writes the manifest, then runs one subcommand into out_dir. Returns
// kExitOutOfRegime when certify finished but k lies outside the minorization
// regime; every other failure is thrown.
int run_command(const std::string& command, const ExperimentConfig& cfg,
                const std::filesystem::path& out_dir);

// Command-line entry point: parses flags, runs, and maps errors onto exit
// codes with a one-line message on err.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mslab::cli
