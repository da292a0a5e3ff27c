#pragma once

// Subcommand execution for the `phases` command-line tool. All results are
// computed in memory first and then written by a single writer, so a failing
// run leaves no partial files.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bhcav/output.hpp"

namespace bhcav {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNumerical = 2,
    kExitOracleFailure = 3,
};

struct CliOptions {
    std::string command;  // single | two | cavity | general | oracle | figure
    std::optional<std::string> figure_id;
    std::optional<std::string> config_path;
    std::optional<std::string> config_text;  // used instead of reading config_path
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> seeds;
    std::optional<std::uint64_t> seed;
    bool physical = false;
    std::optional<std::string> preset;
    std::optional<int> n;
    std::optional<double> u;
};

struct RunResult {
    int exit_code = kExitOk;
    std::string out_dir;
    std::vector<OutputFile> files;
    std::string message;  // error text or a one-line summary
};

// Computes every output without touching the file system. Errors are mapped
// to exit codes: 1 validation, 2 numerical, 3 oracle verification failure.
RunResult execute(const CliOptions& opts);

// execute() followed by the atomic write of its files (also on exit code 3,
// so the failing report is kept). Messages go to `log`.
int run(const CliOptions& opts, std::ostream& log);

}  // namespace bhcav
