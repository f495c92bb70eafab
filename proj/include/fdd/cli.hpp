// cli.hpp — Batch front end: subcommands, exit codes and result files

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fdd::cli {

enum ExitCode : int {
    success = 0,
    invalid_scenario = 1,
    physics_error = 2,
    io_error = 3,
    internal_error = 4,
};

struct RunOptions {
    std::string subcommand;
    std::optional<std::filesystem::path> scenario;
    std::filesystem::path out{"."};
    int threads{1};
    long long seed{0}; // reserved; no subcommand draws random numbers
    bool timing{false}; // adds wall-clock seconds to the JSON bundle
};

const std::vector<std::string>& subcommands();

// Runs one subcommand and writes its files into `out`. Diagnostics go to `err`.
int run(const RunOptions& options, std::ostream& err);

// Parses argv and dispatches to run().
int main(int argc, char** argv);

} // namespace fdd::cli
