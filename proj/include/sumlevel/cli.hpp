#pragma once

#include "sumlevel/table.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sumlevel::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 1,
    kUsageError = 2,
    kGuardExceeded = 3,
    kCheckpointMismatch = 4,
    kIoError = 5,
};

struct RunConfig {
    std::string subcommand;

    std::optional<std::int64_t> n;
    std::optional<std::pair<std::int64_t, std::int64_t>> n_range;
    std::string method = "auto";
    std::string quantity = "lambda";
    std::optional<double> eps;
    std::vector<double> ts;

    std::size_t grid = 65536;
    std::string mesh = "dyadic";
    int octaves = 32;
    unsigned threads = 1;
    std::optional<std::filesystem::path> checkpoint;

    int enumeration_guard = 30;
    int exact_guard = 25;
    int float_guard = 36;

    std::string coding = "farey";
    std::string family;

    std::optional<std::string> code;
    std::string alphabet = "farey";
    std::optional<std::string> cylinder;

    std::string check = "monotone";
    std::int64_t n_max = 100;
    std::vector<std::int64_t> levels;
    int exact_upto = 20;

    bool sandwich = false;
    bool even_split = false;

    std::optional<std::uint64_t> seed;
    std::size_t samples = 1;
    int bits = 256;
    std::vector<std::uint64_t> n_grid;
    std::optional<std::string> event;

    Format format = Format::Csv;
    std::optional<std::filesystem::path> output;
};

/// Levels selected by --n or --n-range.
std::vector<std::int64_t> selected_levels(const RunConfig& config);

/// "exact", "compensated" or "operator" for the given level under method "auto".
std::string resolve_method(const RunConfig& config, std::int64_t n);

/// Runs one subcommand; library errors propagate.
Table execute(const RunConfig& config);

/// Parses arguments (without the program name), executes, and writes the table.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sumlevel::cli
