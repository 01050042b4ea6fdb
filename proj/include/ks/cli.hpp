#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ks::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kInputError = 2,
    kIoError = 3,
    kUncolorable = 10,
    kWitnessNotFound = 11,
};

/// Runs the tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// KS_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path data_dir();

/// A path as given if it exists; otherwise a bare name is looked up in the
/// data directory (and its oracles/ subdirectory), with ".json" appended
/// when missing.
std::filesystem::path resolve_input(const std::string& name);

/// Parses a radian value. Rejects anything carrying a degree marker.
double parse_angle(const std::string& text, const std::string& what);

/// Twelve digits after the decimal point; negative zero prints as zero.
std::string format_fixed(double x);

} // namespace ks::cli
