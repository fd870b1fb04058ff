#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace horocount::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kValidation = 2;
inline constexpr int kResource = 3;
inline constexpr int kUnknownSubcommand = 64;

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

/// --threads, else HOROCOUNT_THREADS, else 0 (hardware parallelism).
unsigned thread_count(unsigned flag_value);

} // namespace horocount::cli
