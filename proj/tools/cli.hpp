#pragma once

#include <ostream>

namespace icgb::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Environment variable naming a JSON detector config used as the base
/// for every subcommand (flags still override it).
inline constexpr const char* kConfigEnvVar = "ICGB_CONFIG";

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icgb::cli
