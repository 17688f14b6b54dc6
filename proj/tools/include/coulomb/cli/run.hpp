#pragma once

#include <iosfwd>

#include "coulomb/cli/config.hpp"

namespace coulomb::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Executes the command, writing its outputs and manifest.json into
/// config.out. Library errors propagate; main maps them to kExitUsage.
int run(const RunConfig& config, std::ostream& log);

}  // namespace coulomb::cli
