#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pglab/certifier.hpp"

namespace pglab::cli {

inline constexpr int kSchemaVersion = 1;

/// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotFound = 2;

/// Environment variable that replaces the default enumeration guard.
inline constexpr const char* kGuardEnv = "PGLAB_GUARD";

std::string tool_version();

/// Canonical JSON of a certificate (sorted keys, compact).
std::string certificate_json(const Certificate& cert, const EnumerationGuard& guard);
Certificate parse_certificate(const std::string& json_text);

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pglab::cli
