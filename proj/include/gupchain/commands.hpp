#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gupchain/config.hpp"
#include "gupchain/output.hpp"

namespace gupchain {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitInvariant = 3,
};

inline constexpr std::uint64_t kFockSeed = 20240612;

struct CommandResult {
  Metadata metadata;
  std::vector<Table> tables;
  /// kExitInvariant when a built-in self-check failed; tables are still
  /// written.
  int exit_code = kExitOk;
};

std::string usage();

/// Canonical command name from words such as {"oracle", "fock"} or
/// {"phase-gup-single"}; empty if unknown.
std::string canonical_command(const std::vector<std::string>& words);

/// Commands other than the Fock, coincidence and dropped-term oracles need a
/// config.
bool command_needs_config(const std::string& command);

/// Runs one command. Throws ConfigError, NumericalFailure or
/// InvariantViolation.
CommandResult run_command(const std::string& command, const std::optional<RunConfig>& config);

/// Runs a command and writes its tables to `out`, mapping errors to exit
/// codes with a message on `err`.
int dispatch(const std::vector<std::string>& words, const std::optional<RunConfig>& config, std::ostream& out,
             std::ostream& err, OutputFormat format);

}  // namespace gupchain
