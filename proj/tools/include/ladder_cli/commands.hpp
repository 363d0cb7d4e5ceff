#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ladder::cli {

struct Invocation {
  std::optional<std::filesystem::path> config;
  /// Overrides [output] dir.
  std::optional<std::filesystem::path> out;
  unsigned threads = 1;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand. Returns the process exit code: 0 on success, 1 when
/// a computation or a validation check fails, 2 for configuration errors.
/// Diagnostics go to err, a one-line summary per written file to log.
int run_command(std::string_view name, const Invocation& invocation, std::ostream& log,
                std::ostream& err);

}  // namespace ladder::cli
