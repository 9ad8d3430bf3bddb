#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vfkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kNumeric = 3, kMismatch = 4 };

/// Runs one command. `args` excludes the program name. `env_seed` is the
/// value of VFKIT_SEED, if set; --seed takes precedence over it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_seed = std::nullopt);

} // namespace vfkit::cli
