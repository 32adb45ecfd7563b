#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seer {

/// Process context for the command-line front end.
struct CliContext {
    std::istream* in = nullptr;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;

    /// Path of the running executable; destroy refuses to touch it.
    std::filesystem::path self_path;

    /// Deterministic entropy seeded with test_seed, and an optional key log
    /// used by tests to decrypt destroyed files. Only honoured by builds that
    /// opt in at compile time.
    bool test_mode = false;
    std::uint64_t test_seed = 0;
    std::optional<std::filesystem::path> test_keylog;
};

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_partial = 2,
};

/// Runs `seer <args...>` (args exclude the program name).
int run_cli(const std::vector<std::string>& args, const CliContext& context);

}  // namespace seer
