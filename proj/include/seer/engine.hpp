#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seer/entropy.hpp"
#include "seer/footer.hpp"
#include "seer/session.hpp"

namespace seer {

enum class ErasureStatus { destroyed, skipped, failed };

std::string_view to_string(ErasureStatus status) noexcept;

struct ErasureReport {
    std::filesystem::path path;
    ErasureStatus status = ErasureStatus::failed;
    std::uint64_t bytes_processed = 0;
    double wall_time_ms = 0.0;
    bool session_destroyed = false;
    std::optional<std::string> error;

    // Not serialized: total octets written to the file (payload + footer).
    std::uint64_t bytes_written = 0;
};

/// {path, status, bytes_processed, wall_time_ms, session_destroyed, error}
nlohmann::json to_json(const ErasureReport& report);

struct ErasureConfig {
    std::size_t chunk_size = 65536;
    bool recursive = false;
    bool follow_symlinks = false;
    unsigned threads = 1;
    bool fsync = true;
    bool dry_run = false;

    /// Throws Error(invalid_argument) unless chunk_size >= 4096, a multiple
    /// of 16, and threads >= 1.
    void validate() const;
};

/// Observation points for tests. Every callback is optional.
struct EngineHooks {
    /// After key derivation, before the first write.
    std::function<void(const SessionKeys&, const CipherIV&)> after_derive;
    /// After destroy(), while the session object is still alive.
    std::function<void(const SessionKeys&, const DestructionProof&)> after_destroy;
    /// Before the footer write; returning false simulates an interruption.
    std::function<bool(const std::filesystem::path&)> before_footer;
};

/// Destroys one file in place: fresh session, chunked read/encrypt/write
/// through a single descriptor, key destruction, footer append, sync.
/// Never throws for per-file conditions; they are reported as skipped or
/// failed.
ErasureReport destroy_file(const std::filesystem::path& path, const ErasureConfig& config,
                           EntropySource& entropy, const EngineHooks* hooks = nullptr);

using ReportSink = std::function<void(const ErasureReport&)>;

/// Destroys every regular file under `root` (or `root` itself when it is a
/// file) with a pool of config.threads workers. Reports come back sorted by
/// path; `sink`, if set, is called once per report from a serialized
/// context as files complete. Throws Error(io) if `root` does not exist.
std::vector<ErasureReport> destroy_tree(const std::filesystem::path& root,
                                        const ErasureConfig& config, EntropySource& entropy,
                                        const ReportSink& sink = {},
                                        const EngineHooks* hooks = nullptr);

/// Regular files under `root` in path order, honouring the recursion and
/// symlink policy.
std::vector<std::filesystem::path> collect_files(const std::filesystem::path& root,
                                                 const ErasureConfig& config);

}  // namespace seer
