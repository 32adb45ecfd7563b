#include "seer/engine.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>
#include <utility>

#include "seer/error.hpp"
#include "seer/secure_memory.hpp"

namespace fs = std::filesystem;

namespace seer {

namespace {

[[noreturn]] void throw_os(const fs::path& path, const char* what) {
    throw Error(Errc::io, path.string() + ": " + what + ": " + std::strerror(errno));
}

class FileHandle {
public:
    explicit FileHandle(int fd) noexcept : fd_(fd) {}
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
    ~FileHandle() {
        if (fd_ >= 0) ::close(fd_);
    }
    int get() const noexcept { return fd_; }
    int release() noexcept { return std::exchange(fd_, -1); }

private:
    int fd_;
};

void read_exact(int fd, std::span<std::uint8_t> buf, std::uint64_t offset, const fs::path& path) {
    std::size_t done = 0;
    while (done < buf.size()) {
        ssize_t n = ::pread(fd, buf.data() + done, buf.size() - done,
                            static_cast<off_t>(offset + done));
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_os(path, "read");
        }
        if (n == 0) throw Error(Errc::io, path.string() + ": file shrank during erasure");
        done += static_cast<std::size_t>(n);
    }
}

void write_exact(int fd, std::span<const std::uint8_t> buf, std::uint64_t offset,
                 const fs::path& path) {
    std::size_t done = 0;
    while (done < buf.size()) {
        ssize_t n = ::pwrite(fd, buf.data() + done, buf.size() - done,
                             static_cast<off_t>(offset + done));
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_os(path, "write");
        }
        done += static_cast<std::size_t>(n);
    }
}

void sync_data(int fd, const fs::path& path) {
    if (::fdatasync(fd) != 0) throw_os(path, "fdatasync");
}

// Encrypts [0, length) in place, destroys the session, appends the footer.
void encrypt_in_place(int fd, std::uint64_t length, const fs::path& path,
                      const ErasureConfig& config, SessionKeys& session, const Salt& salt,
                      const CipherIV& iv, const EngineHooks* hooks, ErasureReport& report) {
    try {
        session.derive(salt);
        if (hooks && hooks->after_derive) hooks->after_derive(session, iv);

        Sosemanuk cipher = session.open_cipher(iv);
        std::vector<std::uint8_t> chunk(static_cast<std::size_t>(
            std::min<std::uint64_t>(config.chunk_size, std::max<std::uint64_t>(length, 1))));
        for (std::uint64_t offset = 0; offset < length;) {
            auto piece = std::span(chunk).first(
                static_cast<std::size_t>(std::min<std::uint64_t>(chunk.size(), length - offset)));
            read_exact(fd, piece, offset, path);
            cipher.apply(piece);
            write_exact(fd, piece, offset, path);
            offset += piece.size();
            report.bytes_processed = offset;
            report.bytes_written += piece.size();
        }
        cipher.wipe();
        secure_zero(chunk);
    } catch (...) {
        const DestructionProof proof = session.destroy();
        report.session_destroyed = proof.verified;
        if (hooks && hooks->after_destroy) hooks->after_destroy(session, proof);
        throw;
    }

    const DestructionProof proof = session.destroy();
    report.session_destroyed = proof.verified;
    if (hooks && hooks->after_destroy) hooks->after_destroy(session, proof);

    if (config.fsync) sync_data(fd, path);
    if (hooks && hooks->before_footer && !hooks->before_footer(path)) {
        throw Error(Errc::io, path.string() + ": interrupted before footer write");
    }

    ErasureFooter footer;
    footer.original_length = length;
    footer.salt = salt;
    footer.iv = iv.bytes();
    footer.u_publ = session.u_publ();
    const auto bytes = footer.serialize();
    write_exact(fd, bytes, length, path);
    report.bytes_written += bytes.size();
    if (config.fsync) sync_data(fd, path);
}

}  // namespace

std::string_view to_string(ErasureStatus status) noexcept {
    switch (status) {
        case ErasureStatus::destroyed: return "Destroyed";
        case ErasureStatus::skipped: return "Skipped";
        case ErasureStatus::failed: return "Failed";
    }
    return "Unknown";
}

nlohmann::json to_json(const ErasureReport& report) {
    nlohmann::json j;
    j["path"] = report.path.string();
    j["status"] = std::string(to_string(report.status));
    j["bytes_processed"] = report.bytes_processed;
    j["wall_time_ms"] = report.wall_time_ms;
    j["session_destroyed"] = report.session_destroyed;
    j["error"] = report.error ? nlohmann::json(*report.error) : nlohmann::json(nullptr);
    return j;
}

void ErasureConfig::validate() const {
    if (chunk_size < 4096 || chunk_size % 16 != 0) {
        throw Error(Errc::invalid_argument,
                    "chunk size " + std::to_string(chunk_size) +
                        " must be at least 4096 and a multiple of 16");
    }
    if (threads < 1) throw Error(Errc::invalid_argument, "threads must be at least 1");
}

ErasureReport destroy_file(const fs::path& path, const ErasureConfig& config,
                           EntropySource& entropy, const EngineHooks* hooks) {
    const auto start = std::chrono::steady_clock::now();
    ErasureReport report;
    report.path = path;

    auto finish = [&](ErasureStatus status, std::optional<std::string> error) {
        report.status = status;
        report.error = std::move(error);
        report.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        return report;
    };

    try {
        config.validate();

        struct stat st {};
        if (::lstat(path.c_str(), &st) != 0) throw_os(path, "stat");
        if (S_ISLNK(st.st_mode)) {
            if (!config.follow_symlinks) {
                return finish(ErasureStatus::skipped, "symbolic link not followed");
            }
            if (::stat(path.c_str(), &st) != 0) throw_os(path, "stat");
        }
        if (!S_ISREG(st.st_mode)) return finish(ErasureStatus::skipped, "not a regular file");
        if (config.dry_run) return finish(ErasureStatus::skipped, "dry run");

        int flags = O_RDWR | O_CLOEXEC;
        if (!config.follow_symlinks) flags |= O_NOFOLLOW;
        FileHandle file(::open(path.c_str(), flags));
        if (file.get() < 0) throw_os(path, "open");
        if (::fstat(file.get(), &st) != 0) throw_os(path, "stat");
        if (!S_ISREG(st.st_mode)) return finish(ErasureStatus::skipped, "not a regular file");
        const auto length = static_cast<std::uint64_t>(st.st_size);

        Salt salt = entropy.bytes<32>();
        const CipherIV iv(entropy.bytes<CipherIV::size>());
        SessionKeys session = SessionKeys::generate(entropy);

        encrypt_in_place(file.get(), length, path, config, session, salt, iv, hooks, report);

        if (::close(file.release()) != 0) throw_os(path, "close");
        return finish(ErasureStatus::destroyed, std::nullopt);
    } catch (const std::exception& e) {
        return finish(ErasureStatus::failed, e.what());
    }
}

std::vector<fs::path> collect_files(const fs::path& root, const ErasureConfig& config) {
    std::error_code ec;
    const auto root_status = fs::symlink_status(root, ec);
    if (ec || !fs::exists(root_status)) {
        throw Error(Errc::io, root.string() + ": no such file or directory");
    }
    const bool root_is_dir = fs::is_directory(root_status) ||
                             (config.follow_symlinks && fs::is_symlink(root_status) &&
                              fs::is_directory(fs::status(root, ec)));
    if (!root_is_dir) return {root};

    std::vector<fs::path> files;
    auto consider = [&](const fs::directory_entry& entry) {
        std::error_code e;
        if (entry.is_symlink(e) && !config.follow_symlinks) return;
        if (entry.is_regular_file(e)) files.push_back(entry.path());
    };

    auto options = fs::directory_options::skip_permission_denied;
    if (config.follow_symlinks) options |= fs::directory_options::follow_directory_symlink;
    if (config.recursive) {
        for (const auto& entry : fs::recursive_directory_iterator(root, options)) consider(entry);
    } else {
        for (const auto& entry : fs::directory_iterator(root, options)) consider(entry);
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<ErasureReport> destroy_tree(const fs::path& root, const ErasureConfig& config,
                                        EntropySource& entropy, const ReportSink& sink,
                                        const EngineHooks* hooks) {
    config.validate();
    const std::vector<fs::path> files = collect_files(root, config);
    std::vector<ErasureReport> reports(files.size());
    if (files.empty()) return reports;

    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            reports[i] = destroy_file(files[i], config, entropy, hooks);
            if (sink) {
                std::lock_guard lock(sink_mutex);
                sink(reports[i]);
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(config.threads, files.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    return reports;
}

}  // namespace seer
