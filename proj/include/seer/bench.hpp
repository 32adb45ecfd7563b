#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seer/entropy.hpp"

namespace seer {

enum class BenchMethod { seer, single_pass, dod3_pass, gutmann35 };
enum class ContentClass { text, image_like, binary };

std::string_view to_string(BenchMethod method) noexcept;
std::string_view to_string(ContentClass content) noexcept;

/// Accepts the canonical names ("Seer", "Dod3Pass", ...) and the short CLI
/// spellings ("seer", "single", "dod3", "gutmann", "text", "image", "binary").
/// Throws Error(invalid_argument) otherwise.
BenchMethod parse_method(std::string_view name);
ContentClass parse_content_class(std::string_view name);

struct BenchSpec {
    BenchMethod method = BenchMethod::seer;
    std::uint64_t file_count = 100;
    std::uint64_t file_size = 1024;
    ContentClass content_class = ContentClass::text;
    unsigned threads = 1;
    unsigned repetitions = 1;
    std::uint64_t seed = 1;
    bool fsync = true;

    /// Throws Error(invalid_argument) on a zero count, size, thread count or
    /// repetition count.
    void validate() const;
};

struct BenchResult {
    BenchSpec spec;
    std::vector<double> repetition_seconds;
    double total_seconds = 0.0;  // median over repetitions
    double mean_ms_per_file = 0.0;
    double stddev_ms = 0.0;  // of the per-repetition mean per file
    std::uint64_t payload_bytes = 0;  // corpus size
    std::uint64_t bytes_written = 0;  // per repetition, footers included
    std::uint64_t payload_passes_written = 0;  // per repetition, footers excluded
    bool valid = true;
    std::optional<std::string> error;
};

/// Writes spec.file_count files of exactly spec.file_size octets into `dir`
/// (created if missing). Content is a pure function of (class, seed, index).
/// Throws Error(io) before writing anything if the filesystem lacks room.
std::vector<std::filesystem::path> make_corpus(const BenchSpec& spec,
                                               const std::filesystem::path& dir);

/// Content of corpus file `index`.
std::vector<std::uint8_t> corpus_file_content(ContentClass content, std::uint64_t seed,
                                              std::uint64_t index, std::uint64_t size);

struct OverwriteCount {
    std::uint64_t bytes_written = 0;
    unsigned passes = 0;
};

/// One overwrite baseline over a single file, in place. Random passes use a
/// Sosemanuk keystream keyed from `entropy`. Throws Error(io).
OverwriteCount overwrite_file(const std::filesystem::path& path, BenchMethod method,
                              EntropySource& entropy, bool fsync = true);

/// Regenerates the corpus under `workdir` for every repetition and times
/// the full destroy pass with a monotonic clock.
BenchResult run_bench(const BenchSpec& spec, const std::filesystem::path& workdir);

/// One line of the CSV schema.
struct CsvRow {
    std::string method;
    std::string content_class;
    std::uint64_t file_count = 0;
    std::uint64_t file_size = 0;
    unsigned repetition = 0;
    double total_seconds = 0.0;
    double mean_ms_per_file = 0.0;

    bool operator==(const CsvRow&) const = default;
};

std::vector<CsvRow> to_csv_rows(std::span<const BenchResult> results);
std::string render_csv(std::span<const BenchResult> results);
/// Throws Error(invalid_argument) on a malformed document.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Aligned text pivot: one row per (method, content class), one column per
/// (file count, file size), cells are median total seconds.
/// Throws Error(invalid_argument) on empty input.
std::string render_table(std::span<const BenchResult> results);

}  // namespace seer
