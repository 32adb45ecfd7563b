#include "seer/bench.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <sys/statvfs.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "seer/engine.hpp"
#include "seer/error.hpp"
#include "seer/secure_memory.hpp"
#include "seer/sosemanuk.hpp"

namespace seer {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t io_chunk = 1 << 16;

std::string errno_text(const std::string& what, const fs::path& path) {
    return what + " " + path.string() + ": " + std::strerror(errno);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// One overwrite pass. A pattern is either a repeating octet sequence or,
// when empty, keystream.
struct Pass {
    std::array<std::uint8_t, 3> pattern{};
    std::size_t length = 0;
};

Pass fixed(std::uint8_t b) { return {{b, b, b}, 1}; }
Pass triple(std::uint8_t a, std::uint8_t b, std::uint8_t c) { return {{a, b, c}, 3}; }
Pass random_pass() { return {}; }

std::vector<Pass> passes_for(BenchMethod method) {
    switch (method) {
        case BenchMethod::single_pass:
            return {random_pass()};
        case BenchMethod::dod3_pass:
            return {fixed(0x00), fixed(0xFF), random_pass()};
        case BenchMethod::gutmann35: {
            std::vector<Pass> p(4, random_pass());
            p.push_back(fixed(0x55));
            p.push_back(fixed(0xAA));
            p.push_back(triple(0x92, 0x49, 0x24));
            p.push_back(triple(0x49, 0x24, 0x92));
            p.push_back(triple(0x24, 0x92, 0x49));
            for (int b = 0x00; b <= 0xFF; b += 0x11) p.push_back(fixed(static_cast<std::uint8_t>(b)));
            p.push_back(triple(0x92, 0x49, 0x24));
            p.push_back(triple(0x49, 0x24, 0x92));
            p.push_back(triple(0x24, 0x92, 0x49));
            p.push_back(triple(0x6D, 0xB6, 0xDB));
            p.push_back(triple(0xB6, 0xDB, 0x6D));
            p.push_back(triple(0xDB, 0x6D, 0xB6));
            for (int i = 0; i < 4; ++i) p.push_back(random_pass());
            return p;
        }
        case BenchMethod::seer:
            break;
    }
    throw Error(Errc::invalid_argument, "method has no overwrite passes");
}

void pwrite_all(int fd, const std::uint8_t* data, std::size_t n, off_t offset,
                const fs::path& path) {
    while (n > 0) {
        const ssize_t w = ::pwrite(fd, data, n, offset);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::io, errno_text("write", path));
        }
        data += w;
        n -= static_cast<std::size_t>(w);
        offset += w;
    }
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
        worker();
    }
    if (first_error) std::rethrow_exception(first_error);
}

void append_text(std::vector<std::uint8_t>& out, std::string_view s) {
    out.insert(out.end(), s.begin(), s.end());
}

std::vector<std::uint8_t> text_content(std::mt19937_64& rng, std::uint64_t size) {
    static constexpr std::array<std::string_view, 24> words = {
        "the",    "file",  "record", "erasure", "key",    "stream", "block",  "sector",
        "data",   "disk",  "index",  "entry",   "backup", "volume", "report", "invoice",
        "client", "order", "total",  "date",    "status", "note",   "copy",   "draft"};
    std::vector<std::uint8_t> out;
    out.reserve(size + 16);
    unsigned line_words = 0;
    while (out.size() < size) {
        const auto r = rng();
        append_text(out, words[r % words.size()]);
        if (++line_words >= 8 + (r >> 32) % 6) {
            out.push_back('.');
            out.push_back('\n');
            line_words = 0;
        } else {
            out.push_back(' ');
        }
    }
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> image_content(std::mt19937_64& rng, std::uint64_t size) {
    static constexpr std::array<std::uint8_t, 20> jfif = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10, 'J',
                                                          'F',  'I',  'F',  0x00, 0x01, 0x01, 0x00,
                                                          0x00, 0x01, 0x00, 0x01, 0x00, 0x00};
    std::vector<std::uint8_t> out(jfif.begin(), jfif.end());
    out.reserve(size);
    // Smooth gradient rows with a little noise, 256 pixels wide.
    std::uint64_t pixel = 0;
    const unsigned tint = static_cast<unsigned>(rng() & 0xFF);
    while (out.size() < size) {
        const std::uint64_t x = pixel % 256, y = pixel / 256;
        const auto noise = static_cast<unsigned>(rng() & 0x0F);
        out.push_back(static_cast<std::uint8_t>(x * 3 + y * 5 + tint + noise));
        ++pixel;
    }
    out.resize(size);
    if (size >= jfif.size() + 2) {
        out[size - 2] = 0xFF;
        out[size - 1] = 0xD9;
    }
    return out;
}

std::vector<std::uint8_t> binary_content(std::mt19937_64& rng, std::uint64_t size) {
    std::vector<std::uint8_t> out(0x80, 0x00);
    out[0] = 'M';
    out[1] = 'Z';
    out[2] = 0x90;
    out[0x3C] = 0x80;  // e_lfanew
    append_text(out, std::string_view("PE\0\0", 4));
    // Alternating code, zero padding and string-table sections.
    unsigned section = 0;
    while (out.size() < size) {
        const std::size_t len = 256 + rng() % 768;
        switch (section++ % 3) {
            case 0:
                for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<std::uint8_t>(rng()));
                break;
            case 1:
                out.insert(out.end(), len, 0x00);
                break;
            default:
                for (std::size_t i = 0; out.size() < size && i < len / 16; ++i) {
                    append_text(out, "sym_");
                    const auto id = std::to_string(rng() % 100000);
                    append_text(out, id);
                    out.push_back('\0');
                }
                break;
        }
    }
    out.resize(size);
    return out;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
}

std::string_view extension(ContentClass c) {
    switch (c) {
        case ContentClass::text: return ".txt";
        case ContentClass::image_like: return ".jpg";
        case ContentClass::binary: return ".exe";
    }
    return ".bin";
}

// Best effort: needs privileges most environments do not grant.
void drop_caches() {
    ::sync();
    std::ofstream ctl("/proc/sys/vm/drop_caches");
    if (ctl) ctl << "3\n";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(const std::string& field, std::size_t line) {
    T value{};
    const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
    if (r.ec != std::errc{} || r.ptr != field.data() + field.size()) {
        throw Error(Errc::invalid_argument,
                    "bad CSV number '" + field + "' on line " + std::to_string(line));
    }
    return value;
}

constexpr std::string_view csv_header =
    "method,content_class,file_count,file_size,repetition,total_seconds,mean_ms_per_file";

}  // namespace

std::string_view to_string(BenchMethod method) noexcept {
    switch (method) {
        case BenchMethod::seer: return "Seer";
        case BenchMethod::single_pass: return "SinglePass";
        case BenchMethod::dod3_pass: return "Dod3Pass";
        case BenchMethod::gutmann35: return "Gutmann35";
    }
    return "Unknown";
}

std::string_view to_string(ContentClass content) noexcept {
    switch (content) {
        case ContentClass::text: return "Text";
        case ContentClass::image_like: return "ImageLike";
        case ContentClass::binary: return "Binary";
    }
    return "Unknown";
}

BenchMethod parse_method(std::string_view name) {
    const std::string n = lower(name);
    if (n == "seer") return BenchMethod::seer;
    if (n == "single" || n == "singlepass") return BenchMethod::single_pass;
    if (n == "dod3" || n == "dod3pass" || n == "dod") return BenchMethod::dod3_pass;
    if (n == "gutmann" || n == "gutmann35") return BenchMethod::gutmann35;
    throw Error(Errc::invalid_argument, "unknown method '" + std::string(name) + "'");
}

ContentClass parse_content_class(std::string_view name) {
    const std::string n = lower(name);
    if (n == "text" || n == "txt") return ContentClass::text;
    if (n == "image" || n == "imagelike" || n == "jpg") return ContentClass::image_like;
    if (n == "binary" || n == "exe") return ContentClass::binary;
    throw Error(Errc::invalid_argument, "unknown content class '" + std::string(name) + "'");
}

void BenchSpec::validate() const {
    if (file_count < 1) throw Error(Errc::invalid_argument, "file count must be at least 1");
    if (file_size < 1) throw Error(Errc::invalid_argument, "file size must be at least 1");
    if (threads < 1) throw Error(Errc::invalid_argument, "threads must be at least 1");
    if (repetitions < 1) throw Error(Errc::invalid_argument, "repetitions must be at least 1");
}

std::vector<std::uint8_t> corpus_file_content(ContentClass content, std::uint64_t seed,
                                              std::uint64_t index, std::uint64_t size) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(content)};
    std::mt19937_64 rng(seq);
    switch (content) {
        case ContentClass::text: return text_content(rng, size);
        case ContentClass::image_like: return image_content(rng, size);
        case ContentClass::binary: return binary_content(rng, size);
    }
    return {};
}

std::vector<fs::path> make_corpus(const BenchSpec& spec, const fs::path& dir) {
    spec.validate();
    fs::create_directories(dir);

    struct statvfs st{};
    if (::statvfs(dir.c_str(), &st) != 0) throw Error(Errc::io, errno_text("statvfs", dir));
    const std::uint64_t block = std::max<std::uint64_t>(st.f_frsize, 4096);
    const std::uint64_t per_file =
        (spec.file_size + ErasureFooter::size + block - 1) / block * block;
    const std::uint64_t needed = spec.file_count * per_file;
    const std::uint64_t available = static_cast<std::uint64_t>(st.f_bavail) * st.f_frsize;
    if (needed > available) {
        throw Error(Errc::io, "corpus needs " + std::to_string(needed) + " octets, only " +
                                  std::to_string(available) + " available in " + dir.string());
    }

    std::vector<fs::path> paths(spec.file_count);
    char name[32];
    for (std::uint64_t i = 0; i < spec.file_count; ++i) {
        std::snprintf(name, sizeof name, "f%06llu", static_cast<unsigned long long>(i));
        paths[i] = dir / (name + std::string(extension(spec.content_class)));
    }
    parallel_for(paths.size(), spec.threads, [&](std::size_t i) {
        write_file(paths[i], corpus_file_content(spec.content_class, spec.seed, i, spec.file_size));
    });
    return paths;
}

OverwriteCount overwrite_file(const fs::path& path, BenchMethod method, EntropySource& entropy,
                              bool fsync) {
    const std::vector<Pass> passes = passes_for(method);
    const int fd = ::open(path.c_str(), O_WRONLY | O_CLOEXEC | O_NOFOLLOW);
    if (fd < 0) throw Error(Errc::io, errno_text("open", path));
    struct Closer {
        int fd;
        ~Closer() { ::close(fd); }
    } closer{fd};

    struct stat st{};
    if (::fstat(fd, &st) != 0) throw Error(Errc::io, errno_text("stat", path));
    const auto length = static_cast<std::uint64_t>(st.st_size);

    auto key_bytes = entropy.bytes<32>();
    auto iv_bytes = entropy.bytes<16>();
    CipherKey key = CipherKey::from_bytes(key_bytes);
    secure_zero(key_bytes);
    Sosemanuk stream(key, CipherIV::from_bytes(iv_bytes));
    key.destroy();

    OverwriteCount count;
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(std::min<std::uint64_t>(io_chunk, length)));
    for (const Pass& pass : passes) {
        for (std::uint64_t offset = 0; offset < length; offset += buf.size()) {
            const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), length - offset));
            auto chunk = std::span(buf).first(n);
            if (pass.length == 0) {
                stream.keystream(chunk);
            } else {
                for (std::size_t i = 0; i < n; ++i) chunk[i] = pass.pattern[(offset + i) % pass.length];
            }
            pwrite_all(fd, chunk.data(), n, static_cast<off_t>(offset), path);
            count.bytes_written += n;
        }
        if (fsync && ::fdatasync(fd) != 0) throw Error(Errc::io, errno_text("fdatasync", path));
        ++count.passes;
    }
    secure_zero(buf);
    return count;
}

BenchResult run_bench(const BenchSpec& spec, const fs::path& workdir) {
    spec.validate();
    BenchResult result;
    result.spec = spec;
    result.payload_bytes = spec.file_count * spec.file_size;

    EntropySource entropy = EntropySource::system();
    const fs::path corpus = workdir / "corpus";
    std::vector<double> per_file_ms;

    for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
        fs::remove_all(corpus);
        const auto paths = make_corpus(spec, corpus);
        drop_caches();

        std::atomic<std::uint64_t> written{0}, payload{0};
        std::string failure;
        const auto start = std::chrono::steady_clock::now();
        if (spec.method == BenchMethod::seer) {
            ErasureConfig config;
            config.threads = spec.threads;
            config.fsync = spec.fsync;
            for (const auto& r : destroy_tree(corpus, config, entropy)) {
                written += r.bytes_written;
                payload += r.bytes_processed;
                if (r.status != ErasureStatus::destroyed && failure.empty()) {
                    failure = r.path.string() + ": " + r.error.value_or("not destroyed");
                }
            }
        } else {
            try {
                parallel_for(paths.size(), spec.threads, [&](std::size_t i) {
                    const OverwriteCount c = overwrite_file(paths[i], spec.method, entropy, spec.fsync);
                    written += c.bytes_written;
                    payload += c.bytes_written;
                });
            } catch (const std::exception& e) {
                failure = e.what();
            }
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (!failure.empty()) {
            result.valid = false;
            result.error = failure;
        }
        result.bytes_written = written;
        result.payload_passes_written = payload;
        result.repetition_seconds.push_back(seconds);
        per_file_ms.push_back(seconds * 1000.0 / static_cast<double>(spec.file_count));
    }
    fs::remove_all(corpus);

    result.total_seconds = median(result.repetition_seconds);
    result.mean_ms_per_file = result.total_seconds * 1000.0 / static_cast<double>(spec.file_count);
    if (per_file_ms.size() > 1) {
        double mean = 0.0;
        for (double v : per_file_ms) mean += v;
        mean /= static_cast<double>(per_file_ms.size());
        double var = 0.0;
        for (double v : per_file_ms) var += (v - mean) * (v - mean);
        result.stddev_ms = std::sqrt(var / static_cast<double>(per_file_ms.size() - 1));
    }
    return result;
}

std::vector<CsvRow> to_csv_rows(std::span<const BenchResult> results) {
    std::vector<CsvRow> rows;
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.repetition_seconds.size(); ++i) {
            CsvRow row;
            row.method = std::string(to_string(r.spec.method));
            row.content_class = std::string(to_string(r.spec.content_class));
            row.file_count = r.spec.file_count;
            row.file_size = r.spec.file_size;
            row.repetition = static_cast<unsigned>(i + 1);
            row.total_seconds = r.repetition_seconds[i];
            row.mean_ms_per_file = r.repetition_seconds[i] * 1000.0 / static_cast<double>(r.spec.file_count);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string render_csv(std::span<const BenchResult> results) {
    std::string out(csv_header);
    out += '\n';
    for (const auto& row : to_csv_rows(results)) {
        out += row.method + ',' + row.content_class + ',' + std::to_string(row.file_count) + ',' +
               std::to_string(row.file_size) + ',' + std::to_string(row.repetition) + ',' +
               format_double(row.total_seconds) + ',' + format_double(row.mean_ms_per_file) + '\n';
    }
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != csv_header) throw Error(Errc::invalid_argument, "unexpected CSV header");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 7) {
            throw Error(Errc::invalid_argument, "expected 7 CSV fields on line " + std::to_string(number));
        }
        CsvRow row;
        row.method = f[0];
        row.content_class = f[1];
        row.file_count = parse_number<std::uint64_t>(f[2], number);
        row.file_size = parse_number<std::uint64_t>(f[3], number);
        row.repetition = parse_number<unsigned>(f[4], number);
        row.total_seconds = parse_number<double>(f[5], number);
        row.mean_ms_per_file = parse_number<double>(f[6], number);
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw Error(Errc::invalid_argument, "empty CSV document");
    return rows;
}

std::string render_table(std::span<const BenchResult> results) {
    if (results.empty()) throw Error(Errc::invalid_argument, "no results to render");

    using Column = std::pair<std::uint64_t, std::uint64_t>;  // (size, count)
    using RowKey = std::pair<std::string, std::string>;
    std::set<Column> columns;
    std::vector<RowKey> row_order;
    std::map<RowKey, std::map<Column, std::string>> cells;
    for (const auto& r : results) {
        const Column col{r.spec.file_size, r.spec.file_count};
        const RowKey key{std::string(to_string(r.spec.method)), std::string(to_string(r.spec.content_class))};
        columns.insert(col);
        if (!cells.contains(key)) row_order.push_back(key);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f%s", r.total_seconds, r.valid ? "" : "!");
        cells[key][col] = buf;
    }

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header = {"Method", "Class"};
    for (const auto& [size, count] : columns) {
        header.push_back(std::to_string(count) + " x " + std::to_string(size) + " B (s)");
    }
    grid.push_back(header);
    for (const auto& key : row_order) {
        std::vector<std::string> line = {key.first, key.second};
        for (const auto& col : columns) {
            auto it = cells[key].find(col);
            line.push_back(it == cells[key].end() ? "-" : it->second);
        }
        grid.push_back(line);
    }

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    std::string out;
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const std::string& cell = line[i];
            const std::string pad(width[i] - cell.size(), ' ');
            if (i > 0) out += "  ";
            out += i < 2 ? cell + pad : pad + cell;
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

}  // namespace seer
