#include "seer/footer.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "seer/error.hpp"

namespace seer {

namespace {

template <typename T>
void put_le(std::uint8_t* p, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

template <typename T>
T get_le(const std::uint8_t* p) {
    T v = 0;
    for (std::size_t i = sizeof(T); i-- > 0;) v = static_cast<T>((v << 8) | p[i]);
    return v;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(::crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

constexpr std::size_t crc_offset = ErasureFooter::size - 4;

}  // namespace

std::array<std::uint8_t, ErasureFooter::size> ErasureFooter::serialize() const {
    std::array<std::uint8_t, size> out{};
    std::copy(magic.begin(), magic.end(), out.begin());
    put_le(&out[8], version);
    put_le(&out[10], flags);
    put_le(&out[12], original_length);
    std::copy(salt.begin(), salt.end(), out.begin() + 20);
    std::copy(iv.begin(), iv.end(), out.begin() + 52);
    std::copy(u_publ.begin(), u_publ.end(), out.begin() + 68);
    put_le(&out[crc_offset], crc32_of(std::span(out).first(crc_offset)));
    return out;
}

ErasureFooter ErasureFooter::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != size) {
        throw Error(Errc::not_seer_file, "footer must be " + std::to_string(size) + " octets");
    }
    if (!std::equal(magic.begin(), magic.end(), bytes.begin())) {
        throw Error(Errc::not_seer_file, "footer magic not found");
    }
    const auto stored_crc = get_le<std::uint32_t>(&bytes[crc_offset]);
    if (stored_crc != crc32_of(bytes.first(crc_offset))) {
        throw Error(Errc::corrupt_footer, "footer CRC mismatch");
    }

    ErasureFooter f;
    f.version = get_le<std::uint16_t>(&bytes[8]);
    f.flags = get_le<std::uint16_t>(&bytes[10]);
    if (f.version != current_version) {
        throw Error(Errc::corrupt_footer, "unsupported footer version " + std::to_string(f.version));
    }
    if ((f.flags & ~flag_full_file) != 0) {
        throw Error(Errc::corrupt_footer, "reserved footer flag bits set");
    }
    f.original_length = get_le<std::uint64_t>(&bytes[12]);
    std::copy_n(bytes.begin() + 20, f.salt.size(), f.salt.begin());
    std::copy_n(bytes.begin() + 52, f.iv.size(), f.iv.begin());
    std::copy_n(bytes.begin() + 68, f.u_publ.size(), f.u_publ.begin());
    return f;
}

ErasureFooter read_footer(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const auto length = static_cast<std::uint64_t>(in.tellg());
    if (length < ErasureFooter::size) {
        throw Error(Errc::not_seer_file, path.string() + " is shorter than a footer");
    }

    // Read a window larger than the footer so a truncated or displaced
    // footer can be told apart from a file that never had one.
    const std::uint64_t window = std::min<std::uint64_t>(length, 2 * ErasureFooter::size);
    std::vector<std::uint8_t> tail(window);
    in.seekg(static_cast<std::streamoff>(length - window));
    in.read(reinterpret_cast<char*>(tail.data()), static_cast<std::streamsize>(window));
    if (!in) throw Error(Errc::io, "cannot read " + path.string());

    const auto footer_bytes = std::span(tail).last(ErasureFooter::size);
    if (!std::equal(ErasureFooter::magic.begin(), ErasureFooter::magic.end(), footer_bytes.begin())) {
        auto it = std::search(tail.begin(), tail.end(), ErasureFooter::magic.begin(),
                              ErasureFooter::magic.end());
        if (it != tail.end()) {
            throw Error(Errc::corrupt_footer, path.string() + ": footer truncated or displaced");
        }
        throw Error(Errc::not_seer_file, path.string() + ": no erasure footer");
    }

    ErasureFooter f = ErasureFooter::parse(footer_bytes);
    if (f.original_length + ErasureFooter::size != length) {
        throw Error(Errc::corrupt_footer, path.string() + ": length does not match footer");
    }
    return f;
}

}  // namespace seer
