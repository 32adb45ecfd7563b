#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "seer/kdf.hpp"
#include "seer/sosemanuk.hpp"
#include "seer/x25519.hpp"

namespace seer {

/// Trailer appended to every destroyed file. Little-endian layout:
///
///   offset  size  field
///        0     8  magic "SEERDSTR"
///        8     2  version (1)
///       10     2  flags (bit0: full-file encryption; others reserved, 0)
///       12     8  original_length
///       20    32  salt
///       52    16  iv
///       68    32  u_publ
///      100     4  crc32 (IEEE) over octets 0..99
struct ErasureFooter {
    static constexpr std::size_t size = 104;
    static constexpr std::array<std::uint8_t, 8> magic = {'S', 'E', 'E', 'R', 'D', 'S', 'T', 'R'};
    static constexpr std::uint16_t current_version = 1;
    static constexpr std::uint16_t flag_full_file = 0x0001;

    std::uint16_t version = current_version;
    std::uint16_t flags = flag_full_file;
    std::uint64_t original_length = 0;
    Salt salt{};
    std::array<std::uint8_t, CipherIV::size> iv{};
    PublicPoint u_publ{};

    std::array<std::uint8_t, size> serialize() const;

    /// Parses exactly `size` octets. Throws Error(not_seer_file) on a magic
    /// mismatch and Error(corrupt_footer) on a CRC mismatch, an unknown
    /// version or reserved flag bits.
    static ErasureFooter parse(std::span<const std::uint8_t> bytes);

    friend bool operator==(const ErasureFooter&, const ErasureFooter&) = default;
};

/// Reads and validates the trailing footer of `path`; also checks that the
/// file length equals original_length + footer size.
ErasureFooter read_footer(const std::filesystem::path& path);

}  // namespace seer
