#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace seer {

using Digest32 = std::array<std::uint8_t, 32>;

/// Incremental FIPS 180-4 SHA-256. The internal state is wiped on finish()
/// and on destruction.
class Sha256 {
public:
    Sha256() noexcept { reset(); }
    ~Sha256();

    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void reset() noexcept;
    void update(std::span<const std::uint8_t> data) noexcept;
    Digest32 finish() noexcept;

private:
    void compress(const std::uint8_t* block) noexcept;

    std::array<std::uint32_t, 8> state_{};
    std::array<std::uint8_t, 64> block_{};
    std::size_t block_len_ = 0;
    std::uint64_t total_len_ = 0;
};

Digest32 sha256(std::span<const std::uint8_t> data) noexcept;
Digest32 sha256(std::string_view text) noexcept;

}  // namespace seer
