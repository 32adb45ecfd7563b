#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seer/secure_memory.hpp"

namespace seer {

/// Sosemanuk key: 16 to 32 octets.
class CipherKey {
public:
    static constexpr std::size_t min_size = 16;
    static constexpr std::size_t max_size = 32;

    /// Throws Error(invalid_length) naming the offending length.
    static CipherKey from_bytes(std::span<const std::uint8_t> bytes);

    CipherKey(CipherKey&&) noexcept = default;
    CipherKey& operator=(CipherKey&&) noexcept = default;

    std::span<const std::uint8_t> bytes() const noexcept {
        return storage_.view().first(size_);
    }
    std::size_t size() const noexcept { return size_; }

    void destroy() noexcept { storage_.wipe(); }
    bool is_zero() const noexcept { return storage_.is_zero(); }

private:
    CipherKey() = default;

    SecretBytes<max_size> storage_;
    std::size_t size_ = 0;
};

class CipherIV {
public:
    static constexpr std::size_t size = 16;

    CipherIV() = default;
    explicit CipherIV(const std::array<std::uint8_t, size>& bytes) : bytes_(bytes) {}

    /// Throws Error(invalid_length) unless exactly 16 octets.
    static CipherIV from_bytes(std::span<const std::uint8_t> bytes);

    const std::array<std::uint8_t, size>& bytes() const noexcept { return bytes_; }

    friend bool operator==(const CipherIV&, const CipherIV&) = default;

private:
    std::array<std::uint8_t, size> bytes_{};
};

/// Sosemanuk keystream generator and XOR transform.
///
/// The state holds the ten-word LFSR, the two FSM registers and one
/// 80-octet keystream burst. Output is exposed as an arbitrary-length octet
/// stream: any read schedule yields the same bytes. A state is single-owner
/// and wiped on destruction.
class Sosemanuk {
public:
    static constexpr std::size_t burst_size = 80;

    Sosemanuk(const CipherKey& key, const CipherIV& iv);
    ~Sosemanuk() { wipe(); }

    Sosemanuk(const Sosemanuk&) = delete;
    Sosemanuk& operator=(const Sosemanuk&) = delete;
    Sosemanuk(Sosemanuk&& other) noexcept;
    Sosemanuk& operator=(Sosemanuk&& other) noexcept;

    void keystream(std::span<std::uint8_t> out) noexcept;
    std::vector<std::uint8_t> keystream(std::size_t n);

    /// data[i] ^= next keystream octet.
    void apply(std::span<std::uint8_t> data) noexcept;
    std::vector<std::uint8_t> xor_transform(std::span<const std::uint8_t> data);

    void wipe() noexcept;

private:
    void next_burst() noexcept;

    std::array<std::uint32_t, 10> lfsr_{};
    std::uint32_t fsm_r1_ = 0;
    std::uint32_t fsm_r2_ = 0;
    std::array<std::uint8_t, burst_size> burst_{};
    std::size_t burst_pos_ = burst_size;
};

namespace detail {

// Exposed for unit tests of the bitsliced Serpent circuits.
struct Quad {
    std::uint32_t w0, w1, w2, w3;
    friend bool operator==(const Quad&, const Quad&) = default;
};
Quad serpent_sbox(unsigned index, Quad in) noexcept;
Quad serpent_linear(Quad in) noexcept;

std::uint32_t mul_alpha(std::uint32_t x) noexcept;
std::uint32_t div_alpha(std::uint32_t x) noexcept;

}  // namespace detail

}  // namespace seer
