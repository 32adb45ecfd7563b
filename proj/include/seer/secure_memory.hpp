#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace seer {

/// Overwrites `buf` with zeros through a volatile pointer followed by a
/// compiler barrier, so the stores survive dead-store elimination even when
/// the buffer is never read again.
inline void secure_zero(std::span<std::uint8_t> buf) noexcept {
    volatile std::uint8_t* p = buf.data();
    for (std::size_t i = 0; i < buf.size(); ++i) p[i] = 0;
    asm volatile("" : : "r"(buf.data()) : "memory");
}

inline void secure_zero_words(std::span<std::uint32_t> words) noexcept {
    volatile std::uint32_t* p = words.data();
    for (std::size_t i = 0; i < words.size(); ++i) p[i] = 0;
    asm volatile("" : : "r"(words.data()) : "memory");
}

inline bool is_all_zero(std::span<const std::uint8_t> buf) noexcept {
    const volatile std::uint8_t* p = buf.data();
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < buf.size(); ++i) acc |= p[i];
    return acc == 0;
}

/// Fixed-size secret octet buffer. Move-only; the source of a move and the
/// buffer itself on destruction are zeroized.
template <std::size_t N>
class SecretBytes {
public:
    SecretBytes() = default;
    explicit SecretBytes(std::span<const std::uint8_t, N> src) noexcept {
        for (std::size_t i = 0; i < N; ++i) bytes_[i] = src[i];
    }
    SecretBytes(const SecretBytes&) = delete;
    SecretBytes& operator=(const SecretBytes&) = delete;
    SecretBytes(SecretBytes&& other) noexcept : bytes_(other.bytes_) { other.wipe(); }
    SecretBytes& operator=(SecretBytes&& other) noexcept {
        if (this != &other) {
            bytes_ = other.bytes_;
            other.wipe();
        }
        return *this;
    }
    ~SecretBytes() { wipe(); }

    std::span<const std::uint8_t, N> view() const noexcept { return bytes_; }
    std::span<std::uint8_t, N> mutable_view() noexcept { return bytes_; }
    void wipe() noexcept { secure_zero(bytes_); }
    bool is_zero() const noexcept { return is_all_zero(bytes_); }

    static constexpr std::size_t size() noexcept { return N; }

private:
    std::array<std::uint8_t, N> bytes_{};
};

}  // namespace seer
