#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>

namespace seer {

/// Tag that must be passed to anything that weakens production guarantees
/// (deterministic entropy, raw key inspection).
struct UnsafeTestMode {
    explicit UnsafeTestMode() = default;
};
inline constexpr UnsafeTestMode unsafe_test_mode{};

/// Two-source entropy cascade.
///
/// Every 32-octet output block is SHA-256(primary || secondary || counter),
/// where `primary` is drawn from the OS CSPRNG and `secondary` from an
/// independently seeded software generator. A source reporting failure
/// makes fill() throw Error(entropy); there is no fallback to weaker
/// randomness. fill() is serialized internally so one source can be shared
/// by worker threads.
class EntropySource {
public:
    /// Writes exactly out.size() octets or returns false.
    using Source = std::function<bool(std::span<std::uint8_t> out)>;

    /// OS CSPRNG (getrandom) cascaded with a hash DRBG seeded from the
    /// hardware generator where the platform exposes one.
    static EntropySource system();

    /// Reproducible stream for golden-file tests. Never use in production.
    static EntropySource deterministic(UnsafeTestMode, std::uint64_t seed);

    EntropySource(Source primary, Source secondary);

    EntropySource(const EntropySource&) = delete;
    EntropySource& operator=(const EntropySource&) = delete;
    EntropySource(EntropySource&& other) noexcept;

    void fill(std::span<std::uint8_t> out);

    template <std::size_t N>
    std::array<std::uint8_t, N> bytes() {
        std::array<std::uint8_t, N> out{};
        fill(out);
        return out;
    }

private:
    std::mutex mutex_;
    Source primary_;
    Source secondary_;
    std::uint64_t counter_ = 0;
};

/// Hash-DRBG: block i = SHA-256(seed || i). Exposed for tests.
class HashDrbg {
public:
    explicit HashDrbg(std::span<const std::uint8_t, 32> seed) noexcept;
    ~HashDrbg();
    HashDrbg(const HashDrbg&) = delete;
    HashDrbg& operator=(const HashDrbg&) = delete;
    HashDrbg(HashDrbg&& other) noexcept;

    void generate(std::span<std::uint8_t> out) noexcept;

private:
    std::array<std::uint8_t, 32> seed_{};
    std::uint64_t counter_ = 0;
};

}  // namespace seer
