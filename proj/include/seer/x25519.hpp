#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "seer/secure_memory.hpp"

namespace seer {

using PublicPoint = std::array<std::uint8_t, 32>;

/// Clamped Curve25519 private scalar.
class PrivateScalar {
public:
    /// Copies `raw` and applies the three clamping bit operations.
    /// Throws Error(invalid_length) unless `raw` is 32 octets.
    static PrivateScalar clamp(std::span<const std::uint8_t> raw);

    PrivateScalar(PrivateScalar&&) noexcept = default;
    PrivateScalar& operator=(PrivateScalar&&) noexcept = default;

    std::span<const std::uint8_t, 32> bytes() const noexcept { return bytes_.view(); }
    bool usable() const noexcept { return usable_; }

    void destroy() noexcept {
        bytes_.wipe();
        usable_ = false;
    }
    bool is_zero() const noexcept { return bytes_.is_zero(); }

private:
    PrivateScalar() = default;

    SecretBytes<32> bytes_;
    bool usable_ = false;
};

class SharedSecret {
public:
    explicit SharedSecret(std::span<const std::uint8_t, 32> bytes) noexcept : bytes_(bytes) {}

    SharedSecret(SharedSecret&&) noexcept = default;
    SharedSecret& operator=(SharedSecret&&) noexcept = default;

    std::span<const std::uint8_t, 32> bytes() const noexcept { return bytes_.view(); }
    bool live() const noexcept { return live_; }

    void destroy() noexcept {
        bytes_.wipe();
        live_ = false;
    }
    bool is_zero() const noexcept { return bytes_.is_zero(); }

private:
    SecretBytes<32> bytes_;
    bool live_ = true;
};

inline constexpr PublicPoint base_point{9};

/// X25519 function (RFC 7748): Montgomery ladder over GF(2^255 - 19).
/// The ladder runs a fixed number of iterations with constant-time swaps.
/// Throws Error(degenerate_result) when the output is all-zero (low-order
/// input point) and Error(lifecycle) when `k` has been destroyed.
PublicPoint scalar_mult(const PrivateScalar& k, const PublicPoint& u);

PublicPoint base_point_mult(const PrivateScalar& k);

/// scalar_mult packaged as a secret, used for sm_key.
SharedSecret shared_secret(const PrivateScalar& k, const PublicPoint& peer);

}  // namespace seer
