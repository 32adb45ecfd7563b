#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seer/entropy.hpp"
#include "seer/kdf.hpp"
#include "seer/sosemanuk.hpp"
#include "seer/x25519.hpp"

namespace seer {

enum class SessionState { generated, derived, destroyed };

std::string_view to_string(SessionState state) noexcept;

struct DestructionProof {
    std::vector<std::string> fields_cleared;
    bool verified = false;
};

/// Copy of the raw secret buffers, for zeroization tests only.
struct SessionSnapshot {
    std::array<std::uint8_t, 32> u_priv{};
    std::array<std::uint8_t, 32> m_priv{};
    std::array<std::uint8_t, 32> sm_key{};
    std::vector<std::uint8_t> cipher_key;
    PublicPoint u_publ{};
    PublicPoint m_publ{};
};

/// Ephemeral key hierarchy for one file.
///
///   u_priv, m_priv   clamped random scalars
///   u_publ, m_publ   their base-point multiples
///   sm_key           X25519(u_priv, m_publ)
///   cipher_key       SHA-256(sm_key || salt)
///
/// The state only advances generated -> derived -> destroyed. Only the
/// public points leave the object; the cipher key is reachable solely
/// through open_cipher(). Destruction zeroizes u_priv, m_priv, sm_key and
/// cipher_key and is also performed by the destructor.
class SessionKeys {
public:
    /// Throws Error(entropy) with no session created, or
    /// Error(degenerate_result) for an all-zero shared secret.
    static SessionKeys generate(EntropySource& entropy);

    SessionKeys(const SessionKeys&) = delete;
    SessionKeys& operator=(const SessionKeys&) = delete;
    SessionKeys(SessionKeys&&) = delete;
    SessionKeys& operator=(SessionKeys&&) = delete;
    ~SessionKeys();

    /// generated -> derived. Throws Error(lifecycle) in any other state.
    void derive(const Salt& salt);

    /// Keyed cipher state. Throws Error(lifecycle) unless derived.
    Sosemanuk open_cipher(const CipherIV& iv) const;

    /// Zeroizes every secret buffer and verifies by re-reading it.
    /// Idempotent and infallible.
    DestructionProof destroy() noexcept;

    SessionState state() const noexcept { return state_; }
    const PublicPoint& u_publ() const noexcept { return u_publ_; }
    const PublicPoint& m_publ() const noexcept { return m_publ_; }

    SessionSnapshot snapshot(UnsafeTestMode) const;

    /// Sessions created and not yet destroyed, process-wide.
    static long live_count() noexcept;

private:
    SessionKeys(PrivateScalar u_priv, PrivateScalar m_priv, const PublicPoint& u_publ,
                const PublicPoint& m_publ, SharedSecret sm_key) noexcept;

    PrivateScalar u_priv_;
    PrivateScalar m_priv_;
    PublicPoint u_publ_;
    PublicPoint m_publ_;
    SharedSecret sm_key_;
    std::optional<CipherKey> cipher_key_;
    SessionState state_ = SessionState::generated;
};

}  // namespace seer
