#pragma once

#include <array>
#include <cstdint>

#include "seer/sosemanuk.hpp"
#include "seer/x25519.hpp"

namespace seer {

/// Per-file public salt mixed into the cipher-key derivation.
using Salt = std::array<std::uint8_t, 32>;

/// cipher key = SHA-256(shared || salt), 32 octets. Inputs are left intact.
/// Throws Error(lifecycle) if `shared` has already been destroyed.
CipherKey derive_cipher_key(const SharedSecret& shared, const Salt& salt);

}  // namespace seer
