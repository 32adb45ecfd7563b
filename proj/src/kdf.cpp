#include "seer/kdf.hpp"

#include "seer/error.hpp"
#include "seer/sha256.hpp"

namespace seer {

CipherKey derive_cipher_key(const SharedSecret& shared, const Salt& salt) {
    if (!shared.live()) throw Error(Errc::lifecycle, "shared secret has already been destroyed");
    Sha256 h;
    h.update(shared.bytes());
    h.update(salt);
    Digest32 digest = h.finish();
    CipherKey key = CipherKey::from_bytes(digest);
    secure_zero(digest);
    return key;
}

}  // namespace seer
