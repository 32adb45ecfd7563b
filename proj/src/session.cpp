#include "seer/session.hpp"

#include <atomic>

#include "seer/error.hpp"

namespace seer {

namespace {

std::atomic<long> live_sessions{0};

PrivateScalar random_scalar(EntropySource& entropy) {
    SecretBytes<32> raw;
    entropy.fill(raw.mutable_view());
    return PrivateScalar::clamp(raw.view());
}

template <std::size_t N>
std::array<std::uint8_t, N> copy_of(std::span<const std::uint8_t, N> s) {
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = s[i];
    return out;
}

}  // namespace

std::string_view to_string(SessionState state) noexcept {
    switch (state) {
        case SessionState::generated: return "generated";
        case SessionState::derived: return "derived";
        case SessionState::destroyed: return "destroyed";
    }
    return "unknown";
}

SessionKeys SessionKeys::generate(EntropySource& entropy) {
    PrivateScalar u_priv = random_scalar(entropy);
    PrivateScalar m_priv = random_scalar(entropy);
    const PublicPoint u_publ = base_point_mult(u_priv);
    const PublicPoint m_publ = base_point_mult(m_priv);
    SharedSecret sm_key = shared_secret(u_priv, m_publ);
    return SessionKeys(std::move(u_priv), std::move(m_priv), u_publ, m_publ, std::move(sm_key));
}

SessionKeys::SessionKeys(PrivateScalar u_priv, PrivateScalar m_priv, const PublicPoint& u_publ,
                         const PublicPoint& m_publ, SharedSecret sm_key) noexcept
    : u_priv_(std::move(u_priv)),
      m_priv_(std::move(m_priv)),
      u_publ_(u_publ),
      m_publ_(m_publ),
      sm_key_(std::move(sm_key)) {
    live_sessions.fetch_add(1, std::memory_order_relaxed);
}

SessionKeys::~SessionKeys() { destroy(); }

void SessionKeys::derive(const Salt& salt) {
    if (state_ != SessionState::generated) {
        throw Error(Errc::lifecycle,
                    "derive requires a generated session, state is " + std::string(to_string(state_)));
    }
    cipher_key_.emplace(derive_cipher_key(sm_key_, salt));
    state_ = SessionState::derived;
}

Sosemanuk SessionKeys::open_cipher(const CipherIV& iv) const {
    if (state_ != SessionState::derived || !cipher_key_) {
        throw Error(Errc::lifecycle,
                    "cipher key unavailable, session state is " + std::string(to_string(state_)));
    }
    return Sosemanuk(*cipher_key_, iv);
}

DestructionProof SessionKeys::destroy() noexcept {
    DestructionProof proof;
    proof.fields_cleared = {"u_priv", "m_priv", "sm_key", "cipher_key"};
    if (state_ != SessionState::destroyed) {
        u_priv_.destroy();
        m_priv_.destroy();
        sm_key_.destroy();
        if (cipher_key_) cipher_key_->destroy();
        state_ = SessionState::destroyed;
        live_sessions.fetch_sub(1, std::memory_order_relaxed);
    }
    proof.verified = u_priv_.is_zero() && m_priv_.is_zero() && sm_key_.is_zero() &&
                     (!cipher_key_ || cipher_key_->is_zero());
    return proof;
}

SessionSnapshot SessionKeys::snapshot(UnsafeTestMode) const {
    SessionSnapshot s;
    s.u_priv = copy_of(u_priv_.bytes());
    s.m_priv = copy_of(m_priv_.bytes());
    s.sm_key = copy_of(sm_key_.bytes());
    if (cipher_key_) {
        auto k = cipher_key_->bytes();
        s.cipher_key.assign(k.begin(), k.end());
    }
    s.u_publ = u_publ_;
    s.m_publ = m_publ_;
    return s;
}

long SessionKeys::live_count() noexcept { return live_sessions.load(std::memory_order_relaxed); }

}  // namespace seer
