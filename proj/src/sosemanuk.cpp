#include "seer/sosemanuk.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "seer/error.hpp"

namespace seer {

namespace {

using std::uint32_t;
using detail::Quad;

// Bitsliced Serpent S-boxes (Osvik's circuits over four registers plus one
// scratch register). Each returns its four outputs in natural bit order.

inline Quad sbox0(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r3 ^= r0; r4 = r1;
    r1 &= r3; r4 ^= r2;
    r1 ^= r0; r0 |= r3;
    r0 ^= r4; r4 ^= r3;
    r3 ^= r2; r2 |= r1;
    r2 ^= r4; r4 = ~r4;
    r4 |= r1; r1 ^= r3;
    r1 ^= r4; r3 |= r0;
    r1 ^= r3; r4 ^= r3;
    return {r1, r4, r2, r0};
}

inline Quad sbox1(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r0 = ~r0; r2 = ~r2;
    r4 = r0; r0 &= r1;
    r2 ^= r0; r0 |= r3;
    r3 ^= r2; r1 ^= r0;
    r0 ^= r4; r4 |= r1;
    r1 ^= r3; r2 |= r0;
    r2 &= r4; r0 ^= r1;
    r1 &= r2;
    r1 ^= r0; r0 &= r2;
    r0 ^= r4;
    return {r2, r0, r3, r1};
}

inline Quad sbox2(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r4 = r0; r0 &= r2;
    r0 ^= r3; r2 ^= r1;
    r2 ^= r0; r3 |= r4;
    r3 ^= r1; r4 ^= r2;
    r1 = r3; r3 |= r4;
    r3 ^= r0; r0 &= r1;
    r4 ^= r0; r1 ^= r3;
    r1 ^= r4; r4 = ~r4;
    return {r2, r3, r1, r4};
}

inline Quad sbox3(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r4 = r0; r0 |= r3;
    r3 ^= r1; r1 &= r4;
    r4 ^= r2; r2 ^= r3;
    r3 &= r0; r4 |= r1;
    r3 ^= r4; r0 ^= r1;
    r4 &= r0; r1 ^= r3;
    r4 ^= r2; r1 |= r0;
    r1 ^= r2; r0 ^= r3;
    r2 = r1; r1 |= r3;
    r1 ^= r0;
    return {r1, r2, r3, r4};
}

inline Quad sbox4(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r1 ^= r3; r3 = ~r3;
    r2 ^= r3; r3 ^= r0;
    r4 = r1; r1 &= r3;
    r1 ^= r2; r4 ^= r3;
    r0 ^= r4; r2 &= r4;
    r2 ^= r0; r0 &= r1;
    r3 ^= r0; r4 |= r1;
    r4 ^= r0; r0 |= r3;
    r0 ^= r2; r2 &= r3;
    r0 = ~r0; r4 ^= r2;
    return {r1, r4, r0, r3};
}

inline Quad sbox5(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r0 ^= r1; r1 ^= r3;
    r3 = ~r3; r4 = r1;
    r1 &= r0; r2 ^= r3;
    r1 ^= r2; r2 |= r4;
    r4 ^= r3; r3 &= r1;
    r3 ^= r0; r4 ^= r1;
    r4 ^= r2; r2 ^= r0;
    r0 &= r3; r2 = ~r2;
    r0 ^= r4; r4 |= r3;
    r2 ^= r4;
    return {r1, r3, r0, r2};
}

inline Quad sbox6(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r2 = ~r2; r4 = r3;
    r3 &= r0; r0 ^= r4;
    r3 ^= r2; r2 |= r4;
    r1 ^= r3; r2 ^= r0;
    r0 |= r1; r2 ^= r1;
    r4 ^= r0; r0 |= r3;
    r0 ^= r2; r4 ^= r3;
    r4 ^= r0; r3 = ~r3;
    r2 &= r4;
    r2 ^= r3;
    return {r0, r1, r4, r2};
}

inline Quad sbox7(Quad q) noexcept {
    uint32_t r0 = q.w0, r1 = q.w1, r2 = q.w2, r3 = q.w3, r4;
    r4 = r1; r1 |= r2;
    r1 ^= r3; r4 ^= r2;
    r2 ^= r1; r3 |= r4;
    r3 &= r0; r4 ^= r2;
    r3 ^= r1; r1 |= r4;
    r1 ^= r0; r0 |= r4;
    r0 ^= r2; r1 ^= r4;
    r2 ^= r1; r1 &= r0;
    r1 ^= r4; r2 = ~r2;
    r2 |= r0;
    r4 ^= r2;
    return {r4, r3, r1, r0};
}

inline Quad linear(Quad q) noexcept {
    uint32_t x0 = std::rotl(q.w0, 13);
    uint32_t x2 = std::rotl(q.w2, 3);
    uint32_t x1 = q.w1 ^ x0 ^ x2;
    uint32_t x3 = q.w3 ^ x2 ^ (x0 << 3);
    x1 = std::rotl(x1, 1);
    x3 = std::rotl(x3, 7);
    x0 = x0 ^ x1 ^ x3;
    x2 = x2 ^ x3 ^ (x1 << 7);
    x0 = std::rotl(x0, 5);
    x2 = std::rotl(x2, 22);
    return {x0, x1, x2, x3};
}

inline Quad apply_sbox(unsigned index, Quad q) noexcept {
    switch (index & 7) {
        case 0: return sbox0(q);
        case 1: return sbox1(q);
        case 2: return sbox2(q);
        case 3: return sbox3(q);
        case 4: return sbox4(q);
        case 5: return sbox5(q);
        case 6: return sbox6(q);
        default: return sbox7(q);
    }
}

inline uint32_t load_le32(const std::uint8_t* p) noexcept {
    return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) |
           (uint32_t{p[3]} << 24);
}

inline void store_le32(std::uint8_t* p, uint32_t v) noexcept {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

// GF(2^8) with modulus x^8 + x^7 + x^5 + x^3 + 1.
constexpr std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    unsigned r = 0, x = a;
    for (unsigned y = b; y != 0; y >>= 1) {
        if (y & 1) r ^= x;
        x <<= 1;
        if (x & 0x100) x ^= 0x1A9;
    }
    return static_cast<std::uint8_t>(r);
}

constexpr std::uint8_t gf_pow(std::uint8_t a, unsigned e) {
    std::uint8_t r = 1;
    for (unsigned i = 0; i < e; ++i) r = gf_mul(r, a);
    return r;
}

constexpr std::uint8_t gf_inv(std::uint8_t a) {
    for (unsigned b = 1; b < 256; ++b)
        if (gf_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
    return 0;
}

// alpha is a root of X^4 + b^23 X^3 + b^245 X^2 + b^48 X + b^239 over GF(2^8),
// where b is the class of x.
constexpr std::uint8_t beta = 0x02;
constexpr std::uint8_t c3 = gf_pow(beta, 23);
constexpr std::uint8_t c2 = gf_pow(beta, 245);
constexpr std::uint8_t c1 = gf_pow(beta, 48);
constexpr std::uint8_t c0 = gf_pow(beta, 239);

constexpr uint32_t pack(std::uint8_t b3, std::uint8_t b2, std::uint8_t b1, std::uint8_t b0) {
    return (uint32_t{b3} << 24) | (uint32_t{b2} << 16) | (uint32_t{b1} << 8) | uint32_t{b0};
}

constexpr std::array<uint32_t, 256> make_mul_a() {
    std::array<uint32_t, 256> t{};
    for (unsigned i = 0; i < 256; ++i) {
        auto b = static_cast<std::uint8_t>(i);
        t[i] = pack(gf_mul(b, c3), gf_mul(b, c2), gf_mul(b, c1), gf_mul(b, c0));
    }
    return t;
}

constexpr std::array<uint32_t, 256> make_div_a() {
    std::array<uint32_t, 256> t{};
    const std::uint8_t inv_c0 = gf_inv(c0);
    for (unsigned i = 0; i < 256; ++i) {
        auto b = gf_mul(static_cast<std::uint8_t>(i), inv_c0);
        t[i] = pack(b, gf_mul(b, c3), gf_mul(b, c2), gf_mul(b, c1));
    }
    return t;
}

constexpr auto mul_a_table = make_mul_a();
constexpr auto div_a_table = make_div_a();

inline uint32_t mul_a(uint32_t x) noexcept { return (x << 8) ^ mul_a_table[x >> 24]; }
inline uint32_t div_a(uint32_t x) noexcept { return (x >> 8) ^ div_a_table[x & 0xFF]; }

constexpr uint32_t phi = 0x9E3779B9;

// Serpent key schedule truncated to the 25 subkeys Serpent24 consumes.
std::array<uint32_t, 100> serpent24_subkeys(std::span<const std::uint8_t> key) noexcept {
    std::array<std::uint8_t, 32> padded{};
    for (std::size_t i = 0; i < key.size(); ++i) padded[i] = key[i];
    if (key.size() < 32) padded[key.size()] = 0x01;

    std::array<uint32_t, 108> w{};
    for (std::size_t i = 0; i < 8; ++i) w[i] = load_le32(padded.data() + 4 * i);
    for (uint32_t i = 0; i < 100; ++i) {
        uint32_t t = w[i] ^ w[i + 3] ^ w[i + 5] ^ w[i + 7] ^ phi ^ i;
        w[i + 8] = std::rotl(t, 11);
    }

    std::array<uint32_t, 100> subkeys{};
    for (unsigned j = 0; j < 25; ++j) {
        const uint32_t* in = &w[8 + 4 * j];
        Quad k = apply_sbox(3u - j, {in[0], in[1], in[2], in[3]});
        subkeys[4 * j] = k.w0;
        subkeys[4 * j + 1] = k.w1;
        subkeys[4 * j + 2] = k.w2;
        subkeys[4 * j + 3] = k.w3;
    }
    secure_zero(padded);
    secure_zero_words(w);
    return subkeys;
}

}  // namespace

namespace detail {

Quad serpent_sbox(unsigned index, Quad in) noexcept { return apply_sbox(index, in); }
Quad serpent_linear(Quad in) noexcept { return linear(in); }
std::uint32_t mul_alpha(std::uint32_t x) noexcept { return mul_a(x); }
std::uint32_t div_alpha(std::uint32_t x) noexcept { return div_a(x); }

}  // namespace detail

CipherKey CipherKey::from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < min_size || bytes.size() > max_size) {
        throw Error(Errc::invalid_length,
                    "cipher key length " + std::to_string(bytes.size()) +
                        " octets is outside [16, 32]");
    }
    CipherKey key;
    auto dst = key.storage_.mutable_view();
    for (std::size_t i = 0; i < bytes.size(); ++i) dst[i] = bytes[i];
    key.size_ = bytes.size();
    return key;
}

CipherIV CipherIV::from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != size) {
        throw Error(Errc::invalid_length,
                    "cipher IV length " + std::to_string(bytes.size()) + " octets, expected 16");
    }
    std::array<std::uint8_t, size> out{};
    for (std::size_t i = 0; i < size; ++i) out[i] = bytes[i];
    return CipherIV(out);
}

Sosemanuk::Sosemanuk(const CipherKey& key, const CipherIV& iv) {
    auto subkeys = serpent24_subkeys(key.bytes());
    const std::uint8_t* ivb = iv.bytes().data();

    Quad x{load_le32(ivb), load_le32(ivb + 4), load_le32(ivb + 8), load_le32(ivb + 12)};
    // Serpent24 over the IV; the LFSR and FSM are seeded from the outputs of
    // rounds 12, 18 and 24.
    for (unsigned round = 0; round < 24; ++round) {
        const uint32_t* k = &subkeys[4 * round];
        x = {x.w0 ^ k[0], x.w1 ^ k[1], x.w2 ^ k[2], x.w3 ^ k[3]};
        x = linear(apply_sbox(round, x));
        if (round == 11) {
            lfsr_[6] = x.w3;
            lfsr_[7] = x.w2;
            lfsr_[8] = x.w1;
            lfsr_[9] = x.w0;
        } else if (round == 17) {
            fsm_r1_ = x.w0;
            lfsr_[4] = x.w1;
            fsm_r2_ = x.w2;
            lfsr_[5] = x.w3;
        }
    }
    const uint32_t* k = &subkeys[96];
    lfsr_[0] = x.w3 ^ k[3];
    lfsr_[1] = x.w2 ^ k[2];
    lfsr_[2] = x.w1 ^ k[1];
    lfsr_[3] = x.w0 ^ k[0];

    secure_zero_words(subkeys);
    x = {};
}

Sosemanuk::Sosemanuk(Sosemanuk&& other) noexcept
    : lfsr_(other.lfsr_),
      fsm_r1_(other.fsm_r1_),
      fsm_r2_(other.fsm_r2_),
      burst_(other.burst_),
      burst_pos_(other.burst_pos_) {
    other.wipe();
}

Sosemanuk& Sosemanuk::operator=(Sosemanuk&& other) noexcept {
    if (this != &other) {
        lfsr_ = other.lfsr_;
        fsm_r1_ = other.fsm_r1_;
        fsm_r2_ = other.fsm_r2_;
        burst_ = other.burst_;
        burst_pos_ = other.burst_pos_;
        other.wipe();
    }
    return *this;
}

void Sosemanuk::wipe() noexcept {
    secure_zero_words(lfsr_);
    secure_zero_words(std::span(&fsm_r1_, 1));
    secure_zero_words(std::span(&fsm_r2_, 1));
    secure_zero(burst_);
    burst_pos_ = burst_size;
}

void Sosemanuk::next_burst() noexcept {
    auto& s = lfsr_;
    uint32_t r1 = fsm_r1_;
    uint32_t r2 = fsm_r2_;
    uint32_t f[4];
    uint32_t dropped[4];

    // Twenty steps bring the circular LFSR index back to its start, so the
    // array needs no rotation between bursts.
    for (unsigned group = 0; group < 5; ++group) {
        for (unsigned j = 0; j < 4; ++j) {
            const unsigned t = group * 4 + j;
            const unsigned i0 = t % 10;
            const unsigned i1 = (t + 1) % 10;
            const unsigned i3 = (t + 3) % 10;
            const unsigned i8 = (t + 8) % 10;
            const unsigned i9 = (t + 9) % 10;

            const uint32_t mux = (r1 & 1) ? (s[i1] ^ s[i8]) : s[i1];
            const uint32_t old_r1 = r1;
            r1 = r2 + mux;
            r2 = std::rotl(old_r1 * 0x54655307u, 7);

            dropped[j] = s[i0];
            s[i0] = mul_a(s[i0]) ^ div_a(s[i3]) ^ s[i9];

            f[j] = (s[i9] + r1) ^ r2;
        }
        Quad z = sbox2({f[0], f[1], f[2], f[3]});
        std::uint8_t* out = burst_.data() + 16 * group;
        store_le32(out, z.w0 ^ dropped[0]);
        store_le32(out + 4, z.w1 ^ dropped[1]);
        store_le32(out + 8, z.w2 ^ dropped[2]);
        store_le32(out + 12, z.w3 ^ dropped[3]);
    }

    fsm_r1_ = r1;
    fsm_r2_ = r2;
    burst_pos_ = 0;
}

void Sosemanuk::keystream(std::span<std::uint8_t> out) noexcept {
    std::size_t done = 0;
    while (done < out.size()) {
        if (burst_pos_ == burst_size) next_burst();
        std::size_t take = std::min(burst_size - burst_pos_, out.size() - done);
        for (std::size_t i = 0; i < take; ++i) out[done + i] = burst_[burst_pos_ + i];
        burst_pos_ += take;
        done += take;
    }
}

std::vector<std::uint8_t> Sosemanuk::keystream(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    keystream(out);
    return out;
}

void Sosemanuk::apply(std::span<std::uint8_t> data) noexcept {
    std::size_t done = 0;
    // Drain any buffered keystream, then work in whole bursts.
    while (done < data.size() && burst_pos_ < burst_size) data[done++] ^= burst_[burst_pos_++];
    while (data.size() - done >= burst_size) {
        next_burst();
        for (std::size_t i = 0; i < burst_size; ++i) data[done + i] ^= burst_[i];
        burst_pos_ = burst_size;
        done += burst_size;
    }
    if (done < data.size()) {
        next_burst();
        while (done < data.size()) data[done++] ^= burst_[burst_pos_++];
    }
}

std::vector<std::uint8_t> Sosemanuk::xor_transform(std::span<const std::uint8_t> data) {
    std::vector<std::uint8_t> out(data.begin(), data.end());
    apply(out);
    return out;
}

}  // namespace seer
