#include "seer/x25519.hpp"

#include <string>

#include "seer/error.hpp"

namespace seer {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Field element in radix 2^51: value = sum(limb[i] * 2^(51 i)).
using Fe = std::array<u64, 5>;

constexpr u64 mask51 = (u64{1} << 51) - 1;

Fe fe_zero() { return {0, 0, 0, 0, 0}; }
Fe fe_one() { return {1, 0, 0, 0, 0}; }

void fe_carry(Fe& h) {
    for (int i = 0; i < 4; ++i) {
        h[i + 1] += h[i] >> 51;
        h[i] &= mask51;
    }
    h[0] += 19 * (h[4] >> 51);
    h[4] &= mask51;
}

Fe fe_add(const Fe& a, const Fe& b) {
    Fe r;
    for (int i = 0; i < 5; ++i) r[i] = a[i] + b[i];
    fe_carry(r);
    return r;
}

// a - b computed as a + 2p - b; inputs must be carried (limbs < 2^52).
Fe fe_sub(const Fe& a, const Fe& b) {
    Fe r;
    r[0] = a[0] + 0xFFFFFFFFFFFDAull - b[0];
    for (int i = 1; i < 5; ++i) r[i] = a[i] + 0xFFFFFFFFFFFFEull - b[i];
    fe_carry(r);
    return r;
}

Fe fe_mul(const Fe& a, const Fe& b) {
    const u64 b1_19 = b[1] * 19, b2_19 = b[2] * 19, b3_19 = b[3] * 19, b4_19 = b[4] * 19;

    u128 t0 = (u128)a[0] * b[0] + (u128)a[1] * b4_19 + (u128)a[2] * b3_19 +
              (u128)a[3] * b2_19 + (u128)a[4] * b1_19;
    u128 t1 = (u128)a[0] * b[1] + (u128)a[1] * b[0] + (u128)a[2] * b4_19 +
              (u128)a[3] * b3_19 + (u128)a[4] * b2_19;
    u128 t2 = (u128)a[0] * b[2] + (u128)a[1] * b[1] + (u128)a[2] * b[0] +
              (u128)a[3] * b4_19 + (u128)a[4] * b3_19;
    u128 t3 = (u128)a[0] * b[3] + (u128)a[1] * b[2] + (u128)a[2] * b[1] +
              (u128)a[3] * b[0] + (u128)a[4] * b4_19;
    u128 t4 = (u128)a[0] * b[4] + (u128)a[1] * b[3] + (u128)a[2] * b[2] +
              (u128)a[3] * b[1] + (u128)a[4] * b[0];

    Fe r;
    t1 += (u64)(t0 >> 51);
    r[0] = (u64)t0 & mask51;
    t2 += (u64)(t1 >> 51);
    r[1] = (u64)t1 & mask51;
    t3 += (u64)(t2 >> 51);
    r[2] = (u64)t2 & mask51;
    t4 += (u64)(t3 >> 51);
    r[3] = (u64)t3 & mask51;
    r[0] += 19 * (u64)(t4 >> 51);
    r[4] = (u64)t4 & mask51;
    r[1] += r[0] >> 51;
    r[0] &= mask51;
    return r;
}

Fe fe_sq(const Fe& a) { return fe_mul(a, a); }

Fe fe_sq_n(Fe a, int n) {
    for (int i = 0; i < n; ++i) a = fe_sq(a);
    return a;
}

Fe fe_mul_small(const Fe& a, u64 k) {
    u128 c = 0;
    Fe r;
    for (int i = 0; i < 5; ++i) {
        c += (u128)a[i] * k;
        r[i] = (u64)c & mask51;
        c >>= 51;
    }
    r[0] += 19 * (u64)c;
    fe_carry(r);
    return r;
}

// z^(p-2) via the standard 254-squaring addition chain.
Fe fe_invert(const Fe& z) {
    Fe z2 = fe_sq(z);
    Fe z9 = fe_mul(fe_sq_n(z2, 2), z);
    Fe z11 = fe_mul(z9, z2);
    Fe z2_5_0 = fe_mul(fe_sq(z11), z9);
    Fe z2_10_0 = fe_mul(fe_sq_n(z2_5_0, 5), z2_5_0);
    Fe z2_20_0 = fe_mul(fe_sq_n(z2_10_0, 10), z2_10_0);
    Fe z2_40_0 = fe_mul(fe_sq_n(z2_20_0, 20), z2_20_0);
    Fe z2_50_0 = fe_mul(fe_sq_n(z2_40_0, 10), z2_10_0);
    Fe z2_100_0 = fe_mul(fe_sq_n(z2_50_0, 50), z2_50_0);
    Fe z2_200_0 = fe_mul(fe_sq_n(z2_100_0, 100), z2_100_0);
    Fe z2_250_0 = fe_mul(fe_sq_n(z2_200_0, 50), z2_50_0);
    return fe_mul(fe_sq_n(z2_250_0, 5), z11);
}

void fe_cswap(Fe& a, Fe& b, u64 swap) {
    const u64 mask = 0 - swap;
    for (int i = 0; i < 5; ++i) {
        u64 t = mask & (a[i] ^ b[i]);
        a[i] ^= t;
        b[i] ^= t;
    }
}

Fe fe_from_bytes(const PublicPoint& s) {
    auto load64 = [&](int offset) {
        u64 v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | s[offset + i];
        return v;
    };
    Fe h;
    h[0] = load64(0) & mask51;
    h[1] = (load64(6) >> 3) & mask51;
    h[2] = (load64(12) >> 6) & mask51;
    h[3] = (load64(19) >> 1) & mask51;
    h[4] = (load64(24) >> 12) & mask51;  // drops bit 255
    return h;
}

PublicPoint fe_to_bytes(Fe h) {
    fe_carry(h);
    fe_carry(h);
    // h < 2^255 now; subtract p once if h >= p.
    Fe t = h;
    t[0] += 19;
    for (int i = 0; i < 4; ++i) {
        t[i + 1] += t[i] >> 51;
        t[i] &= mask51;
    }
    const u64 ge_p = t[4] >> 51;
    t[4] &= mask51;
    const u64 mask = 0 - ge_p;
    for (int i = 0; i < 5; ++i) h[i] = (t[i] & mask) | (h[i] & ~mask);

    PublicPoint out{};
    unsigned bit = 0;
    for (int limb = 0; limb < 5; ++limb) {
        for (int b = 0; b < 51; ++b, ++bit) {
            if ((h[limb] >> b) & 1) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
        }
    }
    return out;
}

void fe_wipe(Fe& f) {
    volatile u64* p = f.data();
    for (int i = 0; i < 5; ++i) p[i] = 0;
}

PublicPoint ladder(std::span<const std::uint8_t, 32> scalar, const PublicPoint& u) {
    const Fe x1 = fe_from_bytes(u);
    Fe x2 = fe_one(), z2 = fe_zero(), x3 = x1, z3 = fe_one();
    u64 swap = 0;

    for (int t = 254; t >= 0; --t) {
        const u64 bit = (scalar[t / 8] >> (t % 8)) & 1;
        swap ^= bit;
        fe_cswap(x2, x3, swap);
        fe_cswap(z2, z3, swap);
        swap = bit;

        const Fe a = fe_add(x2, z2);
        const Fe aa = fe_sq(a);
        const Fe b = fe_sub(x2, z2);
        const Fe bb = fe_sq(b);
        const Fe e = fe_sub(aa, bb);
        const Fe c = fe_add(x3, z3);
        const Fe d = fe_sub(x3, z3);
        const Fe da = fe_mul(d, a);
        const Fe cb = fe_mul(c, b);
        x3 = fe_sq(fe_add(da, cb));
        z3 = fe_mul(x1, fe_sq(fe_sub(da, cb)));
        x2 = fe_mul(aa, bb);
        z2 = fe_mul(e, fe_add(aa, fe_mul_small(e, 121665)));
    }
    fe_cswap(x2, x3, swap);
    fe_cswap(z2, z3, swap);

    PublicPoint out = fe_to_bytes(fe_mul(x2, fe_invert(z2)));
    fe_wipe(x2);
    fe_wipe(z2);
    fe_wipe(x3);
    fe_wipe(z3);
    return out;
}

}  // namespace

PrivateScalar PrivateScalar::clamp(std::span<const std::uint8_t> raw) {
    if (raw.size() != 32) {
        throw Error(Errc::invalid_length,
                    "private scalar length " + std::to_string(raw.size()) + " octets, expected 32");
    }
    PrivateScalar k;
    auto b = k.bytes_.mutable_view();
    for (std::size_t i = 0; i < 32; ++i) b[i] = raw[i];
    b[0] &= 0xF8;
    b[31] &= 0x7F;
    b[31] |= 0x40;
    k.usable_ = true;
    return k;
}

PublicPoint scalar_mult(const PrivateScalar& k, const PublicPoint& u) {
    if (!k.usable()) throw Error(Errc::lifecycle, "private scalar has been destroyed");
    PublicPoint out = ladder(k.bytes(), u);
    if (is_all_zero(out)) {
        throw Error(Errc::degenerate_result, "X25519 produced the all-zero output (low-order point)");
    }
    return out;
}

PublicPoint base_point_mult(const PrivateScalar& k) { return scalar_mult(k, base_point); }

SharedSecret shared_secret(const PrivateScalar& k, const PublicPoint& peer) {
    PublicPoint raw = scalar_mult(k, peer);
    SharedSecret s(raw);
    secure_zero(raw);
    return s;
}

}  // namespace seer
