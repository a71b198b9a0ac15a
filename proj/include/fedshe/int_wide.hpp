#pragma once

#include <cstdint>
#include <stdexcept>

namespace fedshe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// 256-bit unsigned value, little-endian limbs. Just enough surface for the
// exact products and divisions the ring arithmetic needs; not a general
// bignum type.
struct U256 {
    u64 w[4]{0, 0, 0, 0};

    static U256 from_u128(u128 x) {
        U256 r;
        r.w[0] = static_cast<u64>(x);
        r.w[1] = static_cast<u64>(x >> 64);
        return r;
    }

    bool is_zero() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }

    bool bit(unsigned i) const { return (w[i >> 6] >> (i & 63)) & 1u; }

    unsigned bit_length() const {
        for (int limb = 3; limb >= 0; --limb) {
            if (w[limb] != 0) {
                unsigned top = 63 - static_cast<unsigned>(__builtin_clzll(w[limb]));
                return static_cast<unsigned>(limb) * 64 + top + 1;
            }
        }
        return 0;
    }
};

// a * b with full 256-bit result.
inline U256 mul_u128_u128(u128 a, u128 b) {
    const u64 a0 = static_cast<u64>(a), a1 = static_cast<u64>(a >> 64);
    const u64 b0 = static_cast<u64>(b), b1 = static_cast<u64>(b >> 64);

    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;

    U256 r;
    r.w[0] = static_cast<u64>(p00);

    u128 mid = (p00 >> 64);
    mid += static_cast<u64>(p01);
    mid += static_cast<u64>(p10);
    r.w[1] = static_cast<u64>(mid);

    u128 hi = (mid >> 64);
    hi += (p01 >> 64);
    hi += (p10 >> 64);
    hi += static_cast<u64>(p11);
    r.w[2] = static_cast<u64>(hi);
    r.w[3] = static_cast<u64>((hi >> 64) + (p11 >> 64));
    return r;
}

struct DivRem128 {
    u128 quot;
    u128 rem;
};

// Shift-subtract division of a 256-bit value by a 128-bit divisor.
// Precondition: quotient fits in 128 bits (all callers guarantee this).
inline DivRem128 divmod_u256_u128(const U256& num, u128 d) {
    if (d == 0) throw std::domain_error("division by zero");
    u128 rem = 0;
    u128 quot = 0;
    unsigned bits = num.bit_length();
    for (unsigned i = bits; i-- > 0;) {
        // 129-bit shift: if the top bit of rem is set, the shifted value
        // exceeds d for sure and the wrapped subtraction is still exact.
        const bool hi = (rem >> 127) != 0;
        rem = (rem << 1) | static_cast<u128>(num.bit(i));
        quot <<= 1;
        if (hi || rem >= d) {
            rem -= d;
            quot |= 1;
        }
    }
    return {quot, rem};
}

inline unsigned bit_length_u128(u128 x) {
    const u64 hi = static_cast<u64>(x >> 64);
    if (hi != 0) return 128 - static_cast<unsigned>(__builtin_clzll(hi));
    const u64 lo = static_cast<u64>(x);
    if (lo != 0) return 64 - static_cast<unsigned>(__builtin_clzll(lo));
    return 0;
}

inline u128 u256_lo(const U256& v) { return (static_cast<u128>(v.w[1]) << 64) | v.w[0]; }
inline u128 u256_hi(const U256& v) { return (static_cast<u128>(v.w[3]) << 64) | v.w[2]; }

inline U256 make_u256(u128 lo, u128 hi) {
    U256 r;
    r.w[0] = static_cast<u64>(lo);
    r.w[1] = static_cast<u64>(lo >> 64);
    r.w[2] = static_cast<u64>(hi);
    r.w[3] = static_cast<u64>(hi >> 64);
    return r;
}

// |a - b| for a 256-bit a and b < 2^128.
inline U256 u256_absdiff_u128(const U256& a, u128 b) {
    const u128 lo = u256_lo(a), hi = u256_hi(a);
    if (hi == 0 && lo < b) return U256::from_u128(b - lo);
    return make_u256(lo - b, hi - (lo < b ? 1 : 0));
}

// a + b for b < 2^128; no overflow at the magnitudes this project reaches.
inline U256 u256_add_u128(const U256& a, u128 b) {
    const u128 lo = u256_lo(a), hi = u256_hi(a);
    const u128 lo2 = lo + b;
    return make_u256(lo2, hi + (lo2 < lo ? 1 : 0));
}

inline bool u256_less(const U256& a, const U256& b) {
    const u128 ah = u256_hi(a), bh = u256_hi(b);
    if (ah != bh) return ah < bh;
    return u256_lo(a) < u256_lo(b);
}

inline u128 add_mod_u128(u128 a, u128 b, u128 m) {
    // a, b < m < 2^127 for every modulus this project uses, so a + b cannot wrap.
    u128 s = a + b;
    if (s >= m) s -= m;
    return s;
}

inline u128 sub_mod_u128(u128 a, u128 b, u128 m) {
    return a >= b ? a - b : m - (b - a);
}

inline u128 neg_mod_u128(u128 a, u128 m) { return a == 0 ? 0 : m - a; }

inline u128 mul_mod_u128(u128 a, u128 b, u128 m) {
    if (m <= static_cast<u128>(UINT64_MAX)) {
        return (a % m) * (b % m) % m;
    }
    return divmod_u256_u128(mul_u128_u128(a, b), m).rem;
}

inline u64 mul_mod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 pow_mod_u64(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    u64 b = base % m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod_u64(r, b, m);
        b = mul_mod_u64(b, b, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs with this witness set.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = mul_mod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace fedshe
