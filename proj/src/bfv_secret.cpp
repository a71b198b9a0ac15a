#include "fedshe/bfv_secret.hpp"

#include <cmath>

namespace fedshe::bfv {

namespace {

// Centered magnitude and sign of a residue: value v-q when v > q/2.
struct Centered {
    u128 mag;
    bool negative;
};

Centered center(u128 v, u128 q) {
    if (v > q / 2) return {q - v, true};
    return {v, false};
}

u128 u256_lo(const U256& v) { return (static_cast<u128>(v.w[1]) << 64) | v.w[0]; }
u128 u256_hi(const U256& v) { return (static_cast<u128>(v.w[3]) << 64) | v.w[2]; }

U256 make_u256(u128 lo, u128 hi) {
    U256 r;
    r.w[0] = static_cast<u64>(lo);
    r.w[1] = static_cast<u64>(lo >> 64);
    r.w[2] = static_cast<u64>(hi);
    r.w[3] = static_cast<u64>(hi >> 64);
    return r;
}

// |a - b| for a 256-bit a and b < 2^128.
U256 u256_absdiff_u128(const U256& a, u128 b) {
    const u128 lo = u256_lo(a), hi = u256_hi(a);
    if (hi == 0 && lo < b) return U256::from_u128(b - lo);
    return make_u256(lo - b, hi - (lo < b ? 1 : 0));
}

// a + b for b < 2^128; no overflow at the magnitudes involved here.
U256 u256_add_u128(const U256& a, u128 b) {
    const u128 lo = u256_lo(a), hi = u256_hi(a);
    const u128 lo2 = lo + b;
    return make_u256(lo2, hi + (lo2 < lo ? 1 : 0));
}

bool u256_less(const U256& a, const U256& b) {
    const u128 ah = u256_hi(a), bh = u256_hi(b);
    if (ah != bh) return ah < bh;
    return u256_lo(a) < u256_lo(b);
}

double log2_u128(u128 v) {
    const unsigned bits = bit_length_u128(v);
    if (bits == 0) return 0.0;
    if (bits <= 63) return std::log2(static_cast<double>(static_cast<u64>(v)));
    const unsigned shift = bits - 53;
    return std::log2(static_cast<double>(static_cast<u64>(v >> shift))) + shift;
}

double log2_u256(const U256& v) {
    const unsigned bits = v.bit_length();
    if (bits == 0) return 0.0;
    if (bits <= 128) return log2_u128(u256_lo(v));
    const unsigned shift = bits - 53;
    u64 mant = 0;
    for (int i = 52; i >= 0; --i) {
        mant = (mant << 1) | (v.bit(shift + static_cast<unsigned>(i)) ? 1u : 0u);
    }
    return std::log2(static_cast<double>(mant)) + shift;
}

ring::RingPoly noisy_message(const Ciphertext& ct, const SecretKey& key_priv) {
    if (!ct.level.compatible(key_priv.level)) {
        throw std::invalid_argument("decrypt: key does not match ciphertext level");
    }
    const ring::RingParams& rp = ct.level.params;
    return ring::poly_add(ct.c0, ring::poly_negacyclic_mul(ct.c1, key_priv.s, rp), rp);
}

Plaintext round_to_plaintext(const ring::RingPoly& x, const Ciphertext& ct) {
    const ring::RingParams& rp = ct.level.params;
    Plaintext m;
    m.scale_exp = ct.scale_exp;
    m.poly.resize(rp.n);
    for (u64 i = 0; i < rp.n; ++i) {
        // round half away from zero on the centered value t*x/q
        const Centered c = center(x[i], rp.q);
        const DivRem128 dr = divmod_u256_u128(mul_u128_u128(rp.t, c.mag), rp.q);
        u128 r = dr.quot + (2 * dr.rem >= rp.q ? 1 : 0);
        r %= rp.t;
        m.poly[i] = (c.negative && r != 0) ? rp.t - r : r;
    }
    return m;
}

// Max over coefficients of |t*e_i - m_i*(q mod t)| where e = centered
// residual x - Delta*m. Decryption is exact iff 2*max < q, exactly.
U256 invariant_noise_max(const ring::RingPoly& x, const Plaintext& m, const ring::RingParams& rp) {
    const u128 delta = rp.q / rp.t;
    const u128 r_t = rp.q % rp.t;
    U256 best = U256::from_u128(0);
    for (u64 i = 0; i < rp.n; ++i) {
        const u128 dm = delta * m.poly[i];  // < q, no reduction needed
        const Centered e = center(sub_mod_u128(x[i], dm, rp.q), rp.q);
        const U256 te = mul_u128_u128(rp.t, e.mag);
        const u128 mrt = m.poly[i] * r_t;  // < t^2, fits easily
        // nu = sign(e)*|t*e| - m*r_t; only |nu| matters
        const U256 nu = e.negative ? u256_add_u128(te, mrt) : u256_absdiff_u128(te, mrt);
        if (u256_less(best, nu)) best = nu;
    }
    return best;
}

bool within_budget(const U256& nu, u128 q) {
    if (nu.bit_length() + 1 > 128) return false;
    const u128 v = u256_lo(nu);
    return v < q && v < q - v;  // 2*nu < q without overflow
}

}  // namespace

KeyPair keygen(const SecurityLevel& level, RandomSource& rng) {
    const ring::RingParams& rp = level.params;
    const ring::RingPoly s = ring::sample_ternary(rp, rng);
    const ring::RingPoly pk1 = ring::sample_uniform(rp, rng);
    const ring::RingPoly e = ring::sample_error(rp, level.sigma, rng);

    const ring::RingPoly pk1_s = ring::poly_negacyclic_mul(pk1, s, rp);
    const ring::RingPoly pk0 = ring::poly_neg(ring::poly_add(pk1_s, e, rp), rp);

    // Recheck pk0 + pk1*s == -e while e is still in scope.
    const ring::RingPoly check = ring::poly_add(pk0, pk1_s, rp);
    for (u64 i = 0; i < rp.n; ++i) {
        if (check[i] != neg_mod_u128(e[i], rp.q)) {
            throw std::runtime_error("keygen: public key relation failed self-check");
        }
    }

    KeyPair kp;
    kp.key_pub = PublicKey{pk0, pk1, level};
    kp.key_priv = SecretKey{s, level};
    return kp;
}

Plaintext decrypt(const Ciphertext& ct, const SecretKey& key_priv) {
    return round_to_plaintext(noisy_message(ct, key_priv), ct);
}

double noise_budget(const Ciphertext& ct, const SecretKey& key_priv) {
    const ring::RingPoly x = noisy_message(ct, key_priv);
    const Plaintext m = round_to_plaintext(x, ct);
    const ring::RingParams& rp = ct.level.params;
    U256 nu = invariant_noise_max(x, m, rp);
    const bool positive = within_budget(nu, rp.q);
    if (nu.is_zero()) nu = U256::from_u128(1);  // cap: budget <= log2(q) - 1
    const double raw = log2_u128(rp.q) - 1.0 - log2_u256(nu);
    // clamp so the sign always agrees with the exact integer comparison
    if (positive) return raw > 0.0 ? raw : 1e-9;
    return raw < 0.0 ? raw : 0.0;
}

Plaintext decrypt_checked(const Ciphertext& ct, const SecretKey& key_priv) {
    const ring::RingPoly x = noisy_message(ct, key_priv);
    const Plaintext m = round_to_plaintext(x, ct);
    if (!within_budget(invariant_noise_max(x, m, ct.level.params), ct.level.params.q)) {
        throw NoiseOverflowError("decrypt: noise budget exhausted");
    }
    return m;
}

}  // namespace fedshe::bfv
