#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedshe/ring.hpp"

namespace fedshe::bfv {

// Everything in this header is usable without secret-key material. The
// aggregation server links against this surface only; decryption lives in
// bfv_secret.hpp and never reaches server code paths.

enum class Level : std::uint8_t {
    Custom = 0,
    Sec128 = 1,  // n=4096, log2(q) ~ 109, t = 2^20
    Sec192 = 2,  // n=4096, log2(q) ~ 75,  t = 2^20
};

struct SecurityLevel {
    Level label = Level::Custom;
    ring::RingParams params;
    double sigma = 3.2;

    bool compatible(const SecurityLevel& o) const {
        return label == o.label && params.same_ring(o.params);
    }
};

// Fixed parameter sets. q is a product of NTT-friendly primes (each
// ≡ 1 mod 2n) so the CRT multiplication path applies; the exact moduli are
// listed in the README. Built lazily, cached for the process lifetime.
const SecurityLevel& standard_level(Level label);
Level level_from_byte(std::uint8_t b);

struct Plaintext {
    ring::RingPoly poly;        // coefficients in [0, t)
    std::uint8_t scale_exp = 0; // count of fixed-point scale factors baked in
};

struct PublicKey {
    ring::RingPoly pk0;
    ring::RingPoly pk1;
    SecurityLevel level;
};

struct Ciphertext {
    ring::RingPoly c0;
    ring::RingPoly c1;
    std::uint8_t scale_exp = 1;
    SecurityLevel level;
};

// Standard BFV encryption: c0 = pk0*u + e1 + Delta*m, c1 = pk1*u + e2 with
// u ternary and e1, e2 error samples (drawn from rng in that order).
Ciphertext encrypt(const Plaintext& m, const PublicKey& key_pub, RandomSource& rng);

// Homomorphic addition: component-wise, scale preserved.
Ciphertext he_add(const Ciphertext& a, const Ciphertext& b);

// Ciphertext-plaintext multiplication: scale exponents add.
Ciphertext he_plain_mul(const Ciphertext& a, const Plaintext& p);

u128 delta_q(const ring::RingParams& p);  // floor(q/t)

// Wire format: magic "HEFV", version u8, level u8, scale_exp u8, n u32 LE,
// q byte-length u16 LE, then c0 and c1 coefficients as fixed-width
// little-endian integers. Bit-exact across platforms.
std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct);

// Standard levels resolve their parameters from the header alone.
Ciphertext deserialize_ciphertext(const std::vector<std::uint8_t>& bytes);

// Custom levels need the caller to supply the parameter set; the header is
// validated against it.
Ciphertext deserialize_ciphertext(const std::vector<std::uint8_t>& bytes, const SecurityLevel& expected);

std::size_t coeff_byte_length(const ring::RingParams& p);

}  // namespace fedshe::bfv
