#pragma once

// Secret-key half of the scheme. The aggregation server is compiled with
// FEDSHE_SERVER_COMPONENT defined, so pulling this header into any server
// translation unit is a build error: the server component structurally
// cannot hold or use secret keys.
#ifdef FEDSHE_SERVER_COMPONENT
#error "secret-key material must not be compiled into the server component"
#endif

#include <stdexcept>

#include "fedshe/bfv_public.hpp"

namespace fedshe::bfv {

struct SecretKey {
    ring::RingPoly s;  // ternary
    SecurityLevel level;
};

struct KeyPair {
    PublicKey key_pub;
    SecretKey key_priv;
};

struct NoiseOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Draws s (ternary), pk1 (uniform), e (error) from rng in that order and
// sets pk0 = -(pk1*s + e). The relation pk0 + pk1*s = -e is re-checked
// before e is discarded.
KeyPair keygen(const SecurityLevel& level, RandomSource& rng);

// m = round(t/q * centered(c0 + c1*s)) mod t, round half away from zero.
// Exact whenever the noise budget is positive; scale_exp passes through.
Plaintext decrypt(const Ciphertext& ct, const SecretKey& key_priv);

// decrypt plus an exact post-hoc noise check; throws NoiseOverflowError
// when the accumulated noise has crossed the decryption boundary.
Plaintext decrypt_checked(const Ciphertext& ct, const SecretKey& key_priv);

// Remaining headroom in bits: log2(q / (2*max_i |t*e_i - m_i*(q mod t)|)).
// Positive iff decryption is exact; the sign is computed from exact integer
// comparisons. Diagnostic only (requires the secret key).
double noise_budget(const Ciphertext& ct, const SecretKey& key_priv);

}  // namespace fedshe::bfv
