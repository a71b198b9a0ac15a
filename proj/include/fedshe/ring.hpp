#pragma once

#include <memory>
#include <vector>

#include "fedshe/int_wide.hpp"
#include "fedshe/random.hpp"

namespace fedshe::ring {

// Element of R_q = Z_q[x]/(x^n + 1): exactly n residues, each in [0, q).
// Negative values are stored as q-complements; centered_lift maps back.
using RingPoly = std::vector<u128>;

struct NttTables;

// Per-parameter-set multiplication plan: one negacyclic NTT lane per CRT
// prime factor of q plus Garner recombination constants. Built once,
// immutable afterwards, safe to share across threads.
struct MulPlan {
    std::vector<std::shared_ptr<const NttTables>> lanes;
    std::vector<u64> primes;
    // garner_inv[j] = (p_0 * ... * p_{j-1})^{-1} mod p_j, j >= 1
    std::vector<u64> garner_inv;
};

struct RingParams {
    u64 n = 0;    // ring degree, power of two
    u128 q = 0;   // ciphertext modulus, odd, may exceed 64 bits
    u128 t = 0;   // plaintext modulus, 1 < t < q
    std::shared_ptr<const MulPlan> plan;  // optional NTT fast path

    // Plain parameters; multiplication falls back to schoolbook.
    static RingParams make(u64 n, u128 q, u128 t);

    // q = product of `primes`, each an NTT-friendly prime (p ≡ 1 mod 2n).
    // Enables the CRT/NTT multiplication path.
    static RingParams make_crt(u64 n, const std::vector<u64>& primes, u128 t);

    bool same_ring(const RingParams& o) const { return n == o.n && q == o.q && t == o.t; }
};

RingPoly zero_poly(const RingParams& p);
RingPoly one_poly(const RingParams& p);

// Centered lift of a residue: v -> v - q when v > q/2.
inline bool is_negative_residue(u128 v, u128 q) { return v > q / 2; }
inline u128 centered_abs(u128 v, u128 q) { return is_negative_residue(v, q) ? q - v : v; }

RingPoly poly_add(const RingPoly& a, const RingPoly& b, const RingParams& p);
RingPoly poly_sub(const RingPoly& a, const RingPoly& b, const RingParams& p);
RingPoly poly_neg(const RingPoly& a, const RingParams& p);

// Negacyclic product a*b mod (x^n + 1, q). Dispatches to the NTT path when
// the params carry a plan, otherwise to schoolbook.
RingPoly poly_negacyclic_mul(const RingPoly& a, const RingPoly& b, const RingParams& p);

// Serial reference implementation. Kept as the oracle the fast paths are
// tested against; also the fallback for moduli without an NTT plan.
RingPoly poly_mul_schoolbook_serial(const RingPoly& a, const RingPoly& b, const RingParams& p);

// OpenMP variant of the schoolbook kernel, parallel over output coefficients.
// Bit-exact with the serial reference.
RingPoly poly_mul_schoolbook(const RingPoly& a, const RingPoly& b, const RingParams& p);

// CRT/NTT path; requires p.plan.
RingPoly poly_mul_ntt(const RingPoly& a, const RingPoly& b, const RingParams& p);

RingPoly sample_uniform(const RingParams& p, RandomSource& rng);
RingPoly sample_ternary(const RingParams& p, RandomSource& rng);

// Centered binomial with parameter k = round(2*sigma^2); support [-k, k],
// variance k/2. Coefficients reduced into [0, q).
RingPoly sample_error(const RingParams& p, double sigma, RandomSource& rng);

// Smallest prime >= lo with prime ≡ 1 (mod 2n); for tests and tooling.
u64 find_ntt_prime(u64 n, u64 lo);

}  // namespace fedshe::ring
