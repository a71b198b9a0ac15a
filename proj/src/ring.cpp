#include "fedshe/ring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedshe::ring {

namespace {

bool is_power_of_two(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

void check_params(const RingParams& p) {
    if (!is_power_of_two(p.n) || p.n < 4) {
        throw std::invalid_argument("RingParams: n must be a power of two >= 4");
    }
    if (!(p.t > 1 && p.t < p.q)) {
        throw std::invalid_argument("RingParams: need 1 < t < q");
    }
    if ((p.q & 1) == 0) {
        throw std::invalid_argument("RingParams: q must be odd");
    }
}

void check_degree(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    if (a.size() != p.n || b.size() != p.n) {
        throw std::invalid_argument("ring: polynomial degree does not match RingParams");
    }
}

unsigned log2_exact(u64 n) {
    unsigned l = 0;
    while ((1ull << l) < n) ++l;
    return l;
}

u64 bit_reverse(u64 x, unsigned bits) {
    u64 r = 0;
    for (unsigned i = 0; i < bits; ++i) {
        r = (r << 1) | ((x >> i) & 1);
    }
    return r;
}

}  // namespace

// Per-prime negacyclic NTT tables. psi is a primitive 2n-th root of unity
// mod p; powers are stored in bit-reversed order for the merged
// Cooley-Tukey / Gentleman-Sande butterflies.
struct NttTables {
    u64 p = 0;
    u64 n = 0;
    std::vector<u64> psi_brv;    // psi^bitrev(i)
    std::vector<u64> ipsi_brv;   // psi^{-bitrev(i)}
    u64 n_inv = 0;

    NttTables(u64 prime, u64 degree) : p(prime), n(degree) {
        if (!is_prime_u64(prime)) throw std::invalid_argument("NTT: modulus must be prime");
        if ((prime - 1) % (2 * degree) != 0) {
            throw std::invalid_argument("NTT: prime must be 1 mod 2n");
        }
        // Any x with x^((p-1)/2n) of order exactly 2n works; since 2n is a
        // power of two, candidate^n == -1 certifies the order.
        u64 psi = 0;
        for (u64 x = 2; x < prime; ++x) {
            const u64 cand = pow_mod_u64(x, (prime - 1) / (2 * degree), prime);
            if (pow_mod_u64(cand, degree, prime) == prime - 1) {
                psi = cand;
                break;
            }
        }
        if (psi == 0) throw std::runtime_error("NTT: no primitive 2n-th root found");
        const u64 ipsi = pow_mod_u64(psi, prime - 2, prime);
        const unsigned bits = log2_exact(degree);
        psi_brv.resize(degree);
        ipsi_brv.resize(degree);
        u64 fwd = 1, inv = 1;
        std::vector<u64> fwd_pow(degree), inv_pow(degree);
        for (u64 i = 0; i < degree; ++i) {
            fwd_pow[i] = fwd;
            inv_pow[i] = inv;
            fwd = mul_mod_u64(fwd, psi, prime);
            inv = mul_mod_u64(inv, ipsi, prime);
        }
        for (u64 i = 0; i < degree; ++i) {
            psi_brv[i] = fwd_pow[bit_reverse(i, bits)];
            ipsi_brv[i] = inv_pow[bit_reverse(i, bits)];
        }
        n_inv = pow_mod_u64(degree % prime, prime - 2, prime);
    }

    // Forward negacyclic NTT, in place. Standard order in, bit-reversed out.
    void forward(std::vector<u64>& a) const {
        u64 t = n;
        for (u64 m = 1; m < n; m <<= 1) {
            t >>= 1;
            for (u64 i = 0; i < m; ++i) {
                const u64 j1 = 2 * i * t;
                const u64 s = psi_brv[m + i];
                for (u64 j = j1; j < j1 + t; ++j) {
                    const u64 u = a[j];
                    const u64 v = mul_mod_u64(a[j + t], s, p);
                    a[j] = u + v >= p ? u + v - p : u + v;
                    a[j + t] = u >= v ? u - v : u + p - v;
                }
            }
        }
    }

    // Inverse negacyclic NTT, in place. Bit-reversed in, standard order out.
    void inverse(std::vector<u64>& a) const {
        u64 t = 1;
        for (u64 m = n; m > 1; m >>= 1) {
            const u64 h = m >> 1;
            u64 j1 = 0;
            for (u64 i = 0; i < h; ++i) {
                const u64 s = ipsi_brv[h + i];
                for (u64 j = j1; j < j1 + t; ++j) {
                    const u64 u = a[j];
                    const u64 v = a[j + t];
                    a[j] = u + v >= p ? u + v - p : u + v;
                    a[j + t] = mul_mod_u64(u >= v ? u - v : u + p - v, s, p);
                }
                j1 += 2 * t;
            }
            t <<= 1;
        }
        for (auto& x : a) x = mul_mod_u64(x, n_inv, p);
    }
};

RingParams RingParams::make(u64 n, u128 q, u128 t) {
    RingParams p;
    p.n = n;
    p.q = q;
    p.t = t;
    check_params(p);
    return p;
}

RingParams RingParams::make_crt(u64 n, const std::vector<u64>& primes, u128 t) {
    if (primes.empty()) throw std::invalid_argument("make_crt: need at least one prime");
    u128 q = 1;
    auto plan = std::make_shared<MulPlan>();
    for (std::size_t j = 0; j < primes.size(); ++j) {
        const u64 pj = primes[j];
        for (std::size_t k = 0; k < j; ++k) {
            if (primes[k] == pj) throw std::invalid_argument("make_crt: primes must be distinct");
        }
        plan->lanes.push_back(std::make_shared<const NttTables>(pj, n));
        if (j > 0) {
            // (p_0 * ... * p_{j-1})^{-1} mod p_j
            u64 prod_mod = static_cast<u64>(q % pj);
            plan->garner_inv.push_back(pow_mod_u64(prod_mod, pj - 2, pj));
        }
        q *= pj;
    }
    plan->primes = primes;
    RingParams p;
    p.n = n;
    p.q = q;
    p.t = t;
    p.plan = std::move(plan);
    check_params(p);
    return p;
}

RingPoly zero_poly(const RingParams& p) { return RingPoly(p.n, 0); }

RingPoly one_poly(const RingParams& p) {
    RingPoly r(p.n, 0);
    r[0] = 1;
    return r;
}

RingPoly poly_add(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    check_degree(a, b, p);
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) r[i] = add_mod_u128(a[i], b[i], p.q);
    return r;
}

RingPoly poly_sub(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    check_degree(a, b, p);
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) r[i] = sub_mod_u128(a[i], b[i], p.q);
    return r;
}

RingPoly poly_neg(const RingPoly& a, const RingParams& p) {
    if (a.size() != p.n) throw std::invalid_argument("ring: polynomial degree does not match RingParams");
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) r[i] = neg_mod_u128(a[i], p.q);
    return r;
}

RingPoly poly_mul_schoolbook_serial(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    check_degree(a, b, p);
    const u64 n = p.n;
    const u128 q = p.q;
    RingPoly r(n, 0);
    for (u64 i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (u64 j = 0; j < n; ++j) {
            const u128 prod = mul_mod_u128(a[i], b[j], q);
            const u64 k = i + j;
            if (k < n) {
                r[k] = add_mod_u128(r[k], prod, q);
            } else {
                // x^n == -1 wraparound
                r[k - n] = sub_mod_u128(r[k - n], prod, q);
            }
        }
    }
    return r;
}

RingPoly poly_mul_schoolbook(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    check_degree(a, b, p);
    const u64 n = p.n;
    const u128 q = p.q;
    RingPoly r(n, 0);
    // Gather form: each output coefficient is independent, so the loop
    // parallelizes without races. r[k] = sum_{i<=k} a_i b_{k-i} - sum_{i>k} a_i b_{k-i+n}.
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (n >= 64)
    for (long k = 0; k < nn; ++k) {
        u128 acc = 0;
        const u64 uk = static_cast<u64>(k);
        for (u64 i = 0; i <= uk; ++i) {
            acc = add_mod_u128(acc, mul_mod_u128(a[i], b[uk - i], q), q);
        }
        for (u64 i = uk + 1; i < n; ++i) {
            acc = sub_mod_u128(acc, mul_mod_u128(a[i], b[uk - i + n], q), q);
        }
        r[uk] = acc;
    }
    return r;
}

RingPoly poly_mul_ntt(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    check_degree(a, b, p);
    if (!p.plan) throw std::invalid_argument("poly_mul_ntt: params carry no NTT plan");
    const MulPlan& plan = *p.plan;
    const u64 n = p.n;
    const std::size_t lanes = plan.lanes.size();

    std::vector<std::vector<u64>> residues(lanes);
    for (std::size_t l = 0; l < lanes; ++l) {
        const NttTables& tab = *plan.lanes[l];
        std::vector<u64> ra(n), rb(n);
        for (u64 i = 0; i < n; ++i) {
            ra[i] = static_cast<u64>(a[i] % tab.p);
            rb[i] = static_cast<u64>(b[i] % tab.p);
        }
        tab.forward(ra);
        tab.forward(rb);
        for (u64 i = 0; i < n; ++i) ra[i] = mul_mod_u64(ra[i], rb[i], tab.p);
        tab.inverse(ra);
        residues[l] = std::move(ra);
    }

    // Garner recombination into [0, q).
    RingPoly r(n);
    for (u64 i = 0; i < n; ++i) {
        u128 x = residues[0][i];
        u128 prod = plan.primes[0];
        for (std::size_t j = 1; j < lanes; ++j) {
            const u64 pj = plan.primes[j];
            const u64 xj = static_cast<u64>(x % pj);
            const u64 diff = residues[j][i] >= xj ? residues[j][i] - xj : residues[j][i] + pj - xj;
            const u64 tj = mul_mod_u64(diff, plan.garner_inv[j - 1], pj);
            x += prod * tj;
            prod *= pj;
        }
        r[i] = x;
    }
    return r;
}

RingPoly poly_negacyclic_mul(const RingPoly& a, const RingPoly& b, const RingParams& p) {
    if (p.plan) return poly_mul_ntt(a, b, p);
    return poly_mul_schoolbook(a, b, p);
}

RingPoly sample_uniform(const RingParams& p, RandomSource& rng) {
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) r[i] = rng.uniform_below(p.q);
    return r;
}

RingPoly sample_ternary(const RingParams& p, RandomSource& rng) {
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) {
        const u64 v = rng.uniform_u64_below(3);
        r[i] = v == 2 ? p.q - 1 : v;
    }
    return r;
}

RingPoly sample_error(const RingParams& p, double sigma, RandomSource& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_error: sigma must be positive");
    const unsigned k = std::max<unsigned>(1, static_cast<unsigned>(std::llround(2.0 * sigma * sigma)));
    RingPoly r(p.n);
    for (u64 i = 0; i < p.n; ++i) {
        // sum of k (bit - bit) terms, 32 pairs per drawn word
        long e = 0;
        unsigned remaining = k;
        while (remaining > 0) {
            const unsigned take = std::min(remaining, 32u);
            const u64 w = rng.next_u64();
            const u64 mask = (1ull << take) - 1;
            e += __builtin_popcountll(w & mask);
            e -= __builtin_popcountll((w >> 32) & mask);
            remaining -= take;
        }
        r[i] = e >= 0 ? static_cast<u128>(e) : p.q - static_cast<u128>(-e);
    }
    return r;
}

u64 find_ntt_prime(u64 n, u64 lo) {
    const u64 m = 2 * n;
    u64 p = lo - ((lo - 1) % m);  // largest k*m + 1 <= lo
    if (p < lo) p += m;
    while (!is_prime_u64(p)) p += m;
    return p;
}

}  // namespace fedshe::ring
