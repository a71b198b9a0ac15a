#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fedshe/ring.hpp"

using namespace fedshe;
using namespace fedshe::ring;

namespace {

// Independent modular-add oracle: limb arithmetic plus a division-based
// reduction, no shared code with poly_add's conditional subtract.
u128 oracle_add_mod(u128 a, u128 b, u128 q) {
    U256 s = U256::from_u128(a);
    const U256 t = U256::from_u128(b);
    u64 carry = 0;
    for (int i = 0; i < 4; ++i) {
        const u128 sum = static_cast<u128>(s.w[i]) + t.w[i] + carry;
        s.w[i] = static_cast<u64>(sum);
        carry = static_cast<u64>(sum >> 64);
    }
    return divmod_u256_u128(s, q).rem;
}

RingPoly random_poly(const RingParams& p, RandomSource& rng) { return sample_uniform(p, rng); }

void check_invariants(const RingPoly& r, const RingParams& p) {
    REQUIRE(r.size() == p.n);
    for (const u128 c : r) REQUIRE(c < p.q);
}

}  // namespace

TEST_CASE("poly_add identity and modular wrap") {
    const RingParams p = RingParams::make(4, 17, 5);
    const RingPoly a = {16, 0, 0, 0};
    const RingPoly b = {5, 0, 0, 0};
    const RingPoly sum = poly_add(a, b, p);
    CHECK(sum == RingPoly{4, 0, 0, 0});

    RandomSource rng(7);
    const RingPoly r = random_poly(p, rng);
    CHECK(poly_add(r, zero_poly(p), p) == r);
}

TEST_CASE("poly_add rejects mismatched degree") {
    const RingParams p = RingParams::make(4, 17, 5);
    const RingPoly a(4, 0);
    const RingPoly b(8, 0);
    CHECK_THROWS_AS(poly_add(a, b, p), std::invalid_argument);
}

TEST_CASE("poly_add matches per-coefficient big-integer oracle") {
    // includes a q wider than 64 bits
    const std::vector<RingParams> param_sets = {
        RingParams::make(8, 17, 5),
        RingParams::make(16, 1032193, 4096),
        RingParams::make(8, (static_cast<u128>(1) << 100) + 7, 65537),
    };
    for (const auto& p : param_sets) {
        RandomSource rng(42);
        for (int trial = 0; trial < 500; ++trial) {
            const RingPoly a = random_poly(p, rng);
            const RingPoly b = random_poly(p, rng);
            const RingPoly sum = poly_add(a, b, p);
            check_invariants(sum, p);
            for (u64 i = 0; i < p.n; ++i) {
                REQUIRE(sum[i] == oracle_add_mod(a[i], b[i], p.q));
            }
        }
    }
}

TEST_CASE("negacyclic wraparound: x^3 * x == -1") {
    const RingParams p = RingParams::make(4, 17, 5);
    RingPoly x3 = zero_poly(p), x1 = zero_poly(p);
    x3[3] = 1;
    x1[1] = 1;
    const RingPoly r = poly_mul_schoolbook_serial(x3, x1, p);
    CHECK(r == RingPoly{16, 0, 0, 0});
}

TEST_CASE("multiplicative identity") {
    const RingParams p = RingParams::make(16, 257, 17);
    RandomSource rng(3);
    const RingPoly a = random_poly(p, rng);
    CHECK(poly_mul_schoolbook_serial(a, one_poly(p), p) == a);
    CHECK(poly_mul_schoolbook(a, one_poly(p), p) == a);
}

TEST_CASE("OpenMP schoolbook is bit-exact with the serial reference") {
    for (u64 n : {4ull, 64ull, 256ull}) {
        const RingParams p = RingParams::make(n, (static_cast<u128>(1) << 70) + 11, 65537);
        RandomSource rng(n);
        for (int trial = 0; trial < 20; ++trial) {
            const RingPoly a = random_poly(p, rng);
            const RingPoly b = random_poly(p, rng);
            CHECK(poly_mul_schoolbook(a, b, p) == poly_mul_schoolbook_serial(a, b, p));
        }
    }
}

TEST_CASE("NTT path equals schoolbook oracle, 500 pairs per degree") {
    for (u64 n : {4ull, 8ull, 16ull, 64ull}) {
        const u64 p1 = find_ntt_prime(n, 1u << 14);
        const u64 p2 = find_ntt_prime(n, p1 + 1);
        const RingParams p = RingParams::make_crt(n, {p1, p2}, 256);
        REQUIRE(p.plan != nullptr);
        RandomSource rng(1000 + n);
        for (int trial = 0; trial < 500; ++trial) {
            const RingPoly a = random_poly(p, rng);
            const RingPoly b = random_poly(p, rng);
            const RingPoly fast = poly_mul_ntt(a, b, p);
            check_invariants(fast, p);
            REQUIRE(fast == poly_mul_schoolbook_serial(a, b, p));
        }
    }
}

TEST_CASE("NTT path at production-size modulus (three-lane CRT)") {
    const RingParams p = RingParams::make_crt(256, {33710081ull, 33832961ull, 33939457ull},
                                              static_cast<u128>(1) << 20);
    RandomSource rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const RingPoly a = random_poly(p, rng);
        const RingPoly b = random_poly(p, rng);
        CHECK(poly_mul_ntt(a, b, p) == poly_mul_schoolbook_serial(a, b, p));
    }
}

TEST_CASE("NTT path at two-lane 109-bit modulus") {
    const RingParams p = RingParams::make_crt(256, {36028797018972161ull, 18014398509506561ull},
                                              static_cast<u128>(1) << 20);
    RandomSource rng(100);
    for (int trial = 0; trial < 5; ++trial) {
        const RingPoly a = random_poly(p, rng);
        const RingPoly b = random_poly(p, rng);
        CHECK(poly_mul_ntt(a, b, p) == poly_mul_schoolbook_serial(a, b, p));
    }
}

TEST_CASE("additive group laws and distributivity on random triples") {
    const RingParams p = RingParams::make(16, 1032193, 4096);
    RandomSource rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const RingPoly a = random_poly(p, rng);
        const RingPoly b = random_poly(p, rng);
        const RingPoly c = random_poly(p, rng);
        CHECK(poly_add(a, b, p) == poly_add(b, a, p));
        CHECK(poly_add(poly_add(a, b, p), c, p) == poly_add(a, poly_add(b, c, p), p));
        // a*(b+c) == a*b + a*c, exact
        const RingPoly lhs = poly_negacyclic_mul(a, poly_add(b, c, p), p);
        const RingPoly rhs = poly_add(poly_negacyclic_mul(a, b, p), poly_negacyclic_mul(a, c, p), p);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("sample_uniform: determinism, non-degeneracy, frequencies") {
    const RingParams p = RingParams::make(4, 17, 5);
    {
        RandomSource r1(42), r2(42);
        CHECK(sample_uniform(p, r1) == sample_uniform(p, r2));
    }
    {
        RandomSource r1(42), r2(43);
        CHECK(sample_uniform(p, r1) != sample_uniform(p, r2));
    }
    RandomSource rng(2024);
    std::vector<u64> counts(17, 0);
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        const RingPoly poly = sample_uniform(p, rng);
        check_invariants(poly, p);
        for (const u128 c : poly) counts[static_cast<std::size_t>(c)]++;
    }
    const double total = static_cast<double>(draws) * 4;
    const double prob = 1.0 / 17.0;
    const double sigma = std::sqrt(total * prob * (1 - prob));
    for (const u64 cnt : counts) {
        CHECK(std::abs(static_cast<double>(cnt) - total * prob) < 5.0 * sigma);
    }
}

TEST_CASE("sample_ternary: support, determinism, frequencies") {
    const RingParams p = RingParams::make(64, 1032193, 4096);
    {
        RandomSource r1(9), r2(9);
        CHECK(sample_ternary(p, r1) == sample_ternary(p, r2));
    }
    RandomSource rng(31);
    u64 counts[3] = {0, 0, 0};
    u64 total = 0;
    while (total < 10000) {
        const RingPoly poly = sample_ternary(p, rng);
        for (const u128 c : poly) {
            if (c == 0) counts[0]++;
            else if (c == 1) counts[1]++;
            else if (c == p.q - 1) counts[2]++;
            else FAIL("ternary sample outside {q-1, 0, 1}");
        }
        total += p.n;
    }
    for (const u64 cnt : counts) {
        CHECK(std::abs(static_cast<double>(cnt) / static_cast<double>(total) - 1.0 / 3.0) <= 0.02);
    }
}

TEST_CASE("sample_error: moments and determinism") {
    const RingParams p = RingParams::make(1024, (static_cast<u128>(1) << 60) + 33, 65537);
    const double sigma = 3.2;
    {
        RandomSource r1(77), r2(77);
        CHECK(sample_error(p, sigma, r1) == sample_error(p, sigma, r2));
    }
    RandomSource rng(123);
    double sum = 0.0, sumsq = 0.0;
    u64 total = 0;
    while (total < 100000) {
        const RingPoly poly = sample_error(p, sigma, rng);
        check_invariants(poly, p);
        for (const u128 c : poly) {
            const bool neg = is_negative_residue(c, p.q);
            const double v = neg ? -static_cast<double>(p.q - c) : static_cast<double>(c);
            sum += v;
            sumsq += v * v;
        }
        total += p.n;
    }
    const double mean = sum / static_cast<double>(total);
    const double var = sumsq / static_cast<double>(total) - mean * mean;
    CHECK(std::abs(mean) < 0.1);
    CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.15));
}

TEST_CASE("RingParams validation") {
    CHECK_THROWS_AS(RingParams::make(3, 17, 5), std::invalid_argument);   // not a power of two
    CHECK_THROWS_AS(RingParams::make(4, 16, 5), std::invalid_argument);   // q even
    CHECK_THROWS_AS(RingParams::make(4, 17, 17), std::invalid_argument);  // t not < q
    CHECK_THROWS_AS(RingParams::make_crt(4, {17, 17}, 5), std::invalid_argument);  // repeated prime
}
