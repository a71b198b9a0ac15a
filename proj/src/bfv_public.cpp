#include "fedshe/bfv_public.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fedshe::bfv {

namespace {

constexpr std::uint8_t kSerialVersion = 1;
constexpr char kMagic[4] = {'H', 'E', 'F', 'V'};

void check_same_level(const SecurityLevel& a, const SecurityLevel& b, const char* what) {
    if (!a.compatible(b)) {
        throw std::invalid_argument(std::string(what) + ": security level / ring parameter mismatch");
    }
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_coeffs(std::vector<std::uint8_t>& out, const ring::RingPoly& poly, std::size_t width) {
    for (const u128 c : poly) {
        for (std::size_t i = 0; i < width; ++i) {
            out.push_back(static_cast<std::uint8_t>(c >> (8 * i)));
        }
    }
}

}  // namespace

const SecurityLevel& standard_level(Level label) {
    // Exact moduli, both products of primes ≡ 1 (mod 8192):
    //   SEC128: q = 36028797018972161 * 18014398509506561          (log2 q = 109.00)
    //   SEC192: q = 33710081 * 33832961 * 33939457                 (log2 q = 75.04)
    // n = 4096 at these sizes matches the usual lattice-security tables for
    // 128- and 192-bit classical security; t = 2^20 for both sets.
    static const SecurityLevel sec128 = [] {
        SecurityLevel lv;
        lv.label = Level::Sec128;
        lv.params = ring::RingParams::make_crt(4096, {36028797018972161ull, 18014398509506561ull},
                                               static_cast<u128>(1) << 20);
        lv.sigma = 3.2;
        return lv;
    }();
    static const SecurityLevel sec192 = [] {
        SecurityLevel lv;
        lv.label = Level::Sec192;
        lv.params = ring::RingParams::make_crt(4096, {33710081ull, 33832961ull, 33939457ull},
                                               static_cast<u128>(1) << 20);
        lv.sigma = 3.2;
        return lv;
    }();
    switch (label) {
        case Level::Sec128: return sec128;
        case Level::Sec192: return sec192;
        default: throw std::invalid_argument("standard_level: no fixed parameters for Custom");
    }
}

Level level_from_byte(std::uint8_t b) {
    switch (b) {
        case 0: return Level::Custom;
        case 1: return Level::Sec128;
        case 2: return Level::Sec192;
        default: throw std::invalid_argument("unknown security level byte");
    }
}

u128 delta_q(const ring::RingParams& p) { return p.q / p.t; }

Ciphertext encrypt(const Plaintext& m, const PublicKey& key_pub, RandomSource& rng) {
    const ring::RingParams& rp = key_pub.level.params;
    if (m.poly.size() != rp.n) {
        throw std::invalid_argument("encrypt: plaintext degree does not match parameters");
    }
    for (const u128 c : m.poly) {
        if (c >= rp.t) throw std::domain_error("encrypt: plaintext coefficient >= t");
    }
    const u128 delta = delta_q(rp);

    const ring::RingPoly u = ring::sample_ternary(rp, rng);
    const ring::RingPoly e1 = ring::sample_error(rp, key_pub.level.sigma, rng);
    const ring::RingPoly e2 = ring::sample_error(rp, key_pub.level.sigma, rng);

    ring::RingPoly scaled(rp.n);
    for (u64 i = 0; i < rp.n; ++i) {
        // delta * m_i < q by construction, no reduction needed
        scaled[i] = delta * m.poly[i];
    }

    Ciphertext ct;
    ct.level = key_pub.level;
    ct.scale_exp = m.scale_exp == 0 ? 1 : m.scale_exp;
    ct.c0 = ring::poly_add(ring::poly_add(ring::poly_negacyclic_mul(key_pub.pk0, u, rp), e1, rp), scaled, rp);
    ct.c1 = ring::poly_add(ring::poly_negacyclic_mul(key_pub.pk1, u, rp), e2, rp);
    return ct;
}

Ciphertext he_add(const Ciphertext& a, const Ciphertext& b) {
    check_same_level(a.level, b.level, "he_add");
    if (a.scale_exp != b.scale_exp) {
        throw std::invalid_argument("he_add: scale exponent mismatch");
    }
    Ciphertext r;
    r.level = a.level;
    r.scale_exp = a.scale_exp;
    r.c0 = ring::poly_add(a.c0, b.c0, a.level.params);
    r.c1 = ring::poly_add(a.c1, b.c1, a.level.params);
    return r;
}

Ciphertext he_plain_mul(const Ciphertext& a, const Plaintext& p) {
    const ring::RingParams& rp = a.level.params;
    if (p.poly.size() != rp.n) {
        throw std::invalid_argument("he_plain_mul: plaintext degree does not match parameters");
    }
    Ciphertext r;
    r.level = a.level;
    r.scale_exp = static_cast<std::uint8_t>(a.scale_exp + p.scale_exp);
    r.c0 = ring::poly_negacyclic_mul(a.c0, p.poly, rp);
    r.c1 = ring::poly_negacyclic_mul(a.c1, p.poly, rp);
    return r;
}

std::size_t coeff_byte_length(const ring::RingParams& p) {
    return (bit_length_u128(p.q) + 7) / 8;
}

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct) {
    const ring::RingParams& rp = ct.level.params;
    const std::size_t width = coeff_byte_length(rp);
    std::vector<std::uint8_t> out;
    out.reserve(13 + 2 * rp.n * width);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kSerialVersion);
    out.push_back(static_cast<std::uint8_t>(ct.level.label));
    out.push_back(ct.scale_exp);
    append_u32(out, static_cast<std::uint32_t>(rp.n));
    append_u16(out, static_cast<std::uint16_t>(width));
    append_coeffs(out, ct.c0, width);
    append_coeffs(out, ct.c1, width);
    return out;
}

namespace {

Ciphertext deserialize_impl(const std::vector<std::uint8_t>& bytes, const SecurityLevel* expected) {
    if (bytes.size() < 13 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw std::invalid_argument("ciphertext: bad magic");
    }
    if (bytes[4] != kSerialVersion) throw std::invalid_argument("ciphertext: unsupported version");
    const Level label = level_from_byte(bytes[5]);
    const std::uint8_t scale_exp = bytes[6];
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(bytes[7 + i]) << (8 * i);
    const std::uint16_t width = static_cast<std::uint16_t>(bytes[11] | (bytes[12] << 8));

    SecurityLevel level;
    if (expected != nullptr) {
        level = *expected;
        if (label != level.label) throw std::invalid_argument("ciphertext: security level mismatch");
    } else {
        level = standard_level(label);
    }
    const ring::RingParams& rp = level.params;
    if (n != rp.n || width != coeff_byte_length(rp)) {
        throw std::invalid_argument("ciphertext: header does not match parameter set");
    }
    const std::size_t need = 13 + 2 * static_cast<std::size_t>(n) * width;
    if (bytes.size() != need) throw std::invalid_argument("ciphertext: truncated payload");

    auto read_poly = [&](std::size_t offset) {
        ring::RingPoly poly(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            u128 c = 0;
            for (std::size_t b = 0; b < width; ++b) {
                c |= static_cast<u128>(bytes[offset + i * width + b]) << (8 * b);
            }
            if (c >= rp.q) throw std::invalid_argument("ciphertext: coefficient out of range");
            poly[i] = c;
        }
        return poly;
    };

    Ciphertext ct;
    ct.level = level;
    ct.scale_exp = scale_exp;
    ct.c0 = read_poly(13);
    ct.c1 = read_poly(13 + static_cast<std::size_t>(n) * width);
    return ct;
}

}  // namespace

Ciphertext deserialize_ciphertext(const std::vector<std::uint8_t>& bytes) {
    return deserialize_impl(bytes, nullptr);
}

Ciphertext deserialize_ciphertext(const std::vector<std::uint8_t>& bytes, const SecurityLevel& expected) {
    return deserialize_impl(bytes, &expected);
}

}  // namespace fedshe::bfv
