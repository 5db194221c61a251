#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include <gmpxx.h>

#include "sts/errors.hpp"
#include "sts/int128.hpp"

namespace sts {

// Long Weierstrass model y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 over Z.
struct CurveSpec {
    long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    std::uint64_t conductor = 0;
    std::string label;

    mpz_class b2() const { return mpz_class(a1) * a1 + 4 * mpz_class(a2); }
    mpz_class b4() const { return 2 * mpz_class(a4) + mpz_class(a1) * a3; }
    mpz_class b6() const { return mpz_class(a3) * a3 + 4 * mpz_class(a6); }
    mpz_class b8() const {
        return mpz_class(a1) * a1 * a6 + 4 * mpz_class(a2) * a6
             - mpz_class(a1) * a3 * a4 + mpz_class(a2) * a3 * a3
             - mpz_class(a4) * a4;
    }
    mpz_class discriminant() const {
        const mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }

    bool good_reduction(std::uint64_t p) const {
        return mpz_fdiv_ui(discriminant().get_mpz_t(), p) != 0;
    }

    // Primes of bad reduction = prime factors of the discriminant.
    std::vector<std::uint64_t> bad_primes() const {
        mpz_class n = abs(discriminant());
        std::vector<std::uint64_t> out;
        for (mpz_class d = 2; d * d <= n; ++d) {
            if (n % d != 0) continue;
            out.push_back(d.get_ui());
            while (n % d == 0) n /= d;
        }
        if (n > 1) {
            if (!n.fits_ulong_p())
                throw config_error("curve '" + label + "': discriminant prime factor exceeds 64 bits");
            out.push_back(n.get_ui());
        }
        return out;
    }

    void validate() const {
        if (discriminant() == 0)
            throw config_error("curve '" + label + "': singular model (zero discriminant)");
        std::uint64_t n = conductor;
        for (std::uint64_t q = 2; n > 1 && q * q <= n; ++q) {
            if (n % q) continue;
            while (n % q == 0) n /= q;
            if (good_reduction(q))
                throw config_error("curve '" + label + "': conductor prime " +
                                   std::to_string(q) + " does not divide the discriminant");
        }
        if (n > 1 && good_reduction(n))  // leftover factor above the square root
            throw config_error("curve '" + label + "': conductor prime " +
                               std::to_string(n) + " does not divide the discriminant");
    }
};

namespace detail {

inline std::uint64_t mod_reduce(const mpz_class& v, std::uint64_t p) {
    return mpz_fdiv_ui(v.get_mpz_t(), p);  // floored residue, nonnegative
}

inline std::uint64_t mod_reduce(long v, std::uint64_t p) {
    long r = v % static_cast<long>(p);
    if (r < 0) r += static_cast<long>(p);
    return static_cast<std::uint64_t>(r);
}

// Affine points by brute force; the only route for p = 2, 3 where completing
// the square is unavailable.
inline std::uint64_t affine_points_enumerated(const CurveSpec& c, std::uint64_t p) {
    const std::uint64_t a1 = mod_reduce(c.a1, p), a2 = mod_reduce(c.a2, p),
                        a3 = mod_reduce(c.a3, p), a4 = mod_reduce(c.a4, p),
                        a6 = mod_reduce(c.a6, p);
    std::uint64_t n = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t rhs = (((x + a2) * x + a4) % p * x + a6) % p;
        for (std::uint64_t y = 0; y < p; ++y) {
            const std::uint64_t lhs = (y * y + a1 * x % p * y + a3 * y) % p;
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

} // namespace detail

// Projective point count #E(F_p), including the point at infinity.
//
// For odd p, multiplying the curve equation by 4 completes the square:
//   (2y + a1*x + a3)^2 = 4x^3 + b2*x^2 + 2*b4*x + b6 =: f(x),
// a bijection in y, so the affine count is sum_x (1 + chi(f(x))) with chi the
// quadratic character mod p (chi(0) = 0). One O(p) pass with a square table.
inline std::uint64_t count_points(const CurveSpec& curve, std::uint64_t p) {
    if (!curve.good_reduction(p))
        throw bad_prime_error("count_points: curve '" + curve.label +
                              "' has bad reduction at p=" + std::to_string(p));
    if (p < 5) return detail::affine_points_enumerated(curve, p) + 1;
    if (p >= (std::uint64_t(1) << 32))
        throw config_error("count_points: p >= 2^32 unsupported");

    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t u = 1; u < p; ++u) chi[u * u % p] = 1;

    const std::uint64_t c3 = 4 % p,
                        c2 = detail::mod_reduce(curve.b2(), p),
                        c1 = detail::mod_reduce(2 * curve.b4(), p),
                        c0 = detail::mod_reduce(curve.b6(), p);
    long long char_sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t fx = ((c3 * x % p + c2) * x % p + c1) * x % p;
        char_sum += chi[(fx + c0) % p];
    }
    return p + 1 + char_sum;
}

// Trace of Frobenius a_p = p + 1 - #E(F_p) at a good prime. A Hasse-bound
// violation cannot arise from a correct count, so it is treated as a bug.
inline long trace_ap(const CurveSpec& curve, std::uint64_t p) {
    const std::uint64_t n = count_points(curve, p);
    const long a = static_cast<long>(p) + 1 - static_cast<long>(n);
    if (int128(a) * a > int128(4) * p)
        throw internal_error("trace_ap: Hasse bound violated at p=" + std::to_string(p) +
                             " (a_p=" + std::to_string(a) + ")");
    return a;
}

} // namespace sts
