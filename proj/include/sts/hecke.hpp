#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>
#include <gmpxx.h>

#include "sts/errors.hpp"
#include "sts/eta.hpp"

namespace sts {

struct Violation {
    std::vector<std::uint64_t> indices;  // multiplicativity: {m, n}; recursion: {p, p^r}
    mpz_class expected;
    mpz_class actual;
};

struct ConsistencyReport {
    std::size_t checked_pairs = 0;
    std::vector<Violation> violations;
    std::uint64_t max_index = 0;

    bool passed() const { return violations.empty(); }
};

namespace detail {

inline void require_full_table(const CoefficientTable& t, const char* op) {
    if (t.prime_only)
        throw config_error(std::string(op) + ": table holds prime indices only");
}

} // namespace detail

// a_{mn} = a_m * a_n for coprime m, n. Pairs are enumerated with
// 2 <= m < n and m*n <= min(n_max, cap); m = 1 is the identity.
inline ConsistencyReport check_multiplicativity(const CoefficientTable& t,
                                                std::uint64_t cap = 1'000'000) {
    detail::require_full_table(t, "check_multiplicativity");
    ConsistencyReport rep;
    const std::uint64_t bound = std::min<std::uint64_t>(t.n_max, cap);
    for (std::uint64_t m = 2; m * m < bound; ++m) {
        for (std::uint64_t n = m + 1; m * n <= bound; ++n) {
            if (std::gcd(m, n) != 1) continue;
            ++rep.checked_pairs;
            rep.max_index = std::max(rep.max_index, m * n);
            const mpz_class expected = t.at(m) * t.at(n);
            const mpz_class& actual = t.at(m * n);
            if (actual != expected)
                rep.violations.push_back({{m, n}, expected, actual});
        }
    }
    return rep;
}

// Local Euler factor 1 - a_p p^{-s} + p^{w-1-2s} at a good prime forces
//   a_{p^{r+1}} = a_p * a_{p^r} - p^{w-1} * a_{p^{r-1}},
// with a_{p^0} = 1 and a_{p^{-1}} = 0. Each table value at p^r is checked
// against the recursion applied to the table values below it.
inline ConsistencyReport check_hecke_recursion(const CoefficientTable& t, std::uint64_t p) {
    detail::require_full_table(t, "check_hecke_recursion");
    if (t.bad_primes.count(p))
        throw bad_prime_error("check_hecke_recursion: p=" + std::to_string(p) +
                              " is a bad prime (local factor is linear)");
    if (p < 2 || p * p > t.n_max)
        throw config_error("check_hecke_recursion: need p^2 <= n_max");

    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), t.weight - 1);

    ConsistencyReport rep;
    const mpz_class& ap = t.at(p);
    mpz_class prev2 = 0;  // a_{p^{r-2}}, seeded at a_{p^{-1}}
    mpz_class prev = 1;   // a_{p^{r-1}}, seeded at a_{p^0}
    for (std::uint64_t pk = p; pk <= t.n_max; pk *= p) {
        ++rep.checked_pairs;
        rep.max_index = std::max(rep.max_index, pk);
        const mpz_class expected = ap * prev - pw * prev2;
        const mpz_class& actual = t.at(pk);
        if (actual != expected)
            rep.violations.push_back({{p, pk}, expected, actual});
        prev2 = prev;
        prev = actual;
        if (pk > t.n_max / p) break;
    }
    return rep;
}

// Bad primes carry a linear local factor instead of the quadratic one; for
// weight 2 the coefficient there is -1, 0, or +1 (multiplicative vs additive
// reduction). Reported informationally, never as a violation.
struct BadPrimeSurvey {
    std::vector<std::pair<std::uint64_t, mpz_class>> coefficients;
    bool weight2_dichotomy = true;  // all |a_p| <= 1 (meaningful for weight 2)
};

inline BadPrimeSurvey survey_bad_primes(const CoefficientTable& t) {
    detail::require_full_table(t, "survey_bad_primes");
    BadPrimeSurvey s;
    for (std::uint64_t p : t.bad_primes) {
        if (p > t.n_max) continue;
        const mpz_class& ap = t.at(p);
        s.coefficients.emplace_back(p, ap);
        if (abs(ap) > 1) s.weight2_dichotomy = false;
    }
    return s;
}

// Rebuild a_n for n <= n_limit from {a_p : p prime} alone: multiplicativity
// across coprime parts, the good-prime recursion up prime powers, and
// a_{p^r} = a_p^r at bad primes (linear local factor). Together with the two
// checks above this exhibits that prime data determines the table.
inline CoefficientTable reconstruct_from_primes(const CoefficientTable& t, std::size_t n_limit) {
    detail::require_full_table(t, "reconstruct_from_primes");
    if (n_limit < 1 || n_limit > t.n_max)
        throw config_error("reconstruct_from_primes: need 1 <= n_limit <= n_max");

    std::vector<std::uint32_t> spf(n_limit + 1, 0);  // smallest prime factor
    for (std::uint32_t i = 2; i <= n_limit; ++i) {
        if (spf[i]) continue;
        for (std::uint64_t j = i; j <= n_limit; j += i)
            if (!spf[j]) spf[j] = i;
    }

    CoefficientTable r;
    r.weight = t.weight;
    r.bad_primes = t.bad_primes;
    r.n_max = n_limit;
    r.label = t.label;
    r.coeffs.assign(n_limit + 1, mpz_class(0));
    r.coeffs[1] = 1;

    mpz_class pw;
    for (std::size_t n = 2; n <= n_limit; ++n) {
        const std::uint64_t p = spf[n];
        std::size_t m = n;
        while (m % p == 0) m /= p;
        if (m > 1) {
            r.coeffs[n] = r.coeffs[n / m] * r.coeffs[m];  // coprime split p^v * m
        } else if (n == p) {
            r.coeffs[n] = t.at(p);
        } else if (t.bad_primes.count(p)) {
            r.coeffs[n] = r.coeffs[n / p] * r.coeffs[p];
        } else {
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), t.weight - 1);
            r.coeffs[n] = r.coeffs[p] * r.coeffs[n / p] - pw * r.coeffs[n / (p * p)];
        }
    }
    return r;
}

} // namespace sts
