#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <type_traits>
#include <vector>
#include <gmpxx.h>

#include "sts/errors.hpp"
#include "sts/int128.hpp"

namespace sts {

// One factor eta(q^m)^e of an eta product.
struct EtaFactor {
    std::uint32_t dilation = 1;   // m
    std::uint32_t exponent = 1;   // e

    friend bool operator==(const EtaFactor&, const EtaFactor&) = default;
};

struct EtaProductSpec {
    std::vector<EtaFactor> factors;
    std::set<std::uint64_t> bad_primes;  // primes dividing the level
    std::string label;

    unsigned exponent_sum() const {
        unsigned s = 0;
        for (const auto& f : factors) s += f.exponent;
        return s;
    }
    std::uint64_t weighted_sum() const {  // sum m_i * e_i
        std::uint64_t s = 0;
        for (const auto& f : factors) s += std::uint64_t(f.dilation) * f.exponent;
        return s;
    }
    unsigned weight() const { return exponent_sum() / 2; }
    unsigned leading_power() const { return unsigned(weighted_sum() / 24); }

    void validate() const {
        if (factors.empty())
            throw config_error("eta spec '" + label + "': no factors");
        for (const auto& f : factors)
            if (f.dilation == 0 || f.exponent == 0)
                throw config_error("eta spec '" + label + "': dilation and exponent must be positive");
        if (weighted_sum() % 24 != 0)
            throw config_error("eta spec '" + label + "': sum of dilation*exponent (" +
                               std::to_string(weighted_sum()) + ") not divisible by 24");
        if (exponent_sum() % 4 != 0)
            throw config_error("eta spec '" + label + "': weight (sum of exponents / 2) must be an even integer");
    }
};

// Exact integer coefficients a_n, 1 <= n <= n_max. Index 0 is unused.
struct CoefficientTable {
    std::vector<mpz_class> coeffs;
    unsigned weight = 2;
    std::set<std::uint64_t> bad_primes;
    std::size_t n_max = 0;
    std::string label;
    bool prime_only = false;  // filled only at prime indices (point-count source)

    const mpz_class& at(std::size_t n) const {
        if (n < 1 || n > n_max)
            throw domain_error("coefficient index " + std::to_string(n) +
                               " outside [1," + std::to_string(n_max) + "]");
        return coeffs[n];
    }
};

inline const mpz_class& coefficient(const CoefficientTable& t, std::size_t n) { return t.at(n); }

struct SparseTerm {
    std::uint64_t power;
    int sign;
};

// Euler's product prod_{n>=1} (1 - q^n) truncated at q^n_max: support is the
// generalized pentagonal numbers k(3k-/+1)/2 with sign (-1)^k.
inline std::vector<SparseTerm> euler_series(std::uint64_t n_max) {
    std::vector<SparseTerm> terms{{0, +1}};
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t g1 = k * (3 * k - 1) / 2;
        const std::uint64_t g2 = k * (3 * k + 1) / 2;
        const int sign = (k % 2 == 0) ? +1 : -1;
        if (g1 > n_max) break;
        terms.push_back({g1, sign});
        if (g2 <= n_max) terms.push_back({g2, sign});
    }
    std::sort(terms.begin(), terms.end(),
              [](const SparseTerm& a, const SparseTerm& b) { return a.power < b.power; });
    return terms;
}

namespace detail {

template <class T> struct series_arith;
template <> struct series_arith<int128> {
    static void add(int128& a, const int128& b) { a = checked_add(a, b); }
    static void sub(int128& a, const int128& b) { a = checked_sub(a, b); }
};
template <> struct series_arith<mpz_class> {
    static void add(mpz_class& a, const mpz_class& b) { a += b; }
    static void sub(mpz_class& a, const mpz_class& b) { a -= b; }
};

// Dense coefficients of prod_i Euler(q^{m_i})^{e_i} up to degree len-1.
// Each pass multiplies in place by one sparse Euler factor; descending degree
// order means every read at d - g sees the pre-pass value, so no scratch
// buffer is needed.
template <class T>
std::vector<T> eta_power_series(const EtaProductSpec& spec, std::size_t len) {
    std::vector<T> c(len, T(0));
    c[0] = T(1);
    for (const auto& factor : spec.factors) {
        std::vector<SparseTerm> terms;  // dilated pentagonal powers, ascending, g > 0
        for (const auto& t : euler_series((len - 1) / factor.dilation))
            if (t.power > 0) terms.push_back({t.power * factor.dilation, t.sign});
        for (std::uint32_t pass = 0; pass < factor.exponent; ++pass) {
            for (std::size_t d = len; d-- > 0;) {
                for (const auto& t : terms) {
                    if (t.power > d) break;
                    if (t.sign > 0) series_arith<T>::add(c[d], c[d - t.power]);
                    else            series_arith<T>::sub(c[d], c[d - t.power]);
                }
            }
        }
    }
    return c;
}

template <class T>
CoefficientTable package_table(const EtaProductSpec& spec, std::size_t n_max,
                               const std::vector<T>& series) {
    CoefficientTable t;
    t.weight = spec.weight();
    t.bad_primes = spec.bad_primes;
    t.n_max = n_max;
    t.label = spec.label;
    t.coeffs.assign(n_max + 1, mpz_class(0));
    const std::size_t lead = spec.leading_power();
    for (std::size_t j = 0; j < series.size(); ++j) {
        if constexpr (std::is_same_v<T, mpz_class>) t.coeffs[lead + j] = series[j];
        else                                        t.coeffs[lead + j] = to_mpz(series[j]);
    }
    return t;
}

inline std::size_t series_length(const EtaProductSpec& spec, std::size_t n_max) {
    const std::size_t lead = spec.leading_power();
    return n_max >= lead ? n_max - lead + 1 : 0;
}

} // namespace detail

// Fixed-width expansion; throws width_exceeded_error if any partial
// coefficient leaves the signed 128-bit range.
inline CoefficientTable eta_product_fixed(const EtaProductSpec& spec, std::size_t n_max) {
    spec.validate();
    if (n_max < 1) throw empty_range_error("eta_product: n_max must be positive");
    const std::size_t len = detail::series_length(spec, n_max);
    std::vector<int128> series;
    if (len > 0) series = detail::eta_power_series<int128>(spec, len);
    return detail::package_table(spec, n_max, series);
}

// Arbitrary-precision expansion; never overflows.
inline CoefficientTable eta_product_big(const EtaProductSpec& spec, std::size_t n_max) {
    spec.validate();
    if (n_max < 1) throw empty_range_error("eta_product: n_max must be positive");
    const std::size_t len = detail::series_length(spec, n_max);
    std::vector<mpz_class> series;
    if (len > 0) series = detail::eta_power_series<mpz_class>(spec, len);
    return detail::package_table(spec, n_max, series);
}

// q-expansion of the eta product as a cusp form f(q) = sum a_n q^n. The
// q^{1/24} prefactors combine into the integer leading power, so a_n = 0 below
// it and the series begins with coefficient 1. Runs the checked 128-bit kernel
// and falls back to arbitrary precision on overflow.
inline CoefficientTable eta_product(const EtaProductSpec& spec, std::size_t n_max) {
    try {
        return eta_product_fixed(spec, n_max);
    } catch (const width_exceeded_error&) {
        return eta_product_big(spec, n_max);
    }
}

} // namespace sts
