#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sts/errors.hpp"

namespace sts {

struct PrimeTable {
    std::vector<std::uint64_t> primes;  // strictly increasing
    std::uint64_t limit = 0;            // inclusive bound: contains every prime <= limit

    std::size_t count() const { return primes.size(); }
    std::uint64_t nth(std::size_t i) const { return primes.at(i); }  // 0-based
};

namespace detail {

inline std::vector<std::uint64_t> sieve_plain(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        if (p <= limit / p)
            for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
    }
    return out;
}

inline std::vector<std::uint64_t> sieve_segmented(std::uint64_t limit,
                                                  std::size_t segment_size) {
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    while (root > 1 && root * root > limit) --root;
    while ((root + 1) * (root + 1) <= limit) ++root;

    std::vector<std::uint64_t> out = sieve_plain(root);
    const std::vector<std::uint64_t> base = out;  // primes <= sqrt(limit)

    std::vector<bool> composite;
    for (std::uint64_t lo = root + 1; lo <= limit; ) {
        const std::uint64_t hi = std::min<std::uint64_t>(limit, lo + (segment_size - 1));
        composite.assign(hi - lo + 1, false);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = lo + ((p - lo % p) % p);
            start = std::max(start, p * p);
            for (std::uint64_t q = start; q <= hi; q += p) composite[q - lo] = true;
        }
        for (std::uint64_t v = lo; v <= hi; ++v)
            if (!composite[v - lo]) out.push_back(v);
        if (hi == limit) break;
        lo = hi + 1;
    }
    return out;
}

} // namespace detail

// All primes p <= limit, increasing. Below segment_threshold a flat bitmap is
// cheapest; above it, fixed-size segments keep memory bounded.
inline PrimeTable sieve(std::uint64_t limit,
                        std::uint64_t segment_threshold = 10'000'000,
                        std::size_t segment_size = 1 << 20) {
    if (limit < 2) throw empty_range_error("sieve: limit must be at least 2");
    PrimeTable t;
    t.limit = limit;
    t.primes = (limit <= segment_threshold)
                   ? detail::sieve_plain(limit)
                   : detail::sieve_segmented(limit, segment_size);
    return t;
}

// First n primes; limit is set to the n-th prime, so the table equals
// sieve(limit). Upper bound p_n < n(ln n + ln ln n) for n >= 6, with a retry
// loop as a safety net.
inline PrimeTable first_n_primes(std::size_t n,
                                 std::uint64_t segment_threshold = 10'000'000) {
    if (n == 0) throw empty_range_error("first_n_primes: n must be positive");
    std::uint64_t bound = 13;
    if (n >= 6) {
        const double nd = static_cast<double>(n);
        bound = static_cast<std::uint64_t>(nd * (std::log(nd) + std::log(std::log(nd)))) + 1;
    }
    for (;;) {
        PrimeTable t = sieve(bound, segment_threshold);
        if (t.primes.size() >= n) {
            t.primes.resize(n);
            t.limit = t.primes.back();
            return t;
        }
        bound += bound / 2 + 16;
    }
}

} // namespace sts
