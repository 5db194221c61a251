#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "sts/errors.hpp"

namespace sts {

using int128 = __int128;
using uint128 = unsigned __int128;

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw width_exceeded_error("128-bit addition overflow");
    return r;
}

inline int128 checked_sub(int128 a, int128 b) {
    int128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw width_exceeded_error("128-bit subtraction overflow");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw width_exceeded_error("128-bit multiplication overflow");
    return r;
}

// Negating the minimum value is the one overflow case.
inline uint128 abs_u128(int128 v) {
    return v < 0 ? uint128(0) - uint128(v) : uint128(v);
}

inline mpz_class to_mpz(int128 v) {
    uint128 mag = abs_u128(v);
    mpz_class hi{static_cast<unsigned long>(mag >> 64)};
    mpz_class r = (hi << 64) + static_cast<unsigned long>(mag);
    return v < 0 ? mpz_class(-r) : r;
}

} // namespace sts
