#pragma once

#include <stdexcept>
#include <string>

namespace sts {

// Error taxonomy, one class per CLI exit code:
//   config_error       -> 1  (bad input, bad flag, degenerate sample sizes)
//   verification_error -> 2  (cross-oracle mismatch, bound violation, corrupt data)
//   stats_error        -> 3  (statistical acceptance gate failed, --strict-stats)
//   io_error           -> 4  (filesystem problems)
// width_exceeded_error never escapes the library: the eta engine catches it and
// restarts the expansion in arbitrary precision.

class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

class verification_error : public error {
public:
    explicit verification_error(const std::string& msg) : error(msg) {}
};

class stats_error : public error {
public:
    explicit stats_error(const std::string& msg) : error(msg) {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Argument outside a function's mathematical domain (e.g. a negative spacing).
class domain_error : public config_error {
public:
    explicit domain_error(const std::string& msg) : config_error(msg) {}
};

// Requested range is empty (sieve limit < 2, zero primes requested, n_max = 0).
class empty_range_error : public config_error {
public:
    explicit empty_range_error(const std::string& msg) : config_error(msg) {}
};

// Too few data points for the requested statistic.
class insufficient_sample_error : public config_error {
public:
    explicit insufficient_sample_error(const std::string& msg) : config_error(msg) {}
};

// Operation asked to treat a prime of bad reduction as good.
class bad_prime_error : public config_error {
public:
    explicit bad_prime_error(const std::string& msg) : config_error(msg) {}
};

// Fixed-width integer kernel overflowed; caller retries in arbitrary precision.
class width_exceeded_error : public error {
public:
    explicit width_exceeded_error(const std::string& msg) : error(msg) {}
};

// A value that valid data can never produce (e.g. a Hasse-bound violation from
// the point counter). Indicates a bug, not bad input.
class internal_error : public verification_error {
public:
    explicit internal_error(const std::string& msg) : verification_error(msg) {}
};

} // namespace sts
