#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <gmpxx.h>

#include "sts/errors.hpp"
#include "sts/eta.hpp"

namespace sts {

// On-disk coefficient table: a text header
//
//   STSPACING-COEFFS 1
//   label <label>
//   weight <w>
//   n_max <N>
//   bad_primes [<p> ...]
//   data
//
// followed by N binary records (n = 1..N), each a little-endian uint32 byte
// length and that many bytes of minimal two's-complement little-endian
// integer. Exact values routinely exceed 64 bits; decimal text would triple
// the size of a weight-12 table.

inline constexpr const char* cache_magic = "STSPACING-COEFFS 1";

// Minimal two's-complement little-endian encoding; zero encodes to no bytes.
inline std::vector<std::uint8_t> encode_int(const mpz_class& v) {
    if (v == 0) return {};
    const bool neg = v < 0;
    const mpz_class mag = abs(v);
    std::size_t count = (mpz_sizeinbase(mag.get_mpz_t(), 2) + 7) / 8;
    std::vector<std::uint8_t> bytes(count, 0);
    mpz_export(bytes.data(), &count, -1, 1, 0, 0, mag.get_mpz_t());
    bytes.resize(count);
    if (!neg) {
        if (bytes.back() & 0x80) bytes.push_back(0x00);
        return bytes;
    }
    unsigned carry = 1;  // two's complement: invert, add one
    for (auto& b : bytes) {
        const unsigned x = static_cast<std::uint8_t>(~b) + carry;
        b = static_cast<std::uint8_t>(x);
        carry = x >> 8;
    }
    if (!(bytes.back() & 0x80)) bytes.push_back(0xFF);
    return bytes;
}

inline mpz_class decode_int(const std::uint8_t* data, std::size_t len) {
    if (len == 0) return 0;
    mpz_class v;
    if (!(data[len - 1] & 0x80)) {
        mpz_import(v.get_mpz_t(), len, -1, 1, 0, 0, data);
        return v;
    }
    std::vector<std::uint8_t> inv(data, data + len);
    for (auto& b : inv) b = static_cast<std::uint8_t>(~b);
    mpz_import(v.get_mpz_t(), len, -1, 1, 0, 0, inv.data());
    return -(v + 1);
}

inline void write_cache(const std::filesystem::path& path, const CoefficientTable& t) {
    if (t.prime_only)
        throw config_error("write_cache: refusing to persist a prime-only table");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open cache file for writing: " + path.string());

    out << cache_magic << '\n'
        << "label " << t.label << '\n'
        << "weight " << t.weight << '\n'
        << "n_max " << t.n_max << '\n'
        << "bad_primes";
    for (std::uint64_t p : t.bad_primes) out << ' ' << p;
    out << '\n' << "data\n";

    for (std::size_t n = 1; n <= t.n_max; ++n) {
        const auto bytes = encode_int(t.coeffs[n]);
        const std::uint32_t len = static_cast<std::uint32_t>(bytes.size());
        std::uint8_t lenbuf[4] = {static_cast<std::uint8_t>(len),
                                  static_cast<std::uint8_t>(len >> 8),
                                  static_cast<std::uint8_t>(len >> 16),
                                  static_cast<std::uint8_t>(len >> 24)};
        out.write(reinterpret_cast<const char*>(lenbuf), 4);
        if (len) out.write(reinterpret_cast<const char*>(bytes.data()), len);
    }
    if (!out) throw io_error("write failed: " + path.string());
}

inline CoefficientTable read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open cache file: " + path.string());

    auto read_line = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line)) throw io_error("truncated cache header (" +
                                                    std::string(what) + "): " + path.string());
        return line;
    };

    if (read_line("magic") != cache_magic)
        throw io_error("not a coefficient cache (bad magic): " + path.string());

    CoefficientTable t;
    {
        const std::string line = read_line("label");
        if (line.rfind("label ", 0) != 0) throw io_error("bad label line: " + path.string());
        t.label = line.substr(6);
    }
    {
        std::istringstream ls(read_line("weight"));
        std::string key;
        if (!(ls >> key >> t.weight) || key != "weight")
            throw io_error("bad weight line: " + path.string());
    }
    {
        std::istringstream ls(read_line("n_max"));
        std::string key;
        if (!(ls >> key >> t.n_max) || key != "n_max")
            throw io_error("bad n_max line: " + path.string());
    }
    {
        std::istringstream ls(read_line("bad_primes"));
        std::string key;
        if (!(ls >> key) || key != "bad_primes")
            throw io_error("bad bad_primes line: " + path.string());
        std::uint64_t p;
        while (ls >> p) t.bad_primes.insert(p);
    }
    if (read_line("data") != "data")
        throw io_error("missing data marker: " + path.string());

    t.coeffs.assign(t.n_max + 1, mpz_class(0));
    std::vector<std::uint8_t> buf;
    for (std::size_t n = 1; n <= t.n_max; ++n) {
        std::uint8_t lenbuf[4];
        if (!in.read(reinterpret_cast<char*>(lenbuf), 4))
            throw io_error("truncated cache record " + std::to_string(n) + ": " + path.string());
        const std::uint32_t len = std::uint32_t(lenbuf[0]) | (std::uint32_t(lenbuf[1]) << 8) |
                                  (std::uint32_t(lenbuf[2]) << 16) | (std::uint32_t(lenbuf[3]) << 24);
        buf.resize(len);
        if (len && !in.read(reinterpret_cast<char*>(buf.data()), len))
            throw io_error("truncated cache record " + std::to_string(n) + ": " + path.string());
        t.coeffs[n] = decode_int(buf.data(), len);
    }
    return t;
}

inline std::string cache_file_name(const std::string& label, std::size_t n_max) {
    std::string safe;
    for (char c : label)
        safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    if (safe.empty()) safe = "table";
    return safe + "-n" + std::to_string(n_max) + ".coeffs";
}

// Table lookup keyed by (label, n_max): read the cached expansion if present,
// otherwise expand and persist. An empty cache_dir disables persistence.
inline CoefficientTable load_or_compute(const EtaProductSpec& spec, std::size_t n_max,
                                        const std::filesystem::path& cache_dir) {
    if (cache_dir.empty()) return eta_product(spec, n_max);

    const std::filesystem::path path = cache_dir / cache_file_name(spec.label, n_max);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
        CoefficientTable t = read_cache(path);
        if (t.label != spec.label || t.n_max != n_max)
            throw io_error("cache key mismatch in " + path.string());
        return t;
    }
    CoefficientTable t = eta_product(spec, n_max);
    std::filesystem::create_directories(cache_dir, ec);
    if (ec) throw io_error("cannot create cache directory: " + cache_dir.string());
    write_cache(path, t);
    return t;
}

} // namespace sts
