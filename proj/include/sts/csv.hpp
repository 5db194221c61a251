#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sts/angles.hpp"
#include "sts/errors.hpp"
#include "sts/histogram.hpp"

namespace sts {

// 17 significant digits round-trips any double, making CSV output
// byte-reproducible across runs.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open output file: " + path.string());
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace detail

inline void write_angles_csv(const std::filesystem::path& path, const AngleSeries& s) {
    auto out = detail::open_out(path);
    out << "prime,a_p,cos_theta,theta\n";
    for (const auto& r : s.records)
        out << r.p << ',' << r.a_p.get_str() << ',' << fmt17(r.cos_theta) << ','
            << fmt17(r.theta) << '\n';
    detail::finish(out, path);
}

inline void write_unfolded_csv(const std::filesystem::path& path, const UnfoldedSeries& u) {
    auto out = detail::open_out(path);
    out << "rank_i,theta_unfolded\n";
    for (std::size_t i = 0; i < u.values.size(); ++i)
        out << (i + 1) << ',' << fmt17(u.values[i]) << '\n';
    detail::finish(out, path);
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
    auto out = detail::open_out(path);
    out << "bin_left,bin_right,count,density,reference_density\n";
    for (std::size_t i = 0; i < h.bins(); ++i)
        out << fmt17(h.edges[i]) << ',' << fmt17(h.edges[i + 1]) << ',' << h.counts[i]
            << ',' << fmt17(h.density[i]) << ',' << fmt17(h.reference[i]) << '\n';
    detail::finish(out, path);
}

// FNV-1a, 64-bit: tiny, dependency-free fingerprint for artifact files.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file for checksum: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

} // namespace sts
