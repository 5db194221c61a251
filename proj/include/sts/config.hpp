#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sts/curve.hpp"
#include "sts/errors.hpp"
#include "sts/eta.hpp"

namespace sts {

// One pipeline run: coefficient source(s), prime range, spacing orders,
// binning, outputs. Exactly one of num_primes / prime_limit selects the range.
struct RunConfig {
    std::string label = "custom";
    std::optional<EtaProductSpec> eta;
    std::optional<CurveSpec> curve;
    bool cross_check = false;  // compare point counts against the eta table

    std::optional<std::size_t> num_primes;
    std::optional<std::uint64_t> prime_limit;

    std::vector<unsigned> k_list{0, 1, 2};
    std::size_t angle_bins = 40;
    std::size_t spacing_bins = 50;
    std::optional<double> spacing_range;  // unset: [0,6] for k<=1, [0,8] for k=2

    bool pair_correlation = false;
    std::size_t pair_bins = 50;
    double pair_range = 10.0;

    std::filesystem::path output_dir = ".";
    std::filesystem::path cache_dir;  // empty: no persistence
    bool strict_stats = false;

    void validate() const {
        if (num_primes.has_value() == prime_limit.has_value())
            throw config_error("config: set exactly one of num_primes / prime_limit");
        if (num_primes && *num_primes < 1)
            throw config_error("config field num_primes: must be positive");
        if (prime_limit && *prime_limit < 2)
            throw config_error("config field prime_limit: must be at least 2");
        if (!eta && !curve)
            throw config_error("config: no coefficient source (need eta factors or a curve)");
        if (cross_check && !(eta && curve))
            throw config_error("config field cross_check: requires both an eta spec and a curve");
        if (k_list.empty())
            throw config_error("config field k_list: must not be empty");
        if (angle_bins < 2) throw config_error("config field angle_bins: need at least 2");
        if (spacing_bins < 2) throw config_error("config field spacing_bins: need at least 2");
        if (pair_bins < 1) throw config_error("config field pair_bins: need at least 1");
        if (spacing_range && !(*spacing_range > 0.0))
            throw config_error("config field spacing_range: must be positive");
        if (!(pair_range > 0.0))
            throw config_error("config field pair_range: must be positive");
        if (eta) eta->validate();
        if (curve) curve->validate();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw config_error("config field " + key + ": expected true/false, got '" + v + "'");
}

template <class T>
T parse_num(const std::string& v, const std::string& key) {
    std::istringstream in(v);
    T out;
    std::string rest;
    if (!(in >> out) || (in >> rest))
        throw config_error("config field " + key + ": cannot parse '" + v + "'");
    return out;
}

} // namespace detail

// Eta factors as "m^e m^e ..." — e.g. "1^2 11^2" for eta(q)^2 eta(q^11)^2.
inline std::vector<EtaFactor> parse_eta_factors(const std::string& text) {
    std::vector<EtaFactor> factors;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        const auto caret = tok.find('^');
        if (caret == std::string::npos || caret == 0 || caret + 1 == tok.size())
            throw config_error("config field eta_factors: expected m^e, got '" + tok + "'");
        EtaFactor f;
        f.dilation = detail::parse_num<std::uint32_t>(tok.substr(0, caret), "eta_factors");
        f.exponent = detail::parse_num<std::uint32_t>(tok.substr(caret + 1), "eta_factors");
        factors.push_back(f);
    }
    if (factors.empty())
        throw config_error("config field eta_factors: no factors given");
    return factors;
}

// Flat key-value run description: one "key = value" per line, '#' comments.
inline RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path.string());

    RunConfig cfg;
    bool have_eta = false, have_curve = false;
    EtaProductSpec eta;
    CurveSpec curve;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));

        if (key == "label") cfg.label = val;
        else if (key == "eta_factors") { eta.factors = parse_eta_factors(val); have_eta = true; }
        else if (key == "eta_bad_primes") {
            std::istringstream vs(val);
            std::uint64_t p;
            while (vs >> p) eta.bad_primes.insert(p);
            if (!vs.eof()) throw config_error("config field eta_bad_primes: cannot parse '" + val + "'");
            have_eta = true;
        }
        else if (key == "curve") {
            std::istringstream vs(val);
            std::string rest;
            if (!(vs >> curve.a1 >> curve.a2 >> curve.a3 >> curve.a4 >> curve.a6) || (vs >> rest))
                throw config_error("config field curve: expected 'a1 a2 a3 a4 a6', got '" + val + "'");
            have_curve = true;
        }
        else if (key == "conductor") { curve.conductor = detail::parse_num<std::uint64_t>(val, key); have_curve = true; }
        else if (key == "cross_check") cfg.cross_check = detail::parse_bool(val, key);
        else if (key == "num_primes") cfg.num_primes = detail::parse_num<std::size_t>(val, key);
        else if (key == "prime_limit") cfg.prime_limit = detail::parse_num<std::uint64_t>(val, key);
        else if (key == "k_list") {
            cfg.k_list.clear();
            std::istringstream vs(val);
            unsigned k;
            while (vs >> k) cfg.k_list.push_back(k);
            if (!vs.eof() || cfg.k_list.empty())
                throw config_error("config field k_list: cannot parse '" + val + "'");
        }
        else if (key == "angle_bins") cfg.angle_bins = detail::parse_num<std::size_t>(val, key);
        else if (key == "spacing_bins") cfg.spacing_bins = detail::parse_num<std::size_t>(val, key);
        else if (key == "spacing_range") cfg.spacing_range = detail::parse_num<double>(val, key);
        else if (key == "pair_correlation") cfg.pair_correlation = detail::parse_bool(val, key);
        else if (key == "pair_bins") cfg.pair_bins = detail::parse_num<std::size_t>(val, key);
        else if (key == "pair_range") cfg.pair_range = detail::parse_num<double>(val, key);
        else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "cache_dir") cfg.cache_dir = val;
        else if (key == "strict_stats") cfg.strict_stats = detail::parse_bool(val, key);
        else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (have_eta) { eta.label = cfg.label; cfg.eta = eta; }
    if (have_curve) { curve.label = cfg.label; cfg.curve = curve; }
    return cfg;
}

// Default cache directory from the environment, if set.
inline std::filesystem::path env_cache_dir() {
    const char* v = std::getenv("STSPACING_CACHE_DIR");
    return v ? std::filesystem::path(v) : std::filesystem::path();
}

} // namespace sts
