#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>
#include <gmpxx.h>

#include "sts/errors.hpp"
#include "sts/eta.hpp"
#include "sts/histogram.hpp"
#include "sts/primes.hpp"

namespace sts {

struct AngleRecord {
    std::uint64_t p;
    mpz_class a_p;
    double cos_theta;  // a_p / (2 p^{(w-1)/2})
    double theta;      // arccos, in [0, pi]
};

struct AngleSeries {
    std::vector<AngleRecord> records;  // increasing p
    unsigned weight = 2;
    std::string source_label;
};

struct UnfoldedSeries {
    std::vector<double> values;   // ascending, in [0, 1]
    std::size_t sample_size = 0;  // M = number of angles
};

// Sato-Tate density rho(theta) = (2/pi) sin^2(theta) on [0, pi].
inline double st_density(double theta) {
    if (theta < 0.0 || theta > std::numbers::pi)
        throw domain_error("st_density: theta outside [0, pi]");
    const double s = std::sin(theta);
    return (2.0 / std::numbers::pi) * s * s;
}

// Cumulative Sato-Tate measure: integral of rho from 0 to theta, in closed
// form (theta - sin(theta)cos(theta)) / pi. Clamped against end-point rounding.
inline double unfold(double theta) {
    if (theta < 0.0 || theta > std::numbers::pi)
        throw domain_error("unfold: theta outside [0, pi]");
    const double v = (theta - std::sin(theta) * std::cos(theta)) / std::numbers::pi;
    return std::clamp(v, 0.0, 1.0);
}

// One record per prime. The Deligne/Hasse bound a_p^2 <= 4 p^{w-1} is checked
// in exact integer arithmetic before any floating conversion; the float path
// then costs a few ulp at worst, and cos is clamped within a 1e-12 guard.
inline AngleSeries angle_series(const CoefficientTable& table, const PrimeTable& primes) {
    AngleSeries s;
    s.weight = table.weight;
    s.source_label = table.label;
    s.records.reserve(primes.count());
    mpz_class pk;
    for (std::uint64_t p : primes.primes) {
        if (p > table.n_max)
            throw config_error("angle_series: prime " + std::to_string(p) +
                               " beyond table n_max=" + std::to_string(table.n_max));
        const mpz_class& ap = table.at(p);
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), table.weight - 1);
        if (ap * ap > 4 * pk)
            throw verification_error("angle_series: |a_p| exceeds 2 p^{(w-1)/2} at p=" +
                                     std::to_string(p) + " (corrupted table)");
        double c = ap.get_d() / (2.0 * std::sqrt(pk.get_d()));
        if (c > 1.0 || c < -1.0) {
            if (std::abs(c) > 1.0 + 1e-12)
                throw internal_error("angle_series: cos out of range beyond rounding at p=" +
                                     std::to_string(p));
            c = std::clamp(c, -1.0, 1.0);
        }
        s.records.push_back({p, ap, c, std::acos(c)});
    }
    return s;
}

inline UnfoldedSeries unfolded_series(const AngleSeries& angles) {
    if (angles.records.empty())
        throw insufficient_sample_error("unfolded_series: empty angle series");
    UnfoldedSeries u;
    u.sample_size = angles.records.size();
    u.values.reserve(u.sample_size);
    for (const auto& r : angles.records) u.values.push_back(unfold(r.theta));
    std::sort(u.values.begin(), u.values.end());
    return u;
}

// Equal-width angle histogram on [0, pi] with rho at bin midpoints as the
// reference column.
inline Histogram density_histogram(const AngleSeries& angles, std::size_t bins) {
    if (bins < 2) throw config_error("density_histogram: need at least 2 bins");
    std::vector<double> thetas;
    thetas.reserve(angles.records.size());
    for (const auto& r : angles.records) thetas.push_back(r.theta);
    return make_histogram(thetas, 0.0, std::numbers::pi, bins,
                          [](double t) { return st_density(t); });
}

} // namespace sts
