#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sts/angles.hpp"
#include "sts/errors.hpp"
#include "sts/histogram.hpp"

namespace sts {

// Scaled gaps s_i = (Theta_{i+k+1} - Theta_i) * M between sorted unfolded
// values; k = 0 is nearest neighbor. M - k - 1 values.
struct SpacingSample {
    unsigned k = 0;
    std::vector<double> values;
    std::size_t sample_size = 0;  // M, the scaling factor
};

inline SpacingSample spacings(const UnfoldedSeries& series, unsigned k) {
    const std::size_t M = series.sample_size;
    if (M < static_cast<std::size_t>(k) + 2)
        throw insufficient_sample_error("spacings: need at least k+2 = " +
                                        std::to_string(k + 2) + " points, have " +
                                        std::to_string(M));
    SpacingSample s;
    s.k = k;
    s.sample_size = M;
    s.values.reserve(M - k - 1);
    const double scale = static_cast<double>(M);
    for (std::size_t i = 0; i + k + 1 < M; ++i)
        s.values.push_back((series.values[i + k + 1] - series.values[i]) * scale);
    return s;
}

// Poisson spacing law p_k(s) = s^k e^{-s} / k! — the gap distribution of
// uncorrelated points.
inline double poisson_density(unsigned k, double s) {
    if (s < 0.0) throw domain_error("poisson_density: s < 0");
    double fact = 1.0;
    for (unsigned j = 2; j <= k; ++j) fact *= j;
    return std::pow(s, static_cast<double>(k)) * std::exp(-s) / fact;
}

// CDF of p_k (Gamma(k+1, 1)): 1 - e^{-s} * sum_{j<=k} s^j / j!.
inline double poisson_cdf(unsigned k, double s) {
    if (s < 0.0) throw domain_error("poisson_cdf: s < 0");
    double term = 1.0, sum = 1.0;
    for (unsigned j = 1; j <= k; ++j) {
        term *= s / j;
        sum += term;
    }
    return 1.0 - std::exp(-s) * sum;
}

// [0, 6] holds >99.9% of the model mass for k <= 1; k = 2 needs [0, 8].
inline double default_spacing_range(unsigned k) { return k >= 2 ? 8.0 : 6.0; }

inline Histogram spacing_histogram(const SpacingSample& sample, std::size_t bins,
                                   double range) {
    const unsigned k = sample.k;
    return make_histogram(sample.values, 0.0, range, bins,
                          [k](double s) { return poisson_density(k, s); });
}

inline double mean_check(const SpacingSample& sample) {
    if (sample.values.empty())
        throw insufficient_sample_error("mean_check: empty sample");
    double sum = 0.0;
    for (double v : sample.values) sum += v;
    return sum / static_cast<double>(sample.values.size());
}

// Acceptance window for the sample mean: the model mean is k+1 with variance
// k+1, so 4 standard errors is 4 sqrt((k+1)/n).
inline double mean_tolerance(unsigned k, std::size_t n) {
    return 4.0 * std::sqrt(static_cast<double>(k + 1) / static_cast<double>(n));
}

// All scaled pairwise gaps (Theta_j - Theta_i) * M, j > i, binned on
// [0, range]. density here is count / (M * width) — gaps per sample per unit
// length — so the uncorrelated-points reference is the constant 1. Pairs
// beyond range are tallied as overflow and skipped.
inline Histogram pair_correlation(const UnfoldedSeries& series, std::size_t bins,
                                  double range) {
    const std::size_t M = series.sample_size;
    if (M < 2)
        throw insufficient_sample_error("pair_correlation: need at least 2 points");
    if (bins < 1) throw config_error("pair_correlation: need at least one bin");
    if (!(range > 0.0)) throw config_error("pair_correlation: range must be positive");

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges[i] = range * static_cast<double>(i) / static_cast<double>(bins);
    h.counts.assign(bins, 0);

    const double scale = static_cast<double>(M);
    std::size_t offered = 0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i + 1; j < M; ++j) {
            const double g = (series.values[j] - series.values[i]) * scale;
            if (g > range) {  // values sorted: every later j is out of range too
                h.overflow += M - j;
                offered += M - j;
                break;
            }
            ++offered;
            std::size_t idx = static_cast<std::size_t>(g / range * static_cast<double>(bins));
            if (idx >= bins) idx = bins - 1;
            ++h.counts[idx];
        }
    }
    h.total_samples = offered;

    h.density.resize(bins);
    h.reference.assign(bins, 1.0);
    for (std::size_t i = 0; i < bins; ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / (scale * h.width(i));
    return h;
}

} // namespace sts
