#pragma once

#include <cstdint>
#include <vector>

#include "sts/errors.hpp"

namespace sts {

// Equal-width binning with a model-density reference column. density is
// normalized by ALL offered samples, so sum density*width equals the fraction
// of samples inside [lo, hi]. Out-of-range samples are tallied separately;
// the chi-square routine decides whether to fold the overflow into the tail.
struct Histogram {
    std::vector<double> edges;           // bins + 1 ascending boundaries
    std::vector<std::uint64_t> counts;   // in-range counts only
    std::vector<double> density;         // counts / (total_samples * width)
    std::vector<double> reference;       // model density at bin midpoints
    std::size_t total_samples = 0;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    std::size_t bins() const { return counts.size(); }
    double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    double midpoint(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

template <class RefFn>
Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         std::size_t bins, RefFn&& ref) {
    if (bins < 1) throw config_error("histogram: need at least one bin");
    if (!(hi > lo)) throw config_error("histogram: empty range");

    Histogram h;
    h.total_samples = values.size();
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    h.edges[0] = lo;
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);

    for (double v : values) {
        if (v < lo) { ++h.underflow; continue; }
        if (v > hi) { ++h.overflow; continue; }
        std::size_t idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        if (idx >= bins) idx = bins - 1;  // v == hi (or boundary rounding)
        ++h.counts[idx];
    }

    h.density.resize(bins);
    h.reference.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double w = h.width(i);
        h.density[i] = h.total_samples == 0
                           ? 0.0
                           : static_cast<double>(h.counts[i]) /
                                 (static_cast<double>(h.total_samples) * w);
        h.reference[i] = ref(h.midpoint(i));
    }
    return h;
}

} // namespace sts
