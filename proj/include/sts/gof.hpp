#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "sts/errors.hpp"
#include "sts/histogram.hpp"
#include "sts/spacings.hpp"

namespace sts {

struct GofReport {
    double ks_statistic = std::numeric_limits<double>::quiet_NaN();
    double chi_square = std::numeric_limits<double>::quiet_NaN();
    long degrees_of_freedom = -1;
    double sample_mean = std::numeric_limits<double>::quiet_NaN();
    std::size_t sample_count = 0;
    bool pass_at_5pct = false;

    // critical values backing the pass flags (asymptotic)
    double critical_5pct = std::numeric_limits<double>::quiet_NaN();
    double critical_1pct = std::numeric_limits<double>::quiet_NaN();

    bool pass_at_1pct() const {
        const double stat = degrees_of_freedom >= 0 ? chi_square : ks_statistic;
        return stat < critical_1pct;
    }
};

// Asymptotic two-sided KS critical values.
inline double ks_critical_5pct(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline double chi2_critical(long dof, double quantile) {
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
    return boost::math::quantile(dist, quantile);
}

// Two-sided KS distance between a sample and a continuous CDF: the empirical
// CDF is a right-continuous step function, so the supremum is attained at a
// jump, approached from one side or the other:
//   D = max_i max( i/n - F(x_(i)),  F(x_(i)) - (i-1)/n ).
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty())
        throw insufficient_sample_error("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

// KS of a spacing sample against its order's Poisson law.
inline GofReport ks_test(const SpacingSample& sample) {
    GofReport r;
    const unsigned k = sample.k;
    r.sample_count = sample.values.size();
    r.ks_statistic = ks_statistic(sample.values, [k](double s) { return poisson_cdf(k, s); });
    r.sample_mean = mean_check(sample);
    r.critical_5pct = ks_critical_5pct(r.sample_count);
    r.critical_1pct = ks_critical_1pct(r.sample_count);
    r.pass_at_5pct = r.ks_statistic < r.critical_5pct;
    return r;
}

// KS of unfolded values against the uniform law on [0, 1].
inline GofReport uniformity_ks(const UnfoldedSeries& series) {
    GofReport r;
    r.sample_count = series.values.size();
    r.ks_statistic = ks_statistic(series.values,
                                  [](double x) { return std::clamp(x, 0.0, 1.0); });
    double sum = 0.0;
    for (double v : series.values) sum += v;
    r.sample_mean = sum / static_cast<double>(series.values.size());
    r.critical_5pct = ks_critical_5pct(r.sample_count);
    r.critical_1pct = ks_critical_1pct(r.sample_count);
    r.pass_at_5pct = r.ks_statistic < r.critical_5pct;
    return r;
}

// Pearson chi-square of histogram counts against model bin probabilities
// (CDF differences across each bin, never midpoint densities).
//
// open_tail treats the last bin as [left, infinity): overflow counts fold in
// and its probability is the full upper tail — use it whenever the model has
// mass beyond the histogram range (spacing histograms). With open_tail the
// probabilities must cover all of sample_count's mass (the angle histogram on
// [0, pi] does so with a closed tail).
//
// Bins are merged greedily left to right until each group expects >= 5
// counts; a trailing remainder joins the previous group. dof = groups - 1.
template <class Cdf>
GofReport chi_square_test(const Histogram& hist, std::size_t sample_count, Cdf&& cdf,
                          bool open_tail) {
    const std::size_t bins = hist.bins();
    if (bins == 0) throw config_error("chi_square_test: empty histogram");

    std::vector<double> obs(bins), prob(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        obs[i] = static_cast<double>(hist.counts[i]);
        prob[i] = cdf(hist.edges[i + 1]) - cdf(hist.edges[i]);
    }
    if (open_tail) {
        obs[bins - 1] += static_cast<double>(hist.overflow);
        prob[bins - 1] = 1.0 - cdf(hist.edges[bins - 1]);
    }

    const double n = static_cast<double>(sample_count);
    std::vector<double> g_obs, g_exp;
    double cur_obs = 0.0, cur_exp = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        cur_obs += obs[i];
        cur_exp += n * prob[i];
        if (cur_exp >= 5.0) {
            g_obs.push_back(cur_obs);
            g_exp.push_back(cur_exp);
            cur_obs = cur_exp = 0.0;
        }
    }
    if (cur_exp > 0.0 || cur_obs > 0.0) {
        if (!g_obs.empty()) {
            g_obs.back() += cur_obs;
            g_exp.back() += cur_exp;
        }
    }
    if (g_obs.size() < 2)
        throw insufficient_sample_error(
            "chi_square_test: fewer than two groups with expected count >= 5");

    GofReport r;
    r.sample_count = sample_count;
    r.chi_square = 0.0;
    for (std::size_t i = 0; i < g_obs.size(); ++i) {
        const double d = g_obs[i] - g_exp[i];
        r.chi_square += d * d / g_exp[i];
    }
    r.degrees_of_freedom = static_cast<long>(g_obs.size()) - 1;
    r.critical_5pct = chi2_critical(r.degrees_of_freedom, 0.95);
    r.critical_1pct = chi2_critical(r.degrees_of_freedom, 0.99);
    r.pass_at_5pct = r.chi_square < r.critical_5pct;
    return r;
}

} // namespace sts
