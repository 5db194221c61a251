#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "sts/gof.hpp"
#include "sts/spacings.hpp"

using Catch::Approx;

namespace {

sts::Histogram flat_histogram(std::vector<double> edges,
                              std::vector<std::uint64_t> counts,
                              std::uint64_t overflow = 0) {
    sts::Histogram h;
    h.edges = std::move(edges);
    h.counts = std::move(counts);
    h.overflow = overflow;
    return h;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("KS distance of a degenerate sample", "[gof]") {
    // all mass at 1.0 against the k = 0 law: the empirical CDF jumps 0 -> 1
    // there, so the distance is F(1) = 1 - 1/e from below
    sts::SpacingSample s;
    s.k = 0;
    s.values.assign(100, 1.0);
    s.sample_size = 101;
    const auto r = sts::ks_test(s);
    REQUIRE(r.ks_statistic == Approx(0.6321205588285577).margin(1e-15));
    REQUIRE(r.sample_count == 100);
    REQUIRE(r.sample_mean == 1.0);
    REQUIRE_FALSE(r.pass_at_5pct);
    REQUIRE_FALSE(r.pass_at_1pct());
}

TEST_CASE("KS distance of an inverse-transform grid is 1/(2n)", "[gof]") {
    const std::size_t n = 1000;
    for (unsigned k : {0u, 1u, 2u}) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = boost::math::gamma_p_inv(k + 1.0,
                                             (static_cast<double>(i) + 0.5) / n);
        const double d = sts::ks_statistic(
            xs, [k](double s) { return sts::poisson_cdf(k, s); });
        REQUIRE(d == Approx(0.5 / n).margin(1e-9));
        REQUIRE(d <= 1.0 / n);
    }
}

TEST_CASE("KS critical values scale as 1/sqrt(n)", "[gof]") {
    REQUIRE(sts::ks_critical_5pct(100) == Approx(0.1358).margin(1e-15));
    REQUIRE(sts::ks_critical_1pct(100) == Approx(0.1628).margin(1e-15));
    REQUIRE(sts::ks_critical_5pct(2000) == Approx(1.358 / std::sqrt(2000.0)).margin(1e-15));
}

TEST_CASE("uniformity KS of a mid-point grid", "[gof]") {
    const std::size_t m = 200;
    sts::UnfoldedSeries u;
    u.sample_size = m;
    for (std::size_t i = 1; i <= m; ++i)
        u.values.push_back((static_cast<double>(i) - 0.5) / m);
    const auto r = sts::uniformity_ks(u);
    REQUIRE(r.ks_statistic == Approx(0.5 / m).margin(1e-12));
    REQUIRE(r.sample_mean == Approx(0.5).margin(1e-12));
    REQUIRE(r.pass_at_5pct);

    sts::UnfoldedSeries single;
    single.sample_size = 1;
    single.values = {0.5};
    REQUIRE(sts::uniformity_ks(single).ks_statistic == 0.5);
}

TEST_CASE("empty samples cannot be KS tested", "[gof]") {
    sts::SpacingSample empty;
    REQUIRE_THROWS_AS(sts::ks_test(empty), sts::insufficient_sample_error);
}

TEST_CASE("KS calibration: uniform spacings pass at the nominal rate", "[gof]") {
    // 1000 synthetic samples of 2000 iid uniforms each; the 5% asymptotic
    // threshold should reject roughly 5%, and far fewer than 6 in 100.
    const std::size_t m = 2000;
    int passes = 0;
    const int reps = 1000;
    for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 rng(rep);
        sts::UnfoldedSeries u;
        u.sample_size = m;
        u.values.resize(m);
        for (auto& x : u.values)
            x = std::uniform_real_distribution<double>(0, 1)(rng);
        std::sort(u.values.begin(), u.values.end());
        if (sts::ks_test(sts::spacings(u, 0)).pass_at_5pct) ++passes;
    }
    INFO("pass rate " << passes / static_cast<double>(reps));
    REQUIRE(passes >= 940);
}

TEST_CASE("chi-square of exactly proportional counts is zero", "[gof]") {
    const auto h = flat_histogram({0.0, 0.25, 0.5, 0.75, 1.0}, {25, 25, 25, 25});
    const auto r = sts::chi_square_test(h, 100, uniform_cdf, /*open_tail=*/false);
    REQUIRE(r.chi_square == 0.0);
    REQUIRE(r.degrees_of_freedom == 3);
    REQUIRE(r.critical_5pct == Approx(7.814727903251179).epsilon(1e-10));
    REQUIRE(r.pass_at_5pct);
    REQUIRE(r.pass_at_1pct());
}

TEST_CASE("chi-square merges thin bins from the left", "[gof]") {
    // expected 3 per bin at n = 12: adjacent bins pair up into two groups of
    // expected 6, observed 4 and 8
    const auto h = flat_histogram({0.0, 0.25, 0.5, 0.75, 1.0}, {4, 0, 6, 2});
    const auto r = sts::chi_square_test(h, 12, uniform_cdf, false);
    REQUIRE(r.degrees_of_freedom == 1);
    REQUIRE(r.chi_square == Approx(4.0 / 3.0).margin(1e-12));
}

TEST_CASE("a thin trailing remainder folds into the previous group", "[gof]") {
    // expected counts 6, 6, 6, 2: the last bin cannot stand alone and joins
    // the third group
    const auto h = flat_histogram({0.0, 0.3, 0.6, 0.9, 1.0}, {10, 2, 5, 3});
    const auto r = sts::chi_square_test(h, 20, uniform_cdf, false);
    REQUIRE(r.degrees_of_freedom == 2);
    REQUIRE(r.chi_square == Approx(16.0 / 3.0).margin(1e-9));
}

TEST_CASE("chi-square needs at least two viable groups", "[gof]") {
    // n = 9 with group boundaries at expected 7.2 / 1.8: everything collapses
    // into one group
    const auto h = flat_histogram({0.0, 0.5, 0.8, 0.9, 1.0}, {4, 3, 1, 1});
    REQUIRE_THROWS_AS(sts::chi_square_test(h, 9, uniform_cdf, false),
                      sts::insufficient_sample_error);
    // a single-bin histogram can never yield two groups
    const auto h1 = flat_histogram({0.0, 1.0}, {1000});
    REQUIRE_THROWS_AS(sts::chi_square_test(h1, 1000, uniform_cdf, false),
                      sts::insufficient_sample_error);
}

TEST_CASE("open tail folds overflow and the full upper-tail mass", "[gof]") {
    const auto h = flat_histogram({0.0, 2.0, 4.0, 6.0}, {600, 250, 100},
                                  /*overflow=*/50);
    const std::size_t n = 1050;
    const auto r = sts::chi_square_test(
        h, n, [](double s) { return sts::poisson_cdf(0, s); }, /*open_tail=*/true);

    const double e2 = std::exp(-2.0), e4 = std::exp(-4.0);
    const double ex1 = n * (1.0 - e2);
    const double ex2 = n * (e2 - e4);
    const double ex3 = n * e4;  // [4, infinity), not [4, 6]
    const double want = (600.0 - ex1) * (600.0 - ex1) / ex1 +
                        (250.0 - ex2) * (250.0 - ex2) / ex2 +
                        (150.0 - ex3) * (150.0 - ex3) / ex3;
    REQUIRE(r.degrees_of_freedom == 2);
    REQUIRE(r.chi_square == Approx(want).epsilon(1e-12));
}

TEST_CASE("chi-square quantiles match reference values", "[gof]") {
    REQUIRE(sts::chi2_critical(35, 0.99) == Approx(57.3420734338592).epsilon(1e-10));
    REQUIRE(sts::chi2_critical(37, 0.99) == Approx(59.89250004508689).epsilon(1e-10));
    REQUIRE(sts::chi2_critical(48, 0.99) == Approx(73.68263852010573).epsilon(1e-10));
    REQUIRE(sts::chi2_critical(39, 0.95) == Approx(54.572227758941736).epsilon(1e-10));
    REQUIRE(sts::chi2_critical(3, 0.95) == Approx(7.814727903251179).epsilon(1e-10));
}

TEST_CASE("1% pass flag follows whichever statistic is present", "[gof]") {
    sts::GofReport ks_only;
    ks_only.ks_statistic = 0.1;
    ks_only.critical_1pct = 0.2;
    REQUIRE(ks_only.pass_at_1pct());

    sts::GofReport chi;
    chi.ks_statistic = 0.1;
    chi.critical_1pct = 0.2;
    chi.chi_square = 0.3;
    chi.degrees_of_freedom = 5;
    REQUIRE_FALSE(chi.pass_at_1pct());
}
