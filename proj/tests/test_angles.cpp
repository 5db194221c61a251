#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "sts/angles.hpp"
#include "sts/eta.hpp"
#include "sts/primes.hpp"

#include "oracles.hpp"

using Catch::Approx;
using std::numbers::pi;

namespace {

sts::CoefficientTable weight2_table(long a2) {
    sts::CoefficientTable t;
    t.weight = 2;
    t.n_max = 2;
    t.label = "hand";
    t.coeffs = {mpz_class(0), mpz_class(1), mpz_class(a2)};
    return t;
}

const sts::PrimeTable just_two{{2}, 2};

}  // namespace

TEST_CASE("semicircle density values", "[angles]") {
    REQUIRE(sts::st_density(0.0) == 0.0);
    REQUIRE(sts::st_density(pi) == Approx(0.0).margin(1e-30));
    REQUIRE(sts::st_density(pi / 2) == Approx(0.6366197723675814).margin(1e-15));
    REQUIRE(sts::st_density(pi / 4) == Approx(0.3183098861837907).margin(1e-15));
    REQUIRE_THROWS_AS(sts::st_density(-0.1), sts::domain_error);
    REQUIRE_THROWS_AS(sts::st_density(pi + 0.1), sts::domain_error);
}

TEST_CASE("unfolding map end points and midpoint", "[angles]") {
    REQUIRE(sts::unfold(0.0) == 0.0);
    REQUIRE(sts::unfold(pi) == Approx(1.0).margin(1e-15));
    REQUIRE(sts::unfold(pi / 2) == Approx(0.5).margin(1e-15));
    REQUIRE_THROWS_AS(sts::unfold(-0.1), sts::domain_error);
    REQUIRE_THROWS_AS(sts::unfold(pi + 0.1), sts::domain_error);
}

TEST_CASE("unfolding map is monotone with range [0, 1]", "[angles]") {
    double prev = -1.0;
    for (int i = 0; i <= 10'000; ++i) {
        const double t = pi * i / 10'000;
        const double v = sts::unfold(t);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
        REQUIRE(v >= prev);
        prev = v;
    }
}

TEST_CASE("unfolding map equals the integrated density", "[angles]") {
    for (int i = 0; i <= 1000; ++i) {
        const double t = pi * i / 1000;
        const double quad = oracle::simpson(sts::st_density, 0.0, t, 2000);
        REQUIRE(sts::unfold(t) == Approx(quad).margin(1e-10));
    }
}

TEST_CASE("unfolding map is symmetric about pi/2", "[angles]") {
    for (int i = 0; i <= 1000; ++i) {
        const double t = pi * i / 1000;
        REQUIRE(sts::unfold(pi - t) == Approx(1.0 - sts::unfold(t)).margin(1e-12));
    }
}

TEST_CASE("angle at p=2 for the weight-12 level-1 form", "[angles]") {
    const auto table = sts::eta_product({{{1, 24}}, {}, "c"}, 2);
    const auto s = sts::angle_series(table, just_two);
    REQUIRE(s.records.size() == 1);
    REQUIRE(s.records[0].p == 2);
    REQUIRE(s.records[0].a_p == -24);
    // cos = -24 / (2 * 2^{11/2})
    REQUIRE(s.records[0].cos_theta == Approx(-0.2651650429449553).margin(1e-15));
    REQUIRE(s.records[0].theta == Approx(1.8391714154092523).margin(1e-15));
}

TEST_CASE("weight-2 angles at distinguished coefficients", "[angles]") {
    // a_2 = -2 gives cos = -1/sqrt(2), i.e. theta = 3 pi / 4
    const auto s1 = sts::angle_series(weight2_table(-2), just_two);
    REQUIRE(s1.records[0].theta == Approx(2.356194490192345).margin(1e-15));
    // a_p = 0 sits exactly at the center
    const auto s2 = sts::angle_series(weight2_table(0), just_two);
    REQUIRE(s2.records[0].cos_theta == 0.0);
    REQUIRE(s2.records[0].theta == Approx(pi / 2).margin(1e-15));
}

TEST_CASE("saturated bound maps to the interval ends", "[angles]") {
    // weight 3, p = 2: bound is |a_p| <= 2 p = 4; equality must be accepted
    sts::CoefficientTable t;
    t.weight = 3;
    t.n_max = 2;
    t.coeffs = {mpz_class(0), mpz_class(1), mpz_class(4)};
    REQUIRE(sts::angle_series(t, just_two).records[0].theta == 0.0);
    t.coeffs[2] = -4;
    REQUIRE(sts::angle_series(t, just_two).records[0].theta == Approx(pi).margin(1e-15));
    t.coeffs[2] = 5;  // one beyond the bound
    REQUIRE_THROWS_AS(sts::angle_series(t, just_two), sts::verification_error);
}

TEST_CASE("angle extraction rejects corrupt or undersized tables", "[angles]") {
    REQUIRE_THROWS_AS(sts::angle_series(weight2_table(5), just_two),
                      sts::verification_error);  // 25 > 4 p = 8
    const sts::PrimeTable two_three{{2, 3}, 3};
    REQUIRE_THROWS_AS(sts::angle_series(weight2_table(-2), two_three),
                      sts::config_error);  // 3 beyond n_max = 2
}

TEST_CASE("unfolded series is sorted and measure-preserving at pairs", "[angles]") {
    sts::AngleSeries s;
    s.records.push_back({2, mpz_class(0), std::cos(2 * pi / 3), 2 * pi / 3});
    s.records.push_back({3, mpz_class(0), std::cos(pi / 3), pi / 3});
    const auto u = sts::unfolded_series(s);
    REQUIRE(u.sample_size == 2);
    REQUIRE(u.values.size() == 2);
    REQUIRE(u.values[0] < u.values[1]);  // sorted even though input was not
    REQUIRE(u.values[0] + u.values[1] == Approx(1.0).margin(1e-15));

    sts::AngleSeries empty;
    REQUIRE_THROWS_AS(sts::unfolded_series(empty), sts::insufficient_sample_error);
}

TEST_CASE("two-bin angle histogram matches the density exactly", "[angles]") {
    // theta in {pi/4, 3pi/4}: each bin holds one sample, and the empirical
    // density 0.5/(pi/2) = 1/pi equals rho at both midpoints.
    sts::AngleSeries s;
    s.records.push_back({2, mpz_class(0), 0.0, pi / 4});
    s.records.push_back({3, mpz_class(0), 0.0, 3 * pi / 4});
    const auto h = sts::density_histogram(s, 2);
    REQUIRE(h.counts == std::vector<std::uint64_t>{1, 1});
    REQUIRE(h.density[0] == Approx(1.0 / pi).margin(1e-15));
    REQUIRE(h.density[1] == Approx(1.0 / pi).margin(1e-15));
    REQUIRE(h.reference[0] == Approx(h.density[0]).margin(1e-15));
    REQUIRE(h.reference[1] == Approx(h.density[1]).margin(1e-15));
    REQUIRE(h.underflow == 0);
    REQUIRE(h.overflow == 0);
}

TEST_CASE("empty bins keep a nonzero reference column", "[angles]") {
    sts::AngleSeries s;
    s.records.push_back({2, mpz_class(0), 0.0, pi / 4});
    const auto h = sts::density_histogram(s, 2);
    REQUIRE(h.counts == std::vector<std::uint64_t>{1, 0});
    REQUIRE(h.density[1] == 0.0);
    REQUIRE(h.reference[1] > 0.0);
    REQUIRE_THROWS_AS(sts::density_histogram(s, 1), sts::config_error);
}

TEST_CASE("theta = pi lands in the last bin", "[angles]") {
    sts::AngleSeries s;
    s.records.push_back({2, mpz_class(0), -1.0, pi});
    const auto h = sts::density_histogram(s, 4);
    REQUIRE(h.counts == std::vector<std::uint64_t>{0, 0, 0, 1});
    REQUIRE(h.overflow == 0);
}
