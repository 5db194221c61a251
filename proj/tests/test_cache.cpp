#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "sts/cache.hpp"
#include "sts/eta.hpp"

#include "temp_dir.hpp"

namespace {

mpz_class roundtrip(const mpz_class& v) {
    const auto bytes = sts::encode_int(v);
    return sts::decode_int(bytes.data(), bytes.size());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

sts::EtaProductSpec spec_c() { return {{{1, 24}}, {}, "c"}; }

}  // namespace

TEST_CASE("integer codec roundtrips across widths and signs", "[cache]") {
    const mpz_class big63 = mpz_class(1) << 63;
    const mpz_class big64 = mpz_class(1) << 64;
    mpz_class big30;
    mpz_ui_pow_ui(big30.get_mpz_t(), 10, 30);
    const mpz_class tau_peak("7175681309681468647398886700");

    std::vector<mpz_class> vals{0,    1,    -1,   127,  -127, 128,
                                -128, -129, 255,  -255, 256,  -256};
    for (const mpz_class& w : {big63, big64, big30, tau_peak}) {
        vals.push_back(w);
        vals.push_back(-w);
        vals.push_back(w - 1);
        vals.push_back(1 - w);
    }
    for (const mpz_class& v : vals) REQUIRE(roundtrip(v) == v);

    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        mpz_class v = (mpz_class(rng()) << 64) + mpz_class(rng());
        v >>= (rng() % 120);  // vary the bit length
        if (rng() & 1) v = -v;
        REQUIRE(roundtrip(v) == v);
    }
}

TEST_CASE("integer codec is minimal two's complement", "[cache]") {
    using bytes = std::vector<std::uint8_t>;
    REQUIRE(sts::encode_int(0) == bytes{});
    REQUIRE(sts::encode_int(1) == bytes{0x01});
    REQUIRE(sts::encode_int(-1) == bytes{0xFF});
    REQUIRE(sts::encode_int(127) == bytes{0x7F});
    REQUIRE(sts::encode_int(128) == bytes{0x80, 0x00});  // sign pad
    REQUIRE(sts::encode_int(-128) == bytes{0x80});       // fits one byte
    REQUIRE(sts::encode_int(-129) == bytes{0x7F, 0xFF});
    REQUIRE(sts::encode_int(255) == bytes{0xFF, 0x00});
    REQUIRE(sts::encode_int(-255) == bytes{0x01, 0xFF});
    REQUIRE(sts::encode_int(256) == bytes{0x00, 0x01});
    REQUIRE(sts::encode_int(-256) == bytes{0x00, 0xFF});
}

TEST_CASE("cache files roundtrip a coefficient table", "[cache]") {
    TempDir tmp("cache-rt");
    const auto t = sts::eta_product(spec_c(), 500);
    const auto path = tmp.path / "c.coeffs";
    sts::write_cache(path, t);

    const auto r = sts::read_cache(path);
    REQUIRE(r.label == t.label);
    REQUIRE(r.weight == t.weight);
    REQUIRE(r.n_max == t.n_max);
    REQUIRE(r.bad_primes == t.bad_primes);
    REQUIRE(r.coeffs == t.coeffs);

    // bad primes survive the header
    const auto tb = sts::eta_product({{{2, 2}, {10, 2}}, {2, 5}, "b"}, 60);
    const auto pb = tmp.path / "b.coeffs";
    sts::write_cache(pb, tb);
    REQUIRE(sts::read_cache(pb).bad_primes == std::set<std::uint64_t>{2, 5});

    // writing is deterministic, byte for byte
    const auto path2 = tmp.path / "c2.coeffs";
    sts::write_cache(path2, t);
    REQUIRE(slurp(path) == slurp(path2));
}

TEST_CASE("damaged cache files are refused", "[cache]") {
    TempDir tmp("cache-bad");

    REQUIRE_THROWS_AS(sts::read_cache(tmp.path / "missing.coeffs"), sts::io_error);

    const auto bad_magic = tmp.path / "magic.coeffs";
    std::ofstream(bad_magic) << "STSPACING-COEFFS 9\nlabel x\n";
    REQUIRE_THROWS_AS(sts::read_cache(bad_magic), sts::io_error);

    const auto t = sts::eta_product(spec_c(), 100);
    const auto good = tmp.path / "good.coeffs";
    sts::write_cache(good, t);
    const std::string full = slurp(good);

    const auto cut = tmp.path / "cut.coeffs";
    std::ofstream(cut, std::ios::binary) << full.substr(0, full.size() / 2);
    REQUIRE_THROWS_AS(sts::read_cache(cut), sts::io_error);

    const auto headerless = tmp.path / "headerless.coeffs";
    std::ofstream(headerless) << sts::cache_magic << "\nlabel x\nweight 12\n";
    REQUIRE_THROWS_AS(sts::read_cache(headerless), sts::io_error);

    sts::CoefficientTable po;
    po.prime_only = true;
    po.n_max = 3;
    po.coeffs.assign(4, mpz_class(0));
    REQUIRE_THROWS_AS(sts::write_cache(tmp.path / "po.coeffs", po), sts::config_error);
}

TEST_CASE("cache file names are keyed and sanitized", "[cache]") {
    REQUIRE(sts::cache_file_name("a", 17389) == "a-n17389.coeffs");
    REQUIRE(sts::cache_file_name("a b/c", 7) == "a_b_c-n7.coeffs");
    REQUIRE(sts::cache_file_name("", 3) == "table-n3.coeffs");
}

TEST_CASE("load_or_compute persists on miss and trusts the cache on hit", "[cache]") {
    TempDir tmp("cache-loc");
    const auto spec = spec_c();
    const auto path = tmp.path / sts::cache_file_name("c", 50);

    // empty cache_dir: straight computation, nothing persisted
    const auto t0 = sts::load_or_compute(spec, 50, "");
    REQUIRE(t0.at(2) == -24);
    REQUIRE_FALSE(std::filesystem::exists(path));

    // miss: computes and writes
    const auto t1 = sts::load_or_compute(spec, 50, tmp.path);
    REQUIRE(std::filesystem::exists(path));
    REQUIRE(t1.coeffs == t0.coeffs);

    // hit: plant a wrong value in the file; seeing it back proves the table
    // was read, not recomputed
    auto poisoned = sts::read_cache(path);
    poisoned.coeffs[2] += 100;
    sts::write_cache(path, poisoned);
    const auto t2 = sts::load_or_compute(spec, 50, tmp.path);
    REQUIRE(t2.at(2) == -24 + 100);

    // a different n_max is a different key: full recompute, correct values
    const auto t3 = sts::load_or_compute(spec, 60, tmp.path);
    REQUIRE(t3.at(2) == -24);

    // key mismatch inside the file is an error, not silent acceptance
    auto wrong = sts::read_cache(path);
    wrong.label = "x";
    sts::write_cache(path, wrong);
    REQUIRE_THROWS_AS(sts::load_or_compute(spec, 50, tmp.path), sts::io_error);
}
