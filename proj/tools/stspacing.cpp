// stspacing — Sato–Tate angles and nearest-neighbor spacing statistics.
//
// Subcommands:
//   coeffs <source> --n-max N    expand + cache exact Fourier coefficients
//   verify <source> [--n-max N]  multiplicativity / recursion / cross-oracle checks
//   run <config-file>            full pipeline from a key-value config file
//   preset <a|b|c>               full pipeline on a built-in example dataset
//
// Exit codes: 0 success, 1 config error, 2 verification failure,
// 3 statistical gate failure (--strict-stats), 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sts/pipeline.hpp"
#include "sts/presets.hpp"

namespace {

sts::RunConfig load_source(const std::string& source) {
    if (sts::is_preset_name(source)) return sts::preset(source);
    return sts::parse_config_file(source);
}

std::filesystem::path resolve_cache_dir(const std::string& flag_value,
                                        const std::filesystem::path& config_value,
                                        const std::filesystem::path& fallback) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    const auto env = sts::env_cache_dir();
    if (!env.empty()) return env;
    return fallback;
}

struct RunFlags {
    std::uint64_t num_primes = 0;
    std::uint64_t prime_limit = 0;
    std::vector<unsigned> k_list;
    std::size_t spacing_bins = 0;
    std::size_t angle_bins = 0;
    double spacing_range = 0.0;
    bool pair_correlation = false;
    std::string out;
    std::string cache;
    bool strict_stats = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--num-primes", f.num_primes, "use the first N primes");
    cmd->add_option("--prime-limit", f.prime_limit, "use all primes p <= X");
    cmd->add_option("--k", f.k_list, "spacing orders (repeatable; default 0 1 2)");
    cmd->add_option("--bins", f.spacing_bins, "spacing histogram bins (default 50)");
    cmd->add_option("--angle-bins", f.angle_bins, "angle histogram bins (default 40)");
    cmd->add_option("--spacing-range", f.spacing_range,
                    "spacing histogram upper edge (default 6, or 8 for k=2)");
    cmd->add_flag("--pair-correlation", f.pair_correlation,
                  "also emit the pair correlation histogram");
    cmd->add_option("--out", f.out, "output directory (default .)");
    cmd->add_option("--cache", f.cache, "coefficient cache directory");
    cmd->add_flag("--strict-stats", f.strict_stats,
                  "exit 3 if any statistical gate fails at its threshold");
}

void apply_run_flags(const CLI::App* cmd, const RunFlags& f, sts::RunConfig& cfg) {
    if (cmd->count("--num-primes") && cmd->count("--prime-limit"))
        throw sts::config_error("give only one of --num-primes / --prime-limit");
    if (cmd->count("--num-primes")) {
        cfg.num_primes = f.num_primes;
        cfg.prime_limit.reset();
    }
    if (cmd->count("--prime-limit")) {
        cfg.prime_limit = f.prime_limit;
        cfg.num_primes.reset();
    }
    if (cmd->count("--k")) cfg.k_list = f.k_list;
    if (cmd->count("--bins")) cfg.spacing_bins = f.spacing_bins;
    if (cmd->count("--angle-bins")) cfg.angle_bins = f.angle_bins;
    if (cmd->count("--spacing-range")) cfg.spacing_range = f.spacing_range;
    if (f.pair_correlation) cfg.pair_correlation = true;
    if (cmd->count("--out")) cfg.output_dir = f.out;
    cfg.cache_dir = resolve_cache_dir(f.cache, cfg.cache_dir, cfg.output_dir / "cache");
    if (f.strict_stats) cfg.strict_stats = true;
}

int cmd_coeffs(const std::string& source, std::uint64_t n_max, const std::string& cache_flag) {
    if (n_max < 1) throw sts::empty_range_error("coeffs: --n-max must be positive");
    sts::RunConfig cfg = load_source(source);
    if (!cfg.eta)
        throw sts::config_error("coeffs: source '" + source + "' has no eta factors");

    const auto cache_dir = resolve_cache_dir(cache_flag, cfg.cache_dir, "cache");
    const sts::CoefficientTable table = sts::load_or_compute(*cfg.eta, n_max, cache_dir);

    const std::size_t shown = std::min<std::size_t>(10, table.n_max);
    std::cout << "a_n, n = 1.." << shown << ":";
    for (std::size_t n = 1; n <= shown; ++n) std::cout << ' ' << table.at(n).get_str();
    std::cout << '\n';

    if (n_max >= 2) {
        const sts::PrimeTable primes = sts::sieve(n_max);
        mpz_class pk;
        std::size_t checked = 0;
        for (std::uint64_t p : primes.primes) {
            mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), table.weight - 1);
            if (table.at(p) * table.at(p) > 4 * pk)
                throw sts::verification_error("coefficient bound violated at p=" + std::to_string(p));
            ++checked;
        }
        std::cout << "bound check: |a_p| <= 2 p^{(w-1)/2} at all " << checked
                  << " primes <= " << n_max << '\n';
    }
    std::cout << "cache: " << (cache_dir / sts::cache_file_name(cfg.eta->label, n_max)).string()
              << '\n';
    return 0;
}

int cmd_verify(const std::string& source, std::uint64_t n_max_flag, bool have_n_max,
               const std::string& cache_flag) {
    sts::RunConfig cfg = load_source(source);

    std::uint64_t n_max = 0;
    if (have_n_max) n_max = n_max_flag;
    else if (cfg.num_primes) n_max = sts::first_n_primes(*cfg.num_primes).limit;
    else if (cfg.prime_limit) n_max = *cfg.prime_limit;
    else throw sts::config_error("verify: give --n-max or a source with a prime range");
    if (n_max < 2) throw sts::empty_range_error("verify: n_max must be at least 2");

    sts::ordered_json out;
    out["source"] = cfg.label;
    out["n_max"] = n_max;
    bool ok = true;

    std::optional<sts::CoefficientTable> table;
    if (cfg.eta) {
        const auto cache_dir = resolve_cache_dir(cache_flag, cfg.cache_dir, "cache");
        table = sts::load_or_compute(*cfg.eta, n_max, cache_dir);

        const sts::ConsistencyReport mult = sts::check_multiplicativity(*table);
        sts::ordered_json jm;
        jm["checked_pairs"] = mult.checked_pairs;
        jm["max_index"] = mult.max_index;
        jm["violations"] = sts::ordered_json::array();
        for (const auto& v : mult.violations)
            jm["violations"].push_back({{"indices", v.indices},
                                        {"expected", v.expected.get_str()},
                                        {"actual", v.actual.get_str()}});
        out["multiplicativity"] = jm;
        ok = ok && mult.passed();

        sts::ordered_json jr;
        jr["checked_prime_powers"] = 0;
        jr["violations"] = sts::ordered_json::array();
        std::size_t checked = 0;
        for (std::uint64_t p : sts::sieve(n_max).primes) {
            if (p * p > n_max) break;
            if (table->bad_primes.count(p)) continue;
            const sts::ConsistencyReport rec = sts::check_hecke_recursion(*table, p);
            checked += rec.checked_pairs;
            for (const auto& v : rec.violations)
                jr["violations"].push_back({{"indices", v.indices},
                                            {"expected", v.expected.get_str()},
                                            {"actual", v.actual.get_str()}});
            ok = ok && rec.passed();
        }
        jr["checked_prime_powers"] = checked;
        out["hecke_recursion"] = jr;

        const sts::BadPrimeSurvey survey = sts::survey_bad_primes(*table);
        sts::ordered_json jb = sts::ordered_json::array();
        for (const auto& [p, ap] : survey.coefficients)
            jb.push_back({{"p", p}, {"a_p", ap.get_str()}});
        out["bad_primes"] = {{"coefficients", jb},
                             {"weight2_dichotomy", survey.weight2_dichotomy}};
    }

    if (cfg.curve) {
        cfg.curve->validate();
        sts::ordered_json jc;
        jc["checked_primes"] = 0;
        jc["mismatches"] = sts::ordered_json::array();
        std::size_t checked = 0;
        for (std::uint64_t p : sts::sieve(n_max).primes) {
            if (!cfg.curve->good_reduction(p)) continue;
            const long a = sts::trace_ap(*cfg.curve, p);
            ++checked;
            if (table && table->at(p) != a) {
                jc["mismatches"].push_back({{"p", p},
                                            {"eta", table->at(p).get_str()},
                                            {"point_count", a}});
                ok = false;
            }
        }
        jc["checked_primes"] = checked;
        out[table ? "cross_check" : "point_count_survey"] = jc;
    }

    out["ok"] = ok;
    std::cout << out.dump(2) << '\n';
    return ok ? 0 : 2;
}

void print_gof_line(const char* name, const sts::GofReport& r, bool chi) {
    std::cout << name << ": ";
    if (chi)
        std::cout << "chi2=" << r.chi_square << " dof=" << r.degrees_of_freedom;
    else
        std::cout << "KS=" << r.ks_statistic;
    std::cout << " (5% crit " << r.critical_5pct << ") "
              << (r.pass_at_5pct ? "pass" : "FAIL") << '\n';
}

int cmd_run(sts::RunConfig cfg, const CLI::App* cmd, const RunFlags& flags) {
    apply_run_flags(cmd, flags, cfg);
    const sts::PipelineResult res = sts::run_pipeline(cfg);

    std::cout << "run '" << cfg.label << "': " << res.primes.count()
              << " primes, X=" << res.primes.limit << '\n';
    if (res.angle_chi2) print_gof_line("angle density", *res.angle_chi2, true);
    else std::cout << "angle density: too few samples for chi-square\n";
    print_gof_line("unfolded uniformity", res.uniform_ks, false);
    for (const auto& fig : res.figures) {
        std::cout << "spacing k=" << fig.k << ": KS=" << fig.ks.ks_statistic
                  << " mean=" << fig.mean << " (expect " << fig.k + 1.0 << " +- "
                  << fig.mean_tolerance_value << ") "
                  << (fig.ks.pass_at_5pct && fig.mean_pass ? "pass" : "FAIL") << '\n';
    }
    std::cout << "stats gates: " << (res.stats_pass ? "pass" : "FAIL") << '\n'
              << "artifacts: " << cfg.output_dir.string() << " (" << res.files.size()
              << " files)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sato-Tate angle and nearest-neighbor spacing statistics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stspacing 1.0.0");

    auto* coeffs = app.add_subcommand("coeffs", "expand and cache exact Fourier coefficients");
    std::string co_source;
    std::uint64_t co_nmax = 0;
    std::string co_cache;
    coeffs->add_option("source", co_source, "preset name (a|b|c) or config file")->required();
    coeffs->add_option("--n-max", co_nmax, "expansion order")->required();
    coeffs->add_option("--cache", co_cache, "cache directory");

    auto* verify = app.add_subcommand("verify", "consistency checks on coefficient tables");
    std::string ve_source;
    std::uint64_t ve_nmax = 0;
    std::string ve_cache;
    verify->add_option("source", ve_source, "preset name (a|b|c) or config file")->required();
    verify->add_option("--n-max", ve_nmax, "check up to this index");
    verify->add_option("--cache", ve_cache, "cache directory");

    auto* run = app.add_subcommand("run", "full pipeline from a config file");
    std::string run_config;
    run->add_option("config", run_config, "key-value config file")->required();
    RunFlags run_flags;
    add_run_flags(run, run_flags);

    auto* pre = app.add_subcommand("preset", "full pipeline on a built-in dataset");
    std::string pre_name;
    pre->add_option("name", pre_name, "a, b, or c")->required();
    RunFlags pre_flags;
    add_run_flags(pre, pre_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*coeffs) return cmd_coeffs(co_source, co_nmax, co_cache);
        if (*verify)
            return cmd_verify(ve_source, ve_nmax, verify->count("--n-max") > 0, ve_cache);
        if (*run) return cmd_run(sts::parse_config_file(run_config), run, run_flags);
        if (*pre) return cmd_run(sts::preset(pre_name), pre, pre_flags);
    } catch (const sts::stats_error& e) {
        std::cerr << "stats: " << e.what() << '\n';
        return 3;
    } catch (const sts::io_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const sts::verification_error& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return 2;
    } catch (const sts::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
