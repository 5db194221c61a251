#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sts/angles.hpp"
#include "sts/cache.hpp"
#include "sts/config.hpp"
#include "sts/csv.hpp"
#include "sts/curve.hpp"
#include "sts/errors.hpp"
#include "sts/eta.hpp"
#include "sts/gof.hpp"
#include "sts/hecke.hpp"
#include "sts/histogram.hpp"
#include "sts/primes.hpp"
#include "sts/spacings.hpp"

namespace sts {

using ordered_json = nlohmann::ordered_json;

// One spacing order's worth of outputs. chi2 is absent when every merged bin
// expects fewer than 5 counts (tiny runs).
struct SpacingFigure {
    unsigned k = 0;
    SpacingSample sample;
    Histogram hist;
    GofReport ks;
    std::optional<GofReport> chi2;
    double mean = 0.0;
    double mean_tolerance_value = 0.0;
    bool mean_pass = false;
};

struct PipelineResult {
    RunConfig config;
    PrimeTable primes;
    CoefficientTable table;
    AngleSeries angles;
    Histogram angle_hist;
    std::optional<GofReport> angle_chi2;
    UnfoldedSeries unfolded;
    GofReport uniform_ks;
    std::vector<SpacingFigure> figures;
    std::optional<Histogram> pair_corr;
    ordered_json report;
    std::vector<std::filesystem::path> files;
    bool stats_pass = false;  // every conjecture-level gate at its threshold
};

namespace detail {

// Coefficients from point counting alone; defined only at prime indices.
// Every prime of bad reduction must lie beyond the range — those coefficients
// exist only in an eta expansion.
inline CoefficientTable curve_prime_table(const CurveSpec& curve, const PrimeTable& primes) {
    const auto bad = curve.bad_primes();
    for (std::uint64_t p : bad)
        if (p <= primes.limit)
            throw config_error("curve '" + curve.label + "' has bad reduction at p=" +
                               std::to_string(p) +
                               " inside the prime range; supply eta factors for this source");
    CoefficientTable t;
    t.weight = 2;
    t.bad_primes.insert(bad.begin(), bad.end());
    t.n_max = primes.limit;
    t.label = curve.label;
    t.prime_only = true;
    t.coeffs.assign(t.n_max + 1, mpz_class(0));
    t.coeffs[1] = 1;
    for (std::uint64_t p : primes.primes) t.coeffs[p] = trace_ap(curve, p);
    return t;
}

inline void cross_check_sources(const CurveSpec& curve, const CoefficientTable& table,
                                const PrimeTable& primes) {
    for (std::uint64_t p : primes.primes) {
        if (!curve.good_reduction(p)) continue;
        const long a = trace_ap(curve, p);
        if (table.at(p) != a)
            throw verification_error(
                "coefficient cross-check failed at p=" + std::to_string(p) +
                ": eta table gives " + table.at(p).get_str() +
                ", point count gives " + std::to_string(a));
    }
}

inline ordered_json ks_report_json(const GofReport& r) {
    return ordered_json{{"ks_statistic", r.ks_statistic},
                        {"sample_mean", r.sample_mean},
                        {"sample_count", r.sample_count},
                        {"critical_5pct", r.critical_5pct},
                        {"critical_1pct", r.critical_1pct},
                        {"pass_at_5pct", r.pass_at_5pct},
                        {"pass_at_1pct", r.pass_at_1pct()}};
}

inline ordered_json chi2_report_json(const std::optional<GofReport>& r) {
    if (!r) return ordered_json(nullptr);
    return ordered_json{{"chi_square", r->chi_square},
                        {"degrees_of_freedom", r->degrees_of_freedom},
                        {"sample_count", r->sample_count},
                        {"critical_5pct", r->critical_5pct},
                        {"critical_1pct", r->critical_1pct},
                        {"pass_at_5pct", r->pass_at_5pct},
                        {"pass_at_1pct", r->pass_at_1pct()}};
}

inline ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["label"] = cfg.label;
    if (cfg.eta) {
        std::string factors;
        for (const auto& f : cfg.eta->factors) {
            if (!factors.empty()) factors += ' ';
            factors += std::to_string(f.dilation) + "^" + std::to_string(f.exponent);
        }
        j["eta_factors"] = factors;
        j["eta_bad_primes"] = std::vector<std::uint64_t>(cfg.eta->bad_primes.begin(),
                                                         cfg.eta->bad_primes.end());
    } else {
        j["eta_factors"] = nullptr;
    }
    if (cfg.curve) {
        j["curve"] = {cfg.curve->a1, cfg.curve->a2, cfg.curve->a3, cfg.curve->a4, cfg.curve->a6};
        j["conductor"] = cfg.curve->conductor;
    } else {
        j["curve"] = nullptr;
    }
    j["cross_check"] = cfg.cross_check;
    if (cfg.num_primes) j["num_primes"] = *cfg.num_primes;
    if (cfg.prime_limit) j["prime_limit"] = *cfg.prime_limit;
    j["k_list"] = cfg.k_list;
    j["angle_bins"] = cfg.angle_bins;
    j["spacing_bins"] = cfg.spacing_bins;
    if (cfg.spacing_range) j["spacing_range"] = *cfg.spacing_range;
    else j["spacing_range"] = nullptr;
    j["pair_correlation"] = cfg.pair_correlation;
    j["pair_bins"] = cfg.pair_bins;
    j["pair_range"] = cfg.pair_range;
    j["output_dir"] = cfg.output_dir.string();
    j["cache_dir"] = cfg.cache_dir.string();
    j["strict_stats"] = cfg.strict_stats;
    return j;
}

// The report contract: these keys must exist with these JSON types. Checked
// before every write so a malformed report can never be emitted.
inline const ordered_json& report_schema() {
    static const ordered_json schema = {
        {"name", "stspacing-report"},
        {"version", 1},
        {"required",
         {{"schema", "object"},
          {"config", "object"},
          {"figures", "object"},
          {"checksums", "object"},
          {"stats_pass", "boolean"}}},
        {"figure_required",
         {{"angle_density", "object|null"},  // null when too few samples for Pearson
          {"unfolded_uniformity", "object"}}}};
    return schema;
}

inline void validate_report(const ordered_json& report) {
    auto type_ok = [](const ordered_json& v, const std::string& t) {
        if (t == "object") return v.is_object();
        if (t == "boolean") return v.is_boolean();
        if (t == "object|null") return v.is_object() || v.is_null();
        return false;
    };
    const auto& schema = report_schema();
    for (const auto& [key, type] : schema.at("required").items())
        if (!report.contains(key) || !type_ok(report.at(key), type.get<std::string>()))
            throw internal_error("report schema violation: missing or mistyped key '" + key + "'");
    const auto& figures = report.at("figures");
    for (const auto& [key, type] : schema.at("figure_required").items())
        if (!figures.contains(key) || !type_ok(figures.at(key), type.get<std::string>()))
            throw internal_error("report schema violation: missing figure '" + key + "'");
}

} // namespace detail

// Full run: primes -> coefficients -> angles -> unfolding -> spacings ->
// goodness of fit, with the artifact set written to config.output_dir:
// angles.csv, unfolded.csv, density_hist.csv, spacing_k{K}.csv per order,
// pair_correlation.csv (optional), report.json.
inline PipelineResult run_pipeline(const RunConfig& cfg) {
    cfg.validate();

    PipelineResult res;
    res.config = cfg;

    res.primes = cfg.num_primes ? first_n_primes(*cfg.num_primes) : sieve(*cfg.prime_limit);

    if (cfg.eta) {
        res.table = load_or_compute(*cfg.eta, res.primes.limit, cfg.cache_dir);
        if (cfg.cross_check) detail::cross_check_sources(*cfg.curve, res.table, res.primes);
    } else {
        res.table = detail::curve_prime_table(*cfg.curve, res.primes);
    }

    res.angles = angle_series(res.table, res.primes);
    res.angle_hist = density_histogram(res.angles, cfg.angle_bins);
    try {
        res.angle_chi2 = chi_square_test(res.angle_hist, res.angles.records.size(),
                                         [](double t) { return unfold(t); },
                                         /*open_tail=*/false);
    } catch (const insufficient_sample_error&) {
        res.angle_chi2.reset();  // too few angles for a meaningful Pearson test
    }

    res.unfolded = unfolded_series(res.angles);
    res.uniform_ks = uniformity_ks(res.unfolded);

    for (unsigned k : cfg.k_list) {
        SpacingFigure fig;
        fig.k = k;
        fig.sample = spacings(res.unfolded, k);  // insufficient-sample propagates
        const double range = cfg.spacing_range ? *cfg.spacing_range : default_spacing_range(k);
        fig.hist = spacing_histogram(fig.sample, cfg.spacing_bins, range);
        fig.ks = ks_test(fig.sample);
        try {
            fig.chi2 = chi_square_test(fig.hist, fig.sample.values.size(),
                                       [k](double s) { return poisson_cdf(k, s); },
                                       /*open_tail=*/true);
        } catch (const insufficient_sample_error&) {
            fig.chi2.reset();
        }
        fig.mean = fig.ks.sample_mean;
        fig.mean_tolerance_value = mean_tolerance(k, fig.sample.values.size());
        fig.mean_pass = std::abs(fig.mean - (k + 1.0)) <= fig.mean_tolerance_value;
        res.figures.push_back(std::move(fig));
    }

    if (cfg.pair_correlation)
        res.pair_corr = pair_correlation(res.unfolded, cfg.pair_bins, cfg.pair_range);

    // Conjecture-level gates: angle chi-square and all KS distances at the 1%
    // asymptotic critical value, spacing means inside 4 standard errors.
    res.stats_pass = res.angle_chi2 && res.angle_chi2->pass_at_1pct() &&
                     res.uniform_ks.pass_at_1pct();
    for (const auto& fig : res.figures)
        res.stats_pass = res.stats_pass && fig.ks.pass_at_1pct() && fig.mean_pass;

    // ---- artifacts ----
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (!std::filesystem::is_directory(cfg.output_dir))
        throw io_error("cannot create output directory: " + cfg.output_dir.string());

    auto emit = [&](const std::string& name, auto&& writer) {
        const std::filesystem::path p = cfg.output_dir / name;
        writer(p);
        res.files.push_back(p);
    };
    emit("angles.csv", [&](const auto& p) { write_angles_csv(p, res.angles); });
    emit("unfolded.csv", [&](const auto& p) { write_unfolded_csv(p, res.unfolded); });
    emit("density_hist.csv", [&](const auto& p) { write_histogram_csv(p, res.angle_hist); });
    for (const auto& fig : res.figures)
        emit("spacing_k" + std::to_string(fig.k) + ".csv",
             [&](const auto& p) { write_histogram_csv(p, fig.hist); });
    if (res.pair_corr)
        emit("pair_correlation.csv", [&](const auto& p) { write_histogram_csv(p, *res.pair_corr); });

    ordered_json figures;
    {
        ordered_json fig1 = detail::chi2_report_json(res.angle_chi2);
        if (fig1.is_object()) fig1["bins"] = cfg.angle_bins;
        figures["angle_density"] = std::move(fig1);
        figures["unfolded_uniformity"] = detail::ks_report_json(res.uniform_ks);
        for (const auto& fig : res.figures) {
            ordered_json f;
            f["k"] = fig.k;
            f["ks"] = detail::ks_report_json(fig.ks);
            f["chi_square"] = detail::chi2_report_json(fig.chi2);
            f["sample_mean"] = fig.mean;
            f["mean_expected"] = fig.k + 1.0;
            f["mean_tolerance"] = fig.mean_tolerance_value;
            f["mean_pass"] = fig.mean_pass;
            figures["spacing_k" + std::to_string(fig.k)] = std::move(f);
        }
        if (res.pair_corr) {
            double max_dev = 0.0;
            for (double d : res.pair_corr->density)
                max_dev = std::max(max_dev, std::abs(d - 1.0));
            figures["pair_correlation"] = ordered_json{{"bins", res.pair_corr->bins()},
                                                       {"range", cfg.pair_range},
                                                       {"max_abs_deviation_from_unit", max_dev}};
        }
    }

    ordered_json checksums;
    for (const auto& f : res.files) checksums[f.filename().string()] = file_checksum(f);

    res.report["schema"] = detail::report_schema();
    res.report["config"] = detail::config_json(cfg);
    res.report["figures"] = std::move(figures);
    res.report["checksums"] = std::move(checksums);
    res.report["stats_pass"] = res.stats_pass;
    detail::validate_report(res.report);

    {
        const std::filesystem::path p = cfg.output_dir / "report.json";
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open output file: " + p.string());
        out << res.report.dump(2) << '\n';
        if (!out) throw io_error("write failed: " + p.string());
        res.files.push_back(p);
    }

    if (cfg.strict_stats && !res.stats_pass)
        throw stats_error("statistical acceptance gates failed (see report.json in " +
                          cfg.output_dir.string() + ")");
    return res;
}

} // namespace sts
