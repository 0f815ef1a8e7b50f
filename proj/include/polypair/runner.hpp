#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "polypair/clumps.hpp"
#include "polypair/complex.hpp"
#include "polypair/critical.hpp"
#include "polypair/errors.hpp"
#include "polypair/io.hpp"
#include "polypair/measures.hpp"
#include "polypair/parallel.hpp"
#include "polypair/polynomial.hpp"
#include "polypair/statistics.hpp"
#include "polypair/transport.hpp"

namespace polypair {

/// Everything a batch run needs, mirrored one-to-one by the CLI flags and the
/// JSON config file.  All randomness flows from `seeds`; nothing is ever
/// time-derived, so identical configs produce byte-identical outputs (unless
/// `timing` is set, which fills wall_time_ms with real measurements).
struct ExperimentConfig {
    std::string command;                  ///< sample|solve|pair|wasserstein|clumps|fluctuate|locallaw|trace-check|heavytail
    std::string measure = "uniform-disk"; ///< name[:params], see parse_measure
    std::size_t n = 0;                    ///< root count when sampling from the measure
    std::vector<std::uint64_t> seeds;
    std::vector<Complex> xi;       ///< deterministic roots to append / evaluation points
    std::string roots_file;        ///< alternative root source (CSV)
    std::string out;               ///< output path
    std::string format = "jsonl";  ///< csv | jsonl
    double tol = 1e-13;            ///< solver correction tolerance
    int max_iter = 200;
    std::size_t trials = 0;        ///< expands the first seed into a contiguous seed range
    unsigned jobs = 1;             ///< concurrency bound for seed cells
    std::string regime = "inside"; ///< inside | outside (fluctuate)
    Complex phi_center{0.4, 0.0};  ///< bump test function (locallaw)
    double phi_radius = 0.3;
    double phi_amplitude = 1.0;
    std::vector<Complex> t_weights; ///< heavytail coefficient list
    bool timing = false;            ///< record real wall times (breaks byte-identity)
};

/// Parses a measure spec: "uniform-disk" (unit disk at 0), "uniform-disk:cx,cy,r",
/// "two-disks", "gaussian", "unit-circle".
inline Measure parse_measure(const std::string& spec) {
    std::string name = spec, params;
    if (const std::size_t colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        params = spec.substr(colon + 1);
    }
    if (name == "uniform-disk") {
        if (params.empty()) return Measure::uniform_disk(Complex{0.0, 0.0}, 1.0);
        const std::size_t c1 = params.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                       : params.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            params.find(',', c2 + 1) != std::string::npos)
            throw ArgumentError("measure: uniform-disk params must be 'cx,cy,r'");
        const Complex c = parse_complex_pair(params.substr(0, c2));
        const double r = detail::parse_double_field(params.substr(c2 + 1), 0);
        return Measure::uniform_disk(c, r);
    }
    if (!params.empty())
        throw ArgumentError("measure: '" + name + "' takes no parameters");
    if (name == "two-disks") return Measure::two_disks();
    if (name == "gaussian") return Measure::complex_gaussian();
    if (name == "unit-circle") return Measure::unit_circle();
    throw ArgumentError("measure: unknown spec '" + spec +
                        "' (expected uniform-disk[:cx,cy,r], two-disks, gaussian, unit-circle)");
}

namespace detail {

/// "out.csv", seed 7 -> "out_seed7.csv" (suffix inserted before the extension)
/// when a run has several per-seed files; single-cell runs keep the bare path.
inline std::string seed_path(const std::string& out, std::uint64_t seed, bool multi) {
    if (!multi) return out;
    const std::size_t slash = out.find_last_of('/');
    const std::size_t dot = out.find_last_of('.');
    const std::string tag = "_seed" + std::to_string(seed);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + tag;
    return out.substr(0, dot) + tag + out.substr(dot);
}

inline nlohmann::json json_complex(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json json_points(const std::vector<Complex>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Complex& p : pts) arr.push_back(json_complex(p));
    return arr;
}

} // namespace detail

/// Executes one batch experiment: validates the config, runs one cell per
/// seed (concurrently up to `jobs`, merged back in seed order), and writes
/// the output file(s).  Throws typed errors; see run_with_exit_code for the
/// process-level mapping.
inline void run(const ExperimentConfig& cfg) {
    static const std::vector<std::string> kCommands = {
        "sample", "solve",    "pair",     "wasserstein", "clumps",
        "fluctuate", "locallaw", "trace-check", "heavytail"};
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw ArgumentError("run: unknown command '" + cfg.command + "'");
    if (cfg.format != "csv" && cfg.format != "jsonl")
        throw ArgumentError("run: format must be csv or jsonl, got '" + cfg.format + "'");
    if (cfg.out.empty()) throw ArgumentError("run: --out is required");
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol))
        throw ArgumentError("run: --tol must be positive and finite");
    if (cfg.max_iter < 1) throw ArgumentError("run: --max-iter must be >= 1");
    for (const Complex& x : cfg.xi) require_finite(x, "xi");
    for (const Complex& t : cfg.t_weights) require_finite(t, "t weight");

    const Measure mu = parse_measure(cfg.measure);

    // Root sourcing: exactly one of (measure + n, roots_file).
    const bool from_file = !cfg.roots_file.empty();
    const bool measure_only =
        cfg.command == "sample" || cfg.command == "fluctuate" || cfg.command == "heavytail";
    if (from_file && measure_only)
        throw ArgumentError("run: " + cfg.command + " draws from the measure; --roots-file not allowed");
    if (from_file && cfg.n > 0)
        throw ArgumentError("run: give either --n (measure sampling) or --roots-file, not both");
    if (!from_file && cfg.n < 2)
        throw ArgumentError("run: need --n >= 2 (or --roots-file)");

    // Seed resolution: --trials T expands the first seed into T consecutive
    // seeds; a file-sourced run is deterministic and gets a single cell.
    std::vector<std::uint64_t> seeds = cfg.seeds;
    if (cfg.trials > 0) {
        if (seeds.size() > 1)
            throw ArgumentError("run: --trials expands one base seed; give at most one --seed");
        const std::uint64_t base = seeds.empty() ? 1 : seeds[0];
        seeds.clear();
        for (std::size_t k = 0; k < cfg.trials; ++k) seeds.push_back(base + k);
    }
    if (!from_file && seeds.empty())
        throw ArgumentError("run: stochastic commands need --seed/--seeds (or --trials)");
    if (from_file && seeds.empty()) seeds.push_back(0);

    if (cfg.command == "fluctuate" && cfg.xi.size() != 1)
        throw ArgumentError("run: fluctuate needs exactly one --xi");
    if (cfg.command == "fluctuate" && cfg.regime != "inside" && cfg.regime != "outside")
        throw ArgumentError("run: --regime must be inside or outside");
    if (cfg.command == "heavytail" && cfg.xi.empty())
        throw ArgumentError("run: heavytail needs at least one --xi");

    SolveOptions sopts;
    sopts.tol_correction = cfg.tol;
    sopts.tol_residual = cfg.tol * 100.0;
    sopts.max_iter = cfg.max_iter;

    std::optional<RootSet> file_roots;
    if (from_file) {
        RootSet rs = ingest_roots(cfg.roots_file);
        if (!cfg.xi.empty()) {
            std::vector<Complex> pts = rs.points;
            pts.insert(pts.end(), cfg.xi.begin(), cfg.xi.end());
            rs = make_root_set(std::move(pts));
        }
        file_roots = std::move(rs);
    }

    const bool multi = seeds.size() > 1;
    const unsigned jobs = cfg.jobs == 0 ? 1 : cfg.jobs;

    // Shared params echo (identical across cells).
    nlohmann::json params;
    params["measure"] = from_file ? std::string("file:") + cfg.roots_file : cfg.measure;
    params["n"] = cfg.n;
    params["tol"] = cfg.tol;
    params["max_iter"] = cfg.max_iter;
    params["format"] = cfg.format;
    if (!cfg.xi.empty()) params["xi"] = detail::json_points(cfg.xi);
    if (cfg.command == "fluctuate") params["regime"] = cfg.regime;
    if (cfg.command == "locallaw") {
        params["phi_center"] = detail::json_complex(cfg.phi_center);
        params["phi_radius"] = cfg.phi_radius;
        params["phi_amplitude"] = cfg.phi_amplitude;
    }
    if (cfg.command == "heavytail") params["t"] = detail::json_points(cfg.t_weights);

    const auto roots_for = [&](std::uint64_t seed) -> RootSet {
        if (file_roots) return *file_roots;
        std::vector<Complex> pts = sample_points(mu, cfg.n, seed);
        pts.insert(pts.end(), cfg.xi.begin(), cfg.xi.end());
        return make_root_set(std::move(pts));
    };

    const auto finish_record = [&](std::uint64_t seed, std::size_t n_used,
                                   nlohmann::json metrics, double ms) {
        nlohmann::json rec;
        rec["command"] = cfg.command;
        rec["params"] = params;
        rec["seed"] = seed;
        rec["n"] = n_used;
        rec["metrics"] = std::move(metrics);
        rec["wall_time_ms"] = cfg.timing ? ms : 0.0;
        return rec;
    };

    // heavytail aggregates across seeds into a single record; everything else
    // is one record per seed cell.
    if (cfg.command == "heavytail") {
        std::vector<Complex> ts = cfg.t_weights;
        if (ts.empty()) throw ArgumentError("run: heavytail needs at least one --t weight");
        if (ts.size() == 1 && cfg.xi.size() > 1) ts.assign(cfg.xi.size(), ts[0]);
        const auto t0 = std::chrono::steady_clock::now();
        const HeavyTailReport rep = heavy_tail_variance(mu, cfg.xi, ts, cfg.n, seeds);
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        nlohmann::json m;
        m["re_var"] = rep.re_var;
        m["im_var"] = rep.im_var;
        m["target"] = rep.target;
        m["ratio_re"] = rep.ratio_re;
        m["ratio_im"] = rep.ratio_im;
        m["seeds_used"] = rep.seeds_used;
        const nlohmann::json rec = finish_record(seeds[0], cfg.n, m, ms);
        if (cfg.format == "jsonl") {
            write_lines(cfg.out, {rec.dump()});
        } else {
            std::vector<std::string> rows = {"n,seeds,re_var,im_var,target,ratio_re,ratio_im"};
            rows.push_back(std::to_string(cfg.n) + ',' + std::to_string(rep.seeds_used) + ',' +
                           format_double(rep.re_var) + ',' + format_double(rep.im_var) + ',' +
                           format_double(rep.target) + ',' + format_double(rep.ratio_re) + ',' +
                           format_double(rep.ratio_im));
            write_lines(cfg.out, rows);
        }
        return;
    }

    std::vector<nlohmann::json> records(seeds.size());
    std::vector<std::string> csv_rows(seeds.size());

    const auto cell = [&](std::size_t idx) {
        const std::uint64_t seed = seeds[idx];
        const auto t0 = std::chrono::steady_clock::now();
        nlohmann::json metrics;
        std::string csv_row;
        std::size_t n_used = cfg.n;

        if (cfg.command == "sample") {
            std::vector<Complex> pts = sample_points(mu, cfg.n, seed);
            pts.insert(pts.end(), cfg.xi.begin(), cfg.xi.end());
            n_used = pts.size();
            if (cfg.format == "csv") {
                write_points_csv(detail::seed_path(cfg.out, seed, multi), pts);
            } else {
                metrics["points"] = detail::json_points(pts);
            }
        } else if (cfg.command == "solve") {
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            const double worst =
                cps.residuals.empty()
                    ? 0.0
                    : *std::max_element(cps.residuals.begin(), cps.residuals.end());
            if (cfg.format == "csv") {
                write_points_csv(detail::seed_path(cfg.out, seed, multi), cps.points);
            } else {
                metrics["cps"] = detail::json_points(cps.points);
                metrics["iterations"] = cps.iterations;
                metrics["max_residual"] = worst;
            }
        } else if (cfg.command == "pair") {
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            std::vector<Complex> predicted(roots.points.size());
            double max_dist = 0.0, sum_dist = 0.0;
            std::size_t bounded = 0, within = 0;
            const Measure* mp = file_roots ? nullptr : &mu;
            for (std::size_t i = 0; i < roots.points.size(); ++i) {
                predicted[i] = predict(roots, i).w_hat;
                const NearestCp nc = nearest_cp(roots, cps, i, mp);
                max_dist = std::max(max_dist, nc.distance);
                sum_dist += nc.distance;
                if (nc.within_bound.has_value()) {
                    ++bounded;
                    if (*nc.within_bound) ++within;
                }
            }
            if (cfg.format == "csv") {
                emit_plot_data({{"roots", roots.points},
                                {"cps", cps.points},
                                {"predicted", predicted}},
                               detail::seed_path(cfg.out, seed, multi));
            } else {
                metrics["mean_nearest_dist"] = sum_dist / static_cast<double>(n_used);
                metrics["max_nearest_dist"] = max_dist;
                metrics["bounded_roots"] = bounded;
                metrics["within_bound"] = within;
                metrics["within_fraction"] =
                    bounded == 0 ? 0.0
                                 : static_cast<double>(within) / static_cast<double>(bounded);
            }
        } else if (cfg.command == "wasserstein") {
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            PairingReport rep = wasserstein1(roots.points, augment(cps, roots));
            rep.augmented = true;
            const double nd = static_cast<double>(n_used);
            const double logn = std::log(nd);
            const double normalized =
                roots.eta > 0.0 ? nd * rep.w1 / (roots.eta * std::pow(logn, 9.0)) : 0.0;
            metrics["w1"] = rep.w1;
            metrics["eta"] = roots.eta;
            metrics["normalized"] = normalized;
            metrics["n_w1_over_log"] = nd * rep.w1 / logn;
            csv_row = std::to_string(n_used) + ',' + std::to_string(seed) + ',' +
                      format_double(rep.w1) + ',' + format_double(roots.eta) + ',' +
                      format_double(normalized);
        } else if (cfg.command == "clumps") {
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            const ClumpSet cs = build(roots, cps, mu, ClumpOptions{});
            const CountReport rep = count_report(cs);
            if (cfg.format == "csv") {
                std::vector<PlotSeries> series;
                for (std::size_t c = 0; c < cs.components.size(); ++c) {
                    std::vector<Complex> pts;
                    for (const std::size_t i : cs.components[c].root_indices)
                        pts.push_back(cs.root_points[i]);
                    series.emplace_back("clump_" + std::to_string(c), std::move(pts));
                }
                series.emplace_back("cps", cs.cp_points);
                emit_plot_data(series, detail::seed_path(cfg.out, seed, multi));
            } else {
                metrics["clumps"] = cs.components.size();
                metrics["eligible_clumps"] = rep.eligible_clumps;
                metrics["eligible_matched"] = rep.eligible_matched;
                metrics["matched_fraction"] = rep.matched_fraction;
                metrics["max_normalized_pair_dist"] = rep.max_normalized_pair_dist;
                metrics["deficit_clumps"] = rep.deficit_clumps;
                metrics["unexplained_mismatches"] = rep.unexplained_mismatches;
                metrics["unassigned_cps"] = cs.unassigned_cps.size();
                metrics["pair_threshold"] = cs.pair_threshold;
            }
        } else if (cfg.command == "fluctuate") {
            const Regime regime =
                cfg.regime == "inside" ? Regime::Inside : Regime::Outside;
            const FluctuationSample fs = fluct_sample(mu, cfg.xi[0], cfg.n, seed, regime);
            metrics["value"] = detail::json_complex(fs.value);
            metrics["flagged"] = fs.flagged;
            csv_row = std::to_string(seed) + ',' + cfg.regime + ',' +
                      format_double(fs.value.real()) + ',' + format_double(fs.value.imag()) +
                      ',' + (fs.flagged ? "1" : "0");
        } else if (cfg.command == "locallaw") {
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            const TestFunction phi =
                make_bump(cfg.phi_center, cfg.phi_radius, cfg.phi_amplitude);
            const GapReport rep = linear_statistic_gap(roots, cps, phi);
            metrics["gap"] = rep.gap;
            metrics["budget"] = rep.budget;
            metrics["ratio"] = rep.budget > 0.0 ? rep.gap / rep.budget : 0.0;
            csv_row = std::to_string(seed) + ',' + std::to_string(n_used) + ',' +
                      format_double(rep.gap) + ',' + format_double(rep.budget);
        } else { // trace-check
            const RootSet roots = roots_for(seed);
            n_used = roots.points.size();
            const CriticalSet cps = solve(roots, sopts);
            const double radius = roots.eta > 0.0 ? 2.0 * roots.eta : 1.0;
            constexpr int kPoints = 16;
            double worst = 0.0;
            for (int k = 0; k < kPoints; ++k) {
                const double a = 2.0 * 3.141592653589793 * (k + 0.5) / kPoints;
                const Complex z = radius * Complex{std::cos(a), std::sin(a)};
                worst = std::max(worst, companion_trace_residual(roots, cps, z));
            }
            metrics["max_residual"] = worst;
            metrics["contour_points"] = kPoints;
            metrics["contour_radius"] = radius;
            csv_row = std::to_string(seed) + ',' + std::to_string(n_used) + ',' +
                      format_double(worst);
        }

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        records[idx] = finish_record(seed, n_used, std::move(metrics), ms);
        csv_rows[idx] = std::move(csv_row);
    };

    parallel_for(seeds.size(), jobs, cell);

    if (cfg.format == "jsonl") {
        std::vector<std::string> lines;
        lines.reserve(records.size());
        for (const nlohmann::json& r : records) lines.push_back(r.dump());
        write_lines(cfg.out, lines);
        return;
    }
    // CSV: point-cloud and plot commands already wrote per-seed files inside
    // the cells; metric commands collect one table here.
    static const std::vector<std::pair<std::string, std::string>> kCsvHeaders = {
        {"wasserstein", "n,seed,w1,eta,normalized"},
        {"fluctuate", "seed,regime,value_re,value_im,flagged"},
        {"locallaw", "seed,n,gap,budget"},
        {"trace-check", "seed,n,max_residual"}};
    for (const auto& [name, header] : kCsvHeaders) {
        if (cfg.command != name) continue;
        std::vector<std::string> rows = {header};
        rows.insert(rows.end(), csv_rows.begin(), csv_rows.end());
        write_lines(cfg.out, rows);
        return;
    }
}

/// Process-level wrapper: 0 on success, 2 on validation/input errors, 3 on
/// numerical failures.  Messages go to stderr.
inline int run_with_exit_code(const ExperimentConfig& cfg) noexcept {
    try {
        run(cfg);
        return 0;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const ConditioningError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const PoleError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace polypair
