#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polypair/errors.hpp"
#include "polypair/io.hpp"
#include "polypair/runner.hpp"

namespace {

polypair::Complex parse_point(const std::string& s, const char* what) {
    try {
        return polypair::parse_complex_pair(s);
    } catch (const polypair::Error& e) {
        throw polypair::ArgumentError(std::string(what) + ": " + e.what());
    }
}

/// Config-file points accept either "re,im" strings or [re, im] arrays.
polypair::Complex json_point(const nlohmann::json& v, const char* what) {
    if (v.is_string()) return parse_point(v.get<std::string>(), what);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return polypair::Complex{v[0].get<double>(), v[1].get<double>()};
    throw polypair::ArgumentError(std::string(what) + ": expected \"re,im\" or [re, im]");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polypair: root / critical-point pairing experiments for random polynomials"};

    std::string command;
    std::string config_path;
    std::string measure, roots_file, out, format, regime, phi_center_str;
    std::uint64_t n = 0, trials = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> xi_str, t_str;
    double tol = 0.0, phi_radius = 0.0, phi_amplitude = 0.0;
    int max_iter = 0;
    unsigned jobs = 0;
    bool timing = false;

    app.add_option("command", command,
                   "sample|solve|pair|wasserstein|clumps|fluctuate|locallaw|trace-check|heavytail")
        ->required();
    app.add_option("--config", config_path, "JSON config file mirroring the flags (flags win)");
    app.add_option("--measure", measure,
                   "uniform-disk[:cx,cy,r] | two-disks | gaussian | unit-circle");
    app.add_option("--n", n, "number of roots drawn from the measure");
    app.add_option("--seed,--seeds", seeds, "seed list (repeatable or comma-separated)")
        ->type_size(1)
        ->delimiter(',');
    app.add_option("--xi", xi_str, "deterministic root / evaluation point \"re,im\" (repeatable)")
        ->type_size(1);
    app.add_option("--roots-file", roots_file, "CSV root source (header re,im)");
    app.add_option("--out", out, "output path");
    app.add_option("--format", format, "csv | jsonl");
    app.add_option("--trials", trials, "expand the base seed into this many consecutive seeds");
    app.add_option("--tol", tol, "solver correction tolerance");
    app.add_option("--max-iter", max_iter, "solver sweep limit");
    app.add_option("--jobs", jobs, "max concurrent seed cells");
    app.add_option("--regime", regime, "inside | outside (fluctuate)");
    app.add_option("--phi-center", phi_center_str, "bump center \"re,im\" (locallaw)");
    app.add_option("--phi-radius", phi_radius, "bump radius (locallaw)");
    app.add_option("--phi-amplitude", phi_amplitude, "bump amplitude (locallaw)");
    app.add_option("--t", t_str, "heavytail weight \"re,im\" (repeatable)")->type_size(1);
    app.add_flag("--timing", timing, "record real wall times (off: wall_time_ms = 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    polypair::ExperimentConfig cfg;
    cfg.command = command;
    try {
        nlohmann::json file = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw polypair::IoError("cannot open config '" + config_path + "'");
            try {
                in >> file;
            } catch (const nlohmann::json::exception& e) {
                throw polypair::ParseError(std::string("config: ") + e.what(), 0);
            }
            if (!file.is_object())
                throw polypair::ParseError("config: top level must be a JSON object", 0);
        }
        // A flag given on the command line overrides the config file; the
        // config fills everything else; defaults come last.
        const auto given = [&](const char* name) { return app.count(name) > 0; };
        const auto has = [&](const char* key) { return file.contains(key); };

        if (given("--measure")) cfg.measure = measure;
        else if (has("measure")) cfg.measure = file["measure"].get<std::string>();
        if (given("--n")) cfg.n = n;
        else if (has("n")) cfg.n = file["n"].get<std::uint64_t>();
        if (given("--seeds")) cfg.seeds = seeds;
        else if (has("seeds")) cfg.seeds = file["seeds"].get<std::vector<std::uint64_t>>();
        if (given("--xi")) {
            for (const std::string& s : xi_str) cfg.xi.push_back(parse_point(s, "--xi"));
        } else if (has("xi")) {
            for (const auto& v : file["xi"]) cfg.xi.push_back(json_point(v, "config xi"));
        }
        if (given("--roots-file")) cfg.roots_file = roots_file;
        else if (has("roots_file")) cfg.roots_file = file["roots_file"].get<std::string>();
        if (given("--out")) cfg.out = out;
        else if (has("out")) cfg.out = file["out"].get<std::string>();
        if (given("--format")) cfg.format = format;
        else if (has("format")) cfg.format = file["format"].get<std::string>();
        if (given("--trials")) cfg.trials = trials;
        else if (has("trials")) cfg.trials = file["trials"].get<std::uint64_t>();
        if (given("--tol")) cfg.tol = tol;
        else if (has("tol")) cfg.tol = file["tol"].get<double>();
        if (given("--max-iter")) cfg.max_iter = max_iter;
        else if (has("max_iter")) cfg.max_iter = file["max_iter"].get<int>();
        if (given("--jobs")) cfg.jobs = jobs;
        else if (has("jobs")) cfg.jobs = file["jobs"].get<unsigned>();
        if (given("--regime")) cfg.regime = regime;
        else if (has("regime")) cfg.regime = file["regime"].get<std::string>();
        if (given("--phi-center")) cfg.phi_center = parse_point(phi_center_str, "--phi-center");
        else if (has("phi_center")) cfg.phi_center = json_point(file["phi_center"], "config phi_center");
        if (given("--phi-radius")) cfg.phi_radius = phi_radius;
        else if (has("phi_radius")) cfg.phi_radius = file["phi_radius"].get<double>();
        if (given("--phi-amplitude")) cfg.phi_amplitude = phi_amplitude;
        else if (has("phi_amplitude")) cfg.phi_amplitude = file["phi_amplitude"].get<double>();
        if (given("--t")) {
            for (const std::string& s : t_str) cfg.t_weights.push_back(parse_point(s, "--t"));
        } else if (has("t")) {
            for (const auto& v : file["t"]) cfg.t_weights.push_back(json_point(v, "config t"));
        }
        if (given("--timing")) cfg.timing = timing;
        else if (has("timing")) cfg.timing = file["timing"].get<bool>();
    } catch (const polypair::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    }

    return polypair::run_with_exit_code(cfg);
}
