#include "billiards/commands.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace billiards {

namespace {

using nlohmann::json;

struct Emitter {
    std::string command;
    Config config;
    std::uint64_t seed;
    std::filesystem::path dir;
    std::string hash;
    CommandOutput output;
    std::ostream& log;

    Emitter(std::string cmd, const RunConfig& rc, std::ostream& out)
        : command(std::move(cmd)), config(rc.to_config()), seed(rc.seed), dir(rc.out_dir), log(out) {
        hash = hex64(fnv1a(command + "\n" + config.serialize()));
    }

    std::string header() const { return provenance_header(command, config, seed, hash); }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir / name;
        write_file_atomic(path, content);
        output.files.push_back(path);
        log << "wrote " << path.string() << "\n";
    }
    void csv(const std::string& name, const CsvTable& table, const std::string& extra = "") {
        write(name, csv_text(header() + extra, table));
    }
    void text(const std::string& name, const std::string& body) { write(name, header() + body); }
    void svg(const std::string& name, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
        write(name, "<!--\n" + header() + "-->\n" + svg_plot(spec, series));
    }
    void js(const std::string& name, json body) {
        body["provenance"] = {{"tool", "billiards"}, {"version", tool_version}, {"command", command},
                              {"seed", seed}, {"input_hash", hash}, {"config", config.values()}};
        write(name, body.dump(2) + "\n");
    }
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::vector<SymmetryClass> requested_classes(const RunConfig& config) {
    if (config.classes == "all") return {all_symmetry_classes(), all_symmetry_classes() + 4};
    return {SymmetryClass::parse(config.classes)};
}

void spectrum_file(Emitter& e, const Spectrum& s, const std::string& name) {
    CsvTable t{{"index", "eps", "k", "converged"}, {}};
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        t.rows.push_back({static_cast<double>(i + 1), s.eigenvalues[i], std::sqrt(s.eigenvalues[i]),
                          s.converged[i] ? 1.0 : 0.0});
    std::ostringstream extra;
    extra << "# shape: " << s.shape.describe() << "\n# class: " << s.symmetry_name() << "\n# solver: "
          << s.meta.solver << "\n# converged: " << s.converged_count << "\n# removed: " << s.meta.removed
          << "\n";
    e.csv(name, t, extra.str());
    e.log << s.symmetry_name() << ": " << s.eigenvalues.size() << " levels, " << s.converged_count
          << " converged";
    if (!s.eigenvalues.empty()) e.log << ", eps_max " << fmt(s.eigenvalues.back(), 10);
    e.log << "\n";
}

json family_json(const PeriodicOrbitFamily& f) {
    json j = {{"label", f.label()}, {"kind", to_string(f.kind)}, {"n", f.n}, {"m", f.m},
              {"repetition", f.repetition}, {"length", f.length}, {"area", f.area}, {"c", f.c},
              {"quarter", f.quarter}};
    if (f.caustic)
        j["caustic"] = {{"lambda", f.caustic->lambda},
                        {"kind", f.caustic->kind == ConicKind::ellipse ? "ellipse" : "hyperbola"},
                        {"semi_x", f.caustic->semi_x}, {"semi_y", f.caustic->semi_y},
                        {"foci", f.caustic->foci()}};
    if (f.stability_trace) {
        j["stability_trace"] = *f.stability_trace;
        j["stability"] = f.stability();
    }
    return j;
}

std::string flags_text(const MatchRow& r) {
    std::string s;
    for (const auto& f : r.flags) s += (s.empty() ? "" : ";") + f;
    return s;
}

}  // namespace

CommandOutput cmd_spectrum(const RunConfig& config, SpectrumProvider& provider, std::ostream& log) {
    Emitter e("spectrum", config, log);
    const BilliardShape shape = config.shape();
    const bool merged = config.classes == "merged" || shape.kind() == ShapeKind::rectangle;
    if (merged) {
        double eps = config.eps_max;
        // Weyl estimate for the full billiard with room for the perimeter correction.
        if (!(eps > 0.0)) eps = 4.0 * M_PI * (1.3 * config.levels + 20.0) / area(shape);
        Spectrum s = provider.merged(shape, eps, config.degeneracy_tol);
        if (!(config.eps_max > 0.0) && s.eigenvalues.size() > config.levels) {
            s.eigenvalues.resize(config.levels);
            s.converged.resize(config.levels);
            s.converged_count = std::min(s.converged_count, config.levels);
        }
        spectrum_file(e, s, "spectrum-merged.csv");
    } else {
        for (const auto& c : requested_classes(config)) {
            const Spectrum s = config.eps_max > 0.0 ? provider.below(shape, c, config.eps_max)
                                                    : provider.count(shape, c, config.levels);
            if (!(config.eps_max > 0.0) && s.converged_count < config.levels)
                throw NumericFailure(c.name() + ": only " + std::to_string(s.converged_count) +
                                     " converged levels");
            spectrum_file(e, s, "spectrum-" + c.name() + ".csv");
        }
    }
    log << "cache hits " << provider.hits << ", misses " << provider.misses << "\n";
    return e.output;
}

CommandOutput cmd_orbits(const RunConfig& config, std::ostream& log) {
    Emitter e("orbits", config, log);
    const BilliardShape shape = config.shape();
    std::vector<std::string> warnings;
    const auto catalog = shape_catalog(config, config.orbit_l_max, &warnings);
    json families = json::array();
    for (const auto& f : catalog) families.push_back(family_json(f));
    json body = {{"shape", shape.describe()}, {"l_max", config.orbit_l_max},
                 {"perimeter", perimeter(shape)}, {"area", area(shape)}, {"families", families},
                 {"warnings", warnings}};
    if (shape.kind() == ShapeKind::ellipse && !shape.is_circle()) {
        json axes = json::array();
        for (const auto& f : axis_orbits(shape)) axes.push_back(family_json(f));
        body["axis_orbits"] = axes;
    }
    e.js("orbits.json", body);

    std::ostringstream report;
    std::size_t failures = 0;
    if (shape.kind() == ShapeKind::ellipse && !shape.is_circle()) {
        InvariantThresholds th;
        th.confocality *= config.threshold_scale;
        th.tangency *= config.threshold_scale;
        th.length_spread *= config.threshold_scale;
        th.conservation *= config.threshold_scale;
        const auto checks = check_invariants(shape, catalog, th);
        report << "family,length,confocality,tangency,length_spread,conservation,result\n";
        for (const auto& c : checks) {
            const bool ok = passes(c, th);
            failures += ok ? 0 : 1;
            report << c.label << "," << format_double(c.length) << "," << format_double(c.confocality) << ","
                   << format_double(c.tangency) << "," << format_double(c.length_spread) << ","
                   << format_double(c.conservation) << "," << (ok ? "pass" : "FAIL") << "\n";
        }
        report << "# thresholds: confocality " << th.confocality << ", tangency " << th.tangency
               << ", length_spread " << th.length_spread << ", conservation " << th.conservation << " over "
               << th.conservation_bounces << " bounces\n";
        report << "# " << checks.size() - failures << " of " << checks.size() << " families pass\n";
        e.text("invariants.csv", report.str());
    }
    for (const auto& f : catalog)
        log << f.label() << "  L = " << fmt(f.length, 8) << "  S = " << fmt(f.area, 6) << "  c = " << f.c << "\n";
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    if (failures) throw InvariantFailure(std::to_string(failures) + " orbit families fail the invariant checks");
    return e.output;
}

CommandOutput cmd_stats(const RunConfig& config, SpectrumProvider& provider, std::ostream& log) {
    Emitter e("stats", config, log);
    const StatsResult r = run_statistics(config, provider);

    CsvTable sp{{"s", "P", "error", "poisson"}, {}};
    for (std::size_t i = 0; i < r.spacing.values.size(); ++i)
        sp.rows.push_back({r.spacing.abscissa[i], r.spacing.values[i], r.spacing.errors[i], r.spacing_poisson[i]});
    e.csv("spacing.csv", sp);
    e.svg("spacing.svg", {"P(s)", "s", "P(s)"},
          {{"ensemble", r.spacing.abscissa, r.spacing.values, "points"},
           {"Poisson", r.spacing.abscissa, r.spacing_poisson, "line"}});

    CsvTable sg{{"E", "sigma", "error", "smoothed", "theory"}, {}};
    for (std::size_t i = 0; i < r.sigma.values.size(); ++i)
        sg.rows.push_back({r.sigma.abscissa[i], r.sigma.values[i], r.sigma.errors[i], r.sigma_smoothed[i],
                           r.sigma_theory.empty() ? std::nan("") : r.sigma_theory[i]});
    e.csv("sigma.csv", sg);
    std::vector<PlotSeries> sigma_plot{{"ensemble", r.sigma.abscissa, r.sigma.values, "points"},
                                       {"smoothed", r.sigma.abscissa, r.sigma_smoothed, "line"}};
    if (!r.sigma_theory.empty()) sigma_plot.push_back({"orbit sum", r.sigma.abscissa, r.sigma_theory, "line"});
    if (r.mode == "poisson") sigma_plot.push_back({"mean count", r.sigma.abscissa, r.sigma.abscissa, "line"});
    e.svg("sigma.svg", {"number variance at eps " + format_double(config.stats_eps), "E", "Sigma"}, sigma_plot);

    CsvTable rg{{"E", "delta3", "error"}, {}};
    for (std::size_t i = 0; i < r.rigidity.values.size(); ++i)
        rg.rows.push_back({r.rigidity.abscissa[i], r.rigidity.values[i], r.rigidity.errors[i]});
    e.csv("rigidity.csv", rg);
    e.svg("rigidity.svg", {"rigidity at eps " + format_double(config.stats_eps), "E", "Delta3"},
          {{"ensemble", r.rigidity.abscissa, r.rigidity.values, "line"}});

    CsvTable sat{{"eps", "delta3_inf", "error", "sqrt_fit", "global", "global_error", "global_window",
                   "global_window_error"}, {}};
    for (std::size_t i = 0; i < r.saturation.values.size(); ++i)
        sat.rows.push_back({r.saturation.abscissa[i], r.saturation.values[i], r.saturation.errors[i], r.sqrt_fit[i],
                            r.global.values[i], r.global.errors[i], r.global_window.values[i],
                            r.global_window.errors[i]});
    e.csv("saturation.csv", sat);
    const bool log_axes = config.sat_log_points > 0;
    e.svg("saturation.svg", {"saturated rigidity", "eps", "Delta3_inf", log_axes, log_axes},
          {{"ensemble", r.saturation.abscissa, r.saturation.values, "points"},
           {"c sqrt(eps)", r.saturation.abscissa, r.sqrt_fit, "line"}});
    e.svg("global.svg", {"global variance", "eps", "variance"},
          {{"Sigma_g", r.global.abscissa, r.global.values, "line"},
           {"Sigma_g windowed", r.global_window.abscissa, r.global_window.values, "line"},
           {"Delta3_inf", r.saturation.abscissa, r.saturation.values, "line"}});

    json summary = {{"mode", r.mode}, {"samples", r.mode == "poisson" ? config.ensemble.samples : r.sigmas.size()},
                    {"sigmas", r.sigmas}, {"min_levels", r.min_levels}, {"first_bin_z", r.first_bin_z},
                    {"sigma_extrema", r.sigma_extrema}, {"theory_extrema", r.theory_extrema},
                    {"kappa", r.kappa}, {"initial_slope", r.initial_slope}, {"plateau_slope", r.plateau_slope},
                    {"saturation_exponent", r.exponent}, {"oscillation_sigmas", r.oscillation_sigmas},
                    {"global_offset", r.offset}, {"global_correlation", r.correlation},
                    {"global_detrended_correlation", r.detrended_correlation},
                    {"global_point_detrended_correlation", r.point_detrended_correlation},
                    {"cache_warnings", provider.warnings}};
    e.js("summary.json", summary);

    log << "mode " << r.mode << ", min levels per sample " << r.min_levels << "\n";
    log << "P(s) first bin deficit " << fmt(r.first_bin_z, 4) << " standard errors\n";
    log << "Sigma extrema (smoothed):";
    for (double x : r.sigma_extrema) log << " " << x;
    log << "\norbit-sum extrema:";
    for (double x : r.theory_extrema) log << " " << x;
    log << "\nkappa " << fmt(r.kappa) << "\n";
    log << "rigidity slopes: initial " << fmt(r.initial_slope) << ", plateau " << fmt(r.plateau_slope) << "\n";
    log << "saturation log-log exponent " << fmt(r.exponent, 4) << "\n";
    log << "saturation / sqrt(eps) largest bump or dip " << fmt(r.oscillation_sigmas, 4) << " standard errors\n";
    log << "global vs saturation: offset " << fmt(r.offset, 4) << ", correlation " << fmt(r.correlation, 4)
        << ", detrended " << fmt(r.detrended_correlation, 4) << " (point-wise "
        << fmt(r.point_detrended_correlation, 4) << ")\n";
    for (const auto& w : provider.warnings) log << "warning: " << w << "\n";
    return e.output;
}

CommandOutput cmd_fourier(const RunConfig& config, SpectrumProvider& provider, std::ostream& log) {
    Emitter e("fourier", config, log);
    const FourierResult r = run_fourier(config, provider);
    const auto mag = r.spectrum.magnitude();

    CsvTable ls{{"l", "re", "im", "abs"}, {}};
    for (std::size_t i = 0; i < r.spectrum.l.size(); ++i)
        ls.rows.push_back({r.spectrum.l[i], r.spectrum.amplitude[i].real(), r.spectrum.amplitude[i].imag(), mag[i]});
    std::ostringstream extra;
    extra << "# levels: " << r.spectrum.levels << "\n# window: " << format_double(r.spectrum.k_min) << " "
          << format_double(r.spectrum.k_max) << "\n# removed_degenerate: " << r.removed << "\n";
    e.csv("length_spectrum.csv", ls, extra.str());

    CsvTable pk{{"position", "height", "half_width"}, {}};
    for (const auto& p : r.peaks) pk.rows.push_back({p.position, p.height, p.half_width});
    e.csv("peaks.csv", pk);
    e.text("match.txt", r.report.table());

    json rows = json::array();
    for (const auto& row : r.report.rows) {
        json j = {{"family", row.family}, {"kind", to_string(row.kind)}, {"l_theory", row.l_theory},
                  {"height_numeric", row.height_numeric}, {"height_theory", row.height_theory},
                  {"flags", row.flags}, {"group", row.group}};
        j["l_detected"] = row.l_detected ? json(*row.l_detected) : json();
        j["ratio"] = row.ratio ? json(*row.ratio) : json();
        rows.push_back(j);
    }
    e.js("match.json", {{"reference", r.reference.label()}, {"reference_length", r.report.reference_length},
                        {"reference_height", r.report.reference_height}, {"half_width", r.report.half_width},
                        {"dispersion", r.report.dispersion}, {"levels", r.spectrum.levels},
                        {"removed_degenerate", r.removed}, {"rows", rows}});

    std::vector<double> tl, th;
    for (const auto& row : r.report.rows) {
        tl.push_back(row.l_theory);
        th.push_back(row.height_theory * r.report.reference_height);
    }
    e.svg("length_spectrum.svg", {"length spectrum", "l", "|A(l)|"},
          {{"|A(l)|", r.spectrum.l, mag, "line"}, {"orbit theory", tl, th, "points"}});

    log << "levels " << r.spectrum.levels << " in k window [" << r.spectrum.k_min << ", " << r.spectrum.k_max
        << "], nominal half-width " << fmt(r.report.half_width) << "\n";
    log << "reference " << r.reference.label() << " at L = " << fmt(r.report.reference_length, 8) << " normalized to 1\n";
    std::size_t matched = 0;
    for (const auto& row : r.report.rows) matched += row.l_detected ? 1 : 0;
    log << matched << " of " << r.report.rows.size() << " theory peaks matched, half-width dispersion "
        << fmt(r.report.dispersion, 4) << "\n";
    for (const auto& row : r.report.rows)
        if (row.has_flag("isolated") || row.has_flag("interference"))
            log << "  " << row.family << ": " << flags_text(row) << "\n";
    return e.output;
}

CommandOutput cmd_selftest(const RunConfig& config, SpectrumProvider& provider, std::ostream& log) {
    CommandOutput all;
    const std::filesystem::path root = std::filesystem::path(config.out_dir) / "selftest";
    auto collect = [&](const CommandOutput& o) { all.files.insert(all.files.end(), o.files.begin(), o.files.end()); };
    auto base = [&](const std::string& sub) {
        RunConfig c;
        c.seed = config.seed;
        c.ensemble.seed = config.seed;
        c.out_dir = (root / sub).string();
        return c;
    };

    RunConfig orbits = base("orbits");
    orbits.orbit_l_max = 7.0;
    collect(cmd_orbits(orbits, log));

    RunConfig eb = base("spectrum-ellipse");
    eb.levels = 100;
    collect(cmd_spectrum(eb, provider, log));
    RunConfig cb = base("spectrum-circle");
    cb.billiard = "circle";
    cb.levels = 100;
    collect(cmd_spectrum(cb, provider, log));

    RunConfig poisson = base("stats-poisson");
    poisson.poisson = true;
    poisson.ensemble.samples = 100;
    poisson.ensemble_eps_max = 400.0;
    poisson.stats_eps = 200.0;
    poisson.width_step = 1.0;
    poisson.width_max = 40.0;
    poisson.pool_half = 0;
    poisson.sat_eps_min = 100.0;
    poisson.sat_eps_max = 300.0;
    poisson.sat_eps_step = 25.0;
    collect(cmd_stats(poisson, provider, log));

    RunConfig ens = base("stats-ellipse");
    ens.ensemble.samples = 6;
    ens.ensemble.levels_per_sample = ens.levels = 110;
    ens.ensemble_eps_max = 2400.0;
    ens.stats_eps = 1200.0;
    ens.width_max = 200.0;
    ens.pool_half = 5;
    ens.sat_eps_min = 400.0;
    ens.sat_eps_max = 1800.0;
    ens.stats_l_max = 12.0;
    collect(cmd_stats(ens, provider, log));

    RunConfig rb = base("fourier-rectangle");
    rb.billiard = "rectangle";
    rb.side_a = 1.0;
    rb.side_b = (std::sqrt(5.0) + 1.0) / 2.0;
    rb.k_max = 200.0;
    rb.fourier_l_max = 12.0;
    collect(cmd_fourier(rb, provider, log));

    RunConfig circle = base("fourier-circle");
    circle.billiard = "circle";
    circle.classes = "merged";
    circle.degeneracy_tol = 0.0;
    circle.k_min = 20.0;
    circle.k_max = 120.0;
    circle.fourier_l_max = 8.0;
    collect(cmd_fourier(circle, provider, log));

    log << "selftest wrote " << all.files.size() << " files under " << root.string() << "\n";
    return all;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum billiard spectra, periodic orbits, spectral statistics and length spectra"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    std::string config_file, cache_flag;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    bool poisson = false, taper = false;

    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    const Flag common[] = {
        {"--billiard", "billiard.kind", "ellipse, circle or rectangle"},
        {"--sigma", "billiard.sigma", "aspect ratio b/a (ab = 1 for ellipses)"},
        {"--side-a", "billiard.a", "rectangle side along x"},
        {"--side-b", "billiard.b", "rectangle side along y"},
        {"--class", "spectrum.classes", "odd-odd, even-odd, odd-even, even-even, all or merged"},
        {"--levels", "spectrum.levels", "converged levels per spectrum or ensemble sample"},
        {"--eps-max", "spectrum.eps_max", "energy cutoff (replaces --levels)"},
        {"--degeneracy-tol", "spectrum.degeneracy_tol", "relative tolerance for merging classes"},
        {"--tolerance", "spectrum.tolerance", "convergence certification tolerance"},
        {"--center", "ensemble.center", "ensemble mean of sigma"},
        {"--spread", "ensemble.spread", "ensemble standard deviation of sigma"},
        {"--samples", "ensemble.samples", "ensemble size"},
        {"--ensemble-eps-max", "ensemble.eps_max", "energy cutoff of ensemble spectra"},
        {"--max-bounces", "orbits.max_bounces", "bounce limit of the orbit search"},
        {"--shortest", "orbits.shortest", "orbit count in the theory sums"},
        {"--k-min", "fourier.k_min", "lower edge of the momentum window"},
        {"--k-max", "fourier.k_max", "upper edge of the momentum window"},
        {"--min-height", "fourier.min_height", "peak threshold relative to the tallest peak"},
        {"--eps", "stats.eps", "window center of number variance and rigidity"},
        {"--width-max", "stats.width_max", "largest window width"},
        {"--seed", "run.seed", "ensemble seed"},
        {"--out", "run.out_dir", "output directory"},
    };

    std::map<std::string, std::string> l_max_key = {{"orbits", "orbits.l_max"}, {"fourier", "fourier.l_max"},
                                                    {"stats", "stats.l_max"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"spectrum", "eigenvalue spectra (CSV), cached"},
             {"orbits", "periodic orbit catalog (JSON) and invariant report"},
             {"stats", "ensemble statistics: P(s), Sigma, Delta3, saturation, global variance"},
             {"fourier", "length spectrum, peaks and match report against orbit theory"},
             {"selftest", "small deterministic run of every command"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_file, "config file with [section] key = value lines");
        sub->add_option("--set", sets, "override a config key: section.key=value")->take_all();
        sub->add_option("--cache-dir", cache_flag, "spectrum cache (default $BILLIARDS_CACHE_DIR or .billiards-cache)");
        for (const auto& f : common) sub->add_option(f.name, flags[std::string(name) + "|" + f.key], f.help);
        if (l_max_key.count(name))
            sub->add_option("--l-max", flags[std::string(name) + "|" + l_max_key[name]], "orbit length limit");
        if (name == "stats") sub->add_flag("--poisson", poisson, "synthetic Poisson ensemble");
        if (name == "fourier") sub->add_flag("--taper", taper, "Gaussian taper over the momentum window");
        subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    std::string command;
    for (auto* sub : subs)
        if (sub->parsed()) command = sub->get_name();

    try {
        Config cfg = config_file.empty() ? Config() : Config::load(config_file);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
            cfg.set(s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [tagged, value] : flags) {
            const auto bar = tagged.find('|');
            if (tagged.substr(0, bar) == command && !value.empty()) cfg.set(tagged.substr(bar + 1), value);
        }
        if (poisson) cfg.set("ensemble.poisson", "true");
        if (taper) cfg.set("fourier.taper", "true");
        RunConfig rc = RunConfig::from_config(cfg);
        const auto cache_dir = SpectrumCache::resolve_dir(cache_flag.empty() ? rc.cache_dir : cache_flag,
                                                          ".billiards-cache");
        SpectrumProvider provider(cache_dir, rc.tolerance);
        if (command == "spectrum") cmd_spectrum(rc, provider, out);
        else if (command == "orbits") cmd_orbits(rc, out);
        else if (command == "stats") cmd_stats(rc, provider, out);
        else if (command == "fourier") cmd_fourier(rc, provider, out);
        else cmd_selftest(rc, provider, out);
        for (const auto& w : provider.warnings)
            if (command == "spectrum" || command == "fourier" || command == "selftest") err << "warning: " << w << "\n";
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvariantFailure& e) {
        err << "invariant failure: " << e.what() << "\n";
        return exit_invariant;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return exit_numeric;
    }
}

}  // namespace billiards
