#include "billiards/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace billiards {

namespace {

std::vector<double> grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop * (1.0 + 1e-12)) break;
        out.push_back(v);
    }
    return out;
}

std::vector<double> log_grid(double start, double stop, int points) {
    if (points < 2 || !(start > 0.0) || !(stop > start))
        throw ConfigError("log grid needs two or more points on a positive range");
    std::vector<double> out;
    const double ratio = std::log(stop / start) / (points - 1);
    for (int i = 0; i < points; ++i) out.push_back(start * std::exp(ratio * i));
    return out;
}

/// Least-squares slope of y against x over abscissae in [lo, hi].
double linear_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        n += 1;
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (n < 3) throw ConfigError("slope range holds fewer than three grid points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> positions(const std::vector<double>& abscissa, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    for (auto i : idx) out.push_back(abscissa[i]);
    return out;
}

bool positive_weight(const PeriodicOrbitFamily& f) { return f.c * f.area > 0.0; }

}  // namespace

RunConfig RunConfig::from_config(const Config& c) {
    static const char* known[] = {
        "billiard.kind", "billiard.sigma", "billiard.a", "billiard.b",
        "spectrum.classes", "spectrum.levels", "spectrum.eps_max", "spectrum.degeneracy_tol",
        "spectrum.tolerance", "ensemble.center", "ensemble.spread", "ensemble.samples",
        "ensemble.eps_max", "ensemble.poisson", "orbits.l_max", "orbits.max_bounces",
        "orbits.shortest", "orbits.threshold_scale", "fourier.k_min", "fourier.k_max", "fourier.l_max", "fourier.taper",
        "fourier.min_height", "stats.eps", "stats.l_max", "stats.width_step", "stats.width_max",
        "stats.eps_min", "stats.eps_max", "stats.eps_step", "stats.eps_points", "stats.pool_half",
        "stats.pool_step", "stats.bins", "stats.smooth", "stats.global_span", "stats.global_points", "run.seed", "run.out_dir", "run.cache_dir"};
    for (const auto& [key, value] : c.values()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known))
            throw ConfigError("unknown config key '" + key + "'");
    }
    auto count = [&](const char* key, long fallback) {
        const long v = c.get_int(key, fallback);
        if (v < 0) throw ConfigError(std::string(key) + ": must be non-negative");
        return v;
    };

    RunConfig r;
    r.billiard = c.get("billiard.kind", r.billiard);
    if (r.billiard != "ellipse" && r.billiard != "circle" && r.billiard != "rectangle")
        throw ConfigError("billiard.kind must be ellipse, circle or rectangle");
    r.sigma = c.get_double("billiard.sigma", r.sigma);
    r.side_a = c.get_double("billiard.a", r.side_a);
    r.side_b = c.get_double("billiard.b", r.side_b);
    r.classes = c.get("spectrum.classes", r.classes);
    if (r.classes != "all" && r.classes != "merged") SymmetryClass::parse(r.classes);
    r.levels = static_cast<std::size_t>(count("spectrum.levels", static_cast<long>(r.levels)));
    r.eps_max = c.get_double("spectrum.eps_max", r.eps_max);
    r.degeneracy_tol = c.get_double("spectrum.degeneracy_tol", r.degeneracy_tol);
    r.tolerance = c.get_double("spectrum.tolerance", r.tolerance);
    r.ensemble.center = c.get_double("ensemble.center", r.ensemble.center);
    r.ensemble.spread = c.get_double("ensemble.spread", r.ensemble.spread);
    r.ensemble.samples = static_cast<std::size_t>(count("ensemble.samples", static_cast<long>(r.ensemble.samples)));
    r.ensemble_eps_max = c.get_double("ensemble.eps_max", r.ensemble_eps_max);
    r.poisson = c.get_bool("ensemble.poisson", r.poisson);
    r.orbit_l_max = c.get_double("orbits.l_max", r.orbit_l_max);
    r.max_bounces = static_cast<int>(count("orbits.max_bounces", r.max_bounces));
    r.shortest = static_cast<std::size_t>(count("orbits.shortest", static_cast<long>(r.shortest)));
    r.threshold_scale = c.get_double("orbits.threshold_scale", r.threshold_scale);
    if (!(r.threshold_scale > 0.0)) throw ConfigError("orbits.threshold_scale must be positive");
    r.global_span = c.get_double("stats.global_span", r.global_span);
    if (!(r.global_span >= 0.0 && r.global_span < 1.0)) throw ConfigError("stats.global_span must lie in [0, 1)");
    r.global_points = static_cast<int>(count("stats.global_points", r.global_points));
    if (r.global_points < 1) throw ConfigError("stats.global_points must be positive");
    r.k_min = c.get_double("fourier.k_min", r.k_min);
    r.k_max = c.get_double("fourier.k_max", r.k_max);
    r.fourier_l_max = c.get_double("fourier.l_max", r.fourier_l_max);
    r.taper = c.get_bool("fourier.taper", r.taper);
    r.min_height = c.get_double("fourier.min_height", r.min_height);
    r.stats_eps = c.get_double("stats.eps", r.stats_eps);
    r.stats_l_max = c.get_double("stats.l_max", r.stats_l_max);
    r.width_step = c.get_double("stats.width_step", r.width_step);
    r.width_max = c.get_double("stats.width_max", r.width_max);
    r.sat_eps_min = c.get_double("stats.eps_min", r.sat_eps_min);
    r.sat_eps_max = c.get_double("stats.eps_max", r.sat_eps_max);
    r.sat_eps_step = c.get_double("stats.eps_step", r.sat_eps_step);
    r.sat_log_points = static_cast<int>(count("stats.eps_points", r.sat_log_points));
    r.pool_half = static_cast<int>(count("stats.pool_half", r.pool_half));
    r.pool_step = c.get_double("stats.pool_step", r.pool_step);
    r.spacing_bins = static_cast<int>(count("stats.bins", r.spacing_bins));
    r.smooth_half = static_cast<int>(count("stats.smooth", r.smooth_half));
    r.seed = static_cast<std::uint64_t>(count("run.seed", static_cast<long>(r.seed)));
    r.ensemble.seed = r.seed;
    r.ensemble.levels_per_sample = r.levels;
    r.out_dir = c.get("run.out_dir", r.out_dir);
    r.cache_dir = c.get("run.cache_dir", r.cache_dir);
    if (!(r.k_max > r.k_min) || r.k_min < 0) throw ConfigError("fourier window needs 0 <= k_min < k_max");
    if (r.spacing_bins < 1) throw ConfigError("stats.bins must be positive");
    return r;
}

Config RunConfig::to_config() const {
    Config c;
    c.set("billiard.kind", billiard);
    c.set("billiard.sigma", format_double(sigma));
    c.set("billiard.a", format_double(side_a));
    c.set("billiard.b", format_double(side_b));
    c.set("spectrum.classes", classes);
    c.set("spectrum.levels", std::to_string(levels));
    c.set("spectrum.eps_max", format_double(eps_max));
    c.set("spectrum.degeneracy_tol", format_double(degeneracy_tol));
    c.set("spectrum.tolerance", format_double(tolerance));
    c.set("ensemble.center", format_double(ensemble.center));
    c.set("ensemble.spread", format_double(ensemble.spread));
    c.set("ensemble.samples", std::to_string(ensemble.samples));
    c.set("ensemble.eps_max", format_double(ensemble_eps_max));
    c.set("ensemble.poisson", poisson ? "true" : "false");
    c.set("orbits.l_max", format_double(orbit_l_max));
    c.set("orbits.max_bounces", std::to_string(max_bounces));
    c.set("orbits.shortest", std::to_string(shortest));
    c.set("orbits.threshold_scale", format_double(threshold_scale));
    c.set("stats.global_span", format_double(global_span));
    c.set("stats.global_points", std::to_string(global_points));
    c.set("fourier.k_min", format_double(k_min));
    c.set("fourier.k_max", format_double(k_max));
    c.set("fourier.l_max", format_double(fourier_l_max));
    c.set("fourier.taper", taper ? "true" : "false");
    c.set("fourier.min_height", format_double(min_height));
    c.set("stats.eps", format_double(stats_eps));
    c.set("stats.l_max", format_double(stats_l_max));
    c.set("stats.width_step", format_double(width_step));
    c.set("stats.width_max", format_double(width_max));
    c.set("stats.eps_min", format_double(sat_eps_min));
    c.set("stats.eps_max", format_double(sat_eps_max));
    c.set("stats.eps_step", format_double(sat_eps_step));
    c.set("stats.eps_points", std::to_string(sat_log_points));
    c.set("stats.pool_half", std::to_string(pool_half));
    c.set("stats.pool_step", format_double(pool_step));
    c.set("stats.bins", std::to_string(spacing_bins));
    c.set("stats.smooth", std::to_string(smooth_half));
    c.set("run.seed", std::to_string(seed));
    return c;
}

BilliardShape RunConfig::shape() const {
    if (billiard == "circle") return BilliardShape::ellipse(1.0, 1.0);
    if (billiard == "rectangle") {
        if (side_a > 0.0 || side_b > 0.0) return BilliardShape::rectangle(side_a, side_b);
        return rectangle_from_sigma(sigma);
    }
    return ellipse_from_sigma(sigma);
}

SpectrumProvider::SpectrumProvider(std::filesystem::path cache_dir, double tolerance)
    : cache_(std::move(cache_dir)), tolerance_(tolerance) {}

Spectrum SpectrumProvider::below(const BilliardShape& shape, const SymmetryClass& symmetry,
                                 double eps_max) {
    if (shape.kind() == ShapeKind::rectangle)
        throw DomainError("rectangle spectra are not split by symmetry class; use merged");
    if (shape.is_circle()) return cb_spectrum_below(symmetry, eps_max);
    const CacheKey key{shape.describe(), symmetry.name(), "separation", tolerance_, eps_max, 0};
    if (auto hit = cache_.load(key, &warnings)) {
        ++hits;
        return *hit;
    }
    ++misses;
    SeparationOptions options;
    options.relative_tolerance = tolerance_;
    Spectrum s = eb_spectrum_below(shape.sigma(), symmetry, eps_max, options);
    cache_.store(key, s);
    return s;
}

Spectrum SpectrumProvider::count(const BilliardShape& shape, const SymmetryClass& symmetry,
                                 std::size_t n) {
    if (shape.kind() == ShapeKind::rectangle)
        throw DomainError("rectangle spectra are not split by symmetry class; use merged");
    if (shape.is_circle()) return cb_spectrum(symmetry, n);
    const CacheKey key{shape.describe(), symmetry.name(), "separation", tolerance_, 0.0, n};
    if (auto hit = cache_.load(key, &warnings)) {
        ++hits;
        return *hit;
    }
    ++misses;
    SeparationOptions options;
    options.relative_tolerance = tolerance_;
    Spectrum s = eb_spectrum(shape.sigma(), symmetry, n, options);
    cache_.store(key, s);
    return s;
}

Spectrum SpectrumProvider::merged(const BilliardShape& shape, double eps_max, double degeneracy_tol) {
    if (shape.kind() == ShapeKind::rectangle) return rb_spectrum_below(shape.a(), shape.b(), eps_max);
    std::vector<Spectrum> parts;
    for (int c = 0; c < 4; ++c) parts.push_back(below(shape, all_symmetry_classes()[c], eps_max));
    return merge_classes(parts, degeneracy_tol);
}

std::vector<PeriodicOrbitFamily> shape_catalog(const RunConfig& config, double l_max,
                                               std::vector<std::string>* warnings) {
    const BilliardShape shape = config.shape();
    std::vector<PeriodicOrbitFamily> out;
    if (shape.kind() == ShapeKind::rectangle) return rb_catalog(shape.a(), shape.b(), l_max);
    if (shape.is_circle()) {
        for (auto& f : cb_catalog(config.max_bounces))
            if (f.length <= l_max) out.push_back(f);
        return out;
    }
    CatalogOptions options;
    options.l_max = l_max;
    options.max_bounces = config.max_bounces;
    Catalog cat = eb_catalog(shape, options);
    if (warnings) warnings->insert(warnings->end(), cat.warnings.begin(), cat.warnings.end());
    return cat.families;
}

StatsResult run_statistics(const RunConfig& config, SpectrumProvider& provider) {
    StatsResult r;
    r.mode = config.poisson ? "poisson" : config.billiard == "rectangle" ? "rectangle" : "ellipse";
    if (config.billiard == "circle" && !config.poisson)
        throw ConfigError("statistics run on ellipse or rectangle ensembles (circle: ensemble.center = 1)");
    if (config.ensemble.samples < 2) throw ConfigError("ensemble.samples must be at least 2");

    std::vector<LevelSet> ensemble;
    std::vector<UnfoldedSpectrum> unfolded;
    std::vector<std::vector<PeriodicOrbitFamily>> catalogs;
    if (config.poisson) {
        for (std::size_t i = 0; i < config.ensemble.samples; ++i) {
            LevelSet set{"poisson-" + std::to_string(i),
                         poisson_levels(1.0, config.ensemble_eps_max, config.seed + i),
                         config.ensemble_eps_max};
            ensemble.push_back(set);
        }
    } else {
        r.sigmas = sample_ensemble(config.ensemble);
        for (std::size_t i = 0; i < r.sigmas.size(); ++i) {
            const double s = r.sigmas[i];
            Spectrum sp;
            std::vector<PeriodicOrbitFamily> cat;
            if (r.mode == "rectangle") {
                const auto shape = rectangle_from_sigma(s);
                sp = rb_spectrum_below(shape.a(), shape.b(), config.ensemble_eps_max);
                cat = rb_catalog(shape.a(), shape.b(), config.stats_l_max);
            } else {
                const auto shape = ellipse_from_sigma(s);
                sp = provider.below(shape, SymmetryClass::odd_odd(), config.ensemble_eps_max);
                CatalogOptions options;
                options.l_max = config.stats_l_max;
                options.max_bounces = config.max_bounces;
                cat = fold_to_quarter(eb_catalog(shape, options).families, config.stats_l_max);
            }
            LevelSet set = level_set(sp, "sample " + std::to_string(i) + " (sigma " + format_double(s) + ")");
            if (set.levels.size() < config.levels)
                throw NumericFailure(set.id + ": " + std::to_string(set.levels.size()) +
                                     " converged levels, " + std::to_string(config.levels) + " required");
            ensemble.push_back(std::move(set));
            catalogs.push_back(shortest(std::move(cat), config.shortest));
        }
    }
    r.min_levels = ensemble.front().levels.size();
    for (const auto& set : ensemble) {
        r.min_levels = std::min(r.min_levels, set.levels.size());
        unfolded.push_back(unfold(set.levels));
    }

    r.spacing = spacing_distribution(unfolded, config.spacing_bins, 6.0);
    const double ds = 6.0 / config.spacing_bins;
    for (int b = 0; b < config.spacing_bins; ++b)
        r.spacing_poisson.push_back((std::exp(-b * ds) - std::exp(-(b + 1) * ds)) / ds);
    r.first_bin_z = r.spacing.errors[0] > 0.0
                        ? (r.spacing_poisson[0] - r.spacing.values[0]) / r.spacing.errors[0]
                        : 0.0;

    const double eps = config.stats_eps;
    const auto widths = grid(config.width_step, config.width_max, config.width_step);
    r.sigma = number_variance_curve(ensemble, eps, widths, Pooling{config.pool_half, config.pool_step});
    r.sigma_smoothed = moving_average(r.sigma.values, config.smooth_half);
    r.sigma_extrema = positions(widths, local_extrema(r.sigma_smoothed));
    if (!catalogs.empty() && catalogs.front().size() > 0) {
        std::vector<double> unit;
        for (double w : widths) unit.push_back(sigma_theory(catalogs, 1.0, eps, w));
        r.theory_extrema = positions(widths, local_extrema(unit));
        std::size_t fit = 0;
        const auto num_ext = local_extrema(r.sigma_smoothed);
        if (!num_ext.empty()) fit = num_ext.front();
        else fit = widths.size() - 1;
        r.kappa = fit_kappa(catalogs, eps, widths[fit], r.sigma_smoothed[fit]);
        for (double u : unit) r.sigma_theory.push_back(r.kappa * r.kappa * u);
    }

    const auto rigidity_widths = grid(config.width_step, eps / 4.0, config.width_step);
    r.rigidity = rigidity_curve(ensemble, eps, rigidity_widths);
    r.initial_slope = linear_slope(rigidity_widths, r.rigidity.values, 0.0,
                                   std::max(eps / 40.0, 3.0 * config.width_step));
    r.plateau_slope = linear_slope(rigidity_widths, r.rigidity.values, eps / 8.0, eps / 4.0);

    const auto energies = config.sat_log_points > 0
                              ? log_grid(config.sat_eps_min, config.sat_eps_max, config.sat_log_points)
                              : grid(config.sat_eps_min, config.sat_eps_max, config.sat_eps_step);
    r.saturation = saturation_curve(ensemble, energies);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        num += r.saturation.values[i] * std::sqrt(energies[i]);
        den += energies[i];
    }
    for (double e : energies) r.sqrt_fit.push_back(num / den * std::sqrt(e));
    r.exponent = loglog_slope(energies, r.saturation.values);

    std::vector<double> ratio, ratio_err;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        ratio.push_back(r.saturation.values[i] / std::sqrt(energies[i]));
        ratio_err.push_back(r.saturation.errors[i] / std::sqrt(energies[i]));
    }
    // A bump (or dip) counts when the point clears a point on each side by the combined
    // standard error of the pair.
    for (std::size_t j = 0; j < ratio.size(); ++j) {
        for (const double sign : {1.0, -1.0}) {
            double left = 0.0, right = 0.0;
            for (std::size_t i = 0; i < ratio.size(); ++i) {
                if (i == j) continue;
                const double z = sign * (ratio[j] - ratio[i]) / std::hypot(ratio_err[i], ratio_err[j]);
                (i < j ? left : right) = std::max(i < j ? left : right, z);
            }
            r.oscillation_sigmas = std::max(r.oscillation_sigmas, std::min(left, right));
        }
    }

    r.global = global_variance_curve(ensemble, energies);
    double offset = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i)
        offset += (r.global.values[i] - r.saturation.values[i]) / r.saturation.values[i];
    r.offset = offset / static_cast<double>(energies.size());
    r.correlation = pearson(r.global.values, r.saturation.values);
    r.global_window = global_variance_window_curve(ensemble, energies, config.global_span, config.global_points);
    std::vector<double> point_ratio, window_ratio;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        point_ratio.push_back(r.global.values[i] / std::sqrt(energies[i]));
        window_ratio.push_back(r.global_window.values[i] / std::sqrt(energies[i]));
    }
    r.point_detrended_correlation = pearson(point_ratio, ratio);
    r.detrended_correlation = pearson(window_ratio, ratio);
    return r;
}

FourierResult run_fourier(const RunConfig& config, SpectrumProvider& provider) {
    FourierResult r;
    const BilliardShape shape = config.shape();
    const double eps_max = config.k_max * config.k_max * 1.01;
    Spectrum sp;
    if (config.classes == "merged" || config.classes == "all" || shape.kind() == ShapeKind::rectangle)
        sp = provider.merged(shape, eps_max, config.degeneracy_tol);
    else
        sp = provider.below(shape, SymmetryClass::parse(config.classes), eps_max);
    r.removed = sp.meta.removed;

    r.catalog = shape_catalog(config, config.fourier_l_max);
    LengthGrid lg;
    lg.taper = config.taper;
    // Extend past l_max so a peak at the last catalog length is an interior maximum.
    lg.l_max = config.fourier_l_max + 4.0 * rectangular_half_width(config.k_min, config.k_max);
    LengthSpectrum ls = length_spectrum(sp, config.k_min, config.k_max, lg);
    PeakOptions po;
    po.min_height = config.min_height;
    r.peaks = detect_peaks(ls, po);

    const PeriodicOrbitFamily* ref = nullptr;
    for (const auto& f : r.catalog)
        if (positive_weight(f) && (!ref || f.length < ref->length)) ref = &f;
    if (!ref) throw DomainError("catalog has no family with positive weight below l_max");
    r.reference = *ref;
    r.theory = theory_peaks(r.catalog, r.reference);
    r.report = match_report(r.peaks, r.theory, r.reference, ls.nominal_half_width());
    r.spectrum = std::move(ls);
    return r;
}

}  // namespace billiards
