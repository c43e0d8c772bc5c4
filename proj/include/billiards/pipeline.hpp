#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "billiards/io.hpp"
#include "billiards/length_spectrum.hpp"
#include "billiards/orbits.hpp"
#include "billiards/spectrum.hpp"
#include "billiards/statistics.hpp"

namespace billiards {

/// Every knob of a run. Serialized into each output header; out_dir and cache_dir are
/// locations and stay out of the serialized form.
struct RunConfig {
    std::string billiard = "ellipse";  ///< ellipse | circle | rectangle
    double sigma = 0.5;
    /// Rectangle sides; 0 selects the unit-area rectangle with b/a = sigma.
    double side_a = 0.0, side_b = 0.0;

    std::string classes = "odd-odd";  ///< a class name, "all" or "merged"
    std::size_t levels = 300;
    /// Positive values replace the level target by an energy cutoff.
    double eps_max = 0.0;
    double degeneracy_tol = 1e-5;
    double tolerance = 1e-6;

    EnsembleSpec ensemble = {0.5, 0.05, 50, 1, 300};
    double ensemble_eps_max = 5300.0;
    bool poisson = false;

    double orbit_l_max = 10.0;
    int max_bounces = 60;
    std::size_t shortest = 200;
    /// Multiplies every invariant threshold of the orbit checks.
    double threshold_scale = 1.0;
    double global_span = 0.125;
    int global_points = 21;

    double k_min = 0.0, k_max = 160.0, fourier_l_max = 27.0;
    bool taper = false;
    double min_height = 0.02;

    double stats_eps = 2500.0;
    /// Orbit catalogs for the theory curves: quarter-folded families up to this length.
    double stats_l_max = 20.0;
    double width_step = 2.0, width_max = 400.0;
    double sat_eps_min = 600.0, sat_eps_max = 4400.0, sat_eps_step = 50.0;
    /// Positive values switch the saturation grid to this many log-spaced energies.
    int sat_log_points = 0;
    int pool_half = 20;
    double pool_step = 20.0;
    int spacing_bins = 30;
    int smooth_half = 5;

    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string cache_dir;

    static RunConfig from_config(const Config& config);
    Config to_config() const;
    BilliardShape shape() const;
};

/// Spectra through the on-disk cache; warnings collect cache rebuild notices.
class SpectrumProvider {
public:
    explicit SpectrumProvider(std::filesystem::path cache_dir, double tolerance = 1e-6);

    Spectrum below(const BilliardShape& shape, const SymmetryClass& symmetry, double eps_max);
    /// At least `count` certified levels, complete up to the largest.
    Spectrum count(const BilliardShape& shape, const SymmetryClass& symmetry, std::size_t count);
    /// Four classes merged with near-degeneracy removal (rectangles: the full closed form).
    Spectrum merged(const BilliardShape& shape, double eps_max, double degeneracy_tol);

    std::vector<std::string> warnings;
    std::size_t hits = 0, misses = 0;

private:
    SpectrumCache cache_;
    double tolerance_;
};

struct StatsResult {
    std::string mode;  ///< ellipse | rectangle | poisson
    std::vector<double> sigmas;
    std::size_t min_levels = 0;

    StatCurve spacing;
    std::vector<double> spacing_poisson;
    double first_bin_z = 0.0;

    StatCurve sigma;
    std::vector<double> sigma_smoothed;
    std::vector<double> sigma_theory;
    double kappa = 0.0;
    std::vector<double> sigma_extrema;
    std::vector<double> theory_extrema;

    StatCurve rigidity;
    double initial_slope = 0.0, plateau_slope = 0.0;

    StatCurve saturation;
    std::vector<double> sqrt_fit;
    double exponent = 0.0;
    /// Largest bump or dip of saturation / sqrt(eps): the smaller of its rises above points on
    /// either side, in combined standard errors.
    double oscillation_sigmas = 0.0;

    StatCurve global;
    /// Sigma_g averaged over the relative span stats.global_span around each energy.
    StatCurve global_window;
    /// Mean relative offset of the point-wise Sigma_g from the saturation curve.
    double offset = 0.0;
    double correlation = 0.0;
    /// Correlation of the windowed Sigma_g with the saturation curve after dividing both by sqrt(eps).
    double detrended_correlation = 0.0;
    /// The same correlation for the point-wise Sigma_g.
    double point_detrended_correlation = 0.0;
};

StatsResult run_statistics(const RunConfig& config, SpectrumProvider& provider);

struct FourierResult {
    LengthSpectrum spectrum;
    std::vector<Peak> peaks;
    std::vector<PeriodicOrbitFamily> catalog;
    std::vector<TheoryPeak> theory;
    PeriodicOrbitFamily reference;
    MatchReport report;
    std::size_t removed = 0;
};

FourierResult run_fourier(const RunConfig& config, SpectrumProvider& provider);

/// Catalog appropriate for the configured shape with L <= l_max.
std::vector<PeriodicOrbitFamily> shape_catalog(const RunConfig& config, double l_max,
                                               std::vector<std::string>* warnings = nullptr);

}  // namespace billiards
