#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "billiards/orbits.hpp"
#include "billiards/spectrum.hpp"

namespace billiards {

struct EnsembleSpec {
    double center = 0.5;
    /// Standard deviation of the normal distribution of sigma.
    double spread = 0.005;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    std::size_t levels_per_sample = 300;
};

/// Seeded normal draws of sigma, redrawn until they land in (0.05, 1].
std::vector<double> sample_ensemble(const EnsembleSpec& spec);

/// Converged levels of one ensemble member. Statistics only use eps <= upper.
struct LevelSet {
    std::string id;
    std::vector<double> levels;
    double upper = 0.0;
};

LevelSet level_set(const Spectrum& spectrum, std::string id);
/// Count of levels <= eps.
std::size_t staircase(const LevelSet& set, double eps);

struct UnfoldedSpectrum {
    std::vector<double> raw;
    double c2 = 0.0, c1 = 0.0, c0 = 0.0;
    std::vector<double> levels;

    double smooth_count(double eps) const;
};

/// Least-squares fit of the staircase to c2 eps + c1 sqrt(eps) + c0 and the mapped levels.
UnfoldedSpectrum unfold(const std::vector<double>& levels);
UnfoldedSpectrum unfold(const Spectrum& spectrum);

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct StatCurve {
    std::string statistic;
    std::vector<double> abscissa;
    std::vector<double> values;
    std::vector<double> errors;
    std::size_t samples = 0;
};

/// Histogram of consecutive unfolded spacings pooled over the ensemble, range [0, s_max].
StatCurve spacing_distribution(const std::vector<UnfoldedSpectrum>& ensemble, int bins,
                               double s_max = 6.0);

/// Spectral averaging on top of the ensemble: window centers eps + j step, |j| <= half_count.
struct Pooling {
    int half_count = 0;
    double step = 0.0;
};

/// Ensemble variance of the count in [eps - E/2, eps + E/2], with its standard error.
/// With pooling the variance runs over every (sample, center) pair.
Estimate number_variance(const std::vector<LevelSet>& ensemble, double eps, double width,
                         const Pooling& pooling = {});

/// Least-squares rigidity of one staircase over [eps - E/2, eps + E/2], integrated exactly.
double rigidity_single(const LevelSet& set, double eps, double width);
/// Ensemble mean of rigidity_single.
Estimate rigidity(const std::vector<LevelSet>& ensemble, double eps, double width);

/// Mean rigidity over E in [eps/8, eps/4] (plateau average over `points` widths).
Estimate rigidity_saturation(const std::vector<LevelSet>& ensemble, double eps, int points = 9);

/// Ensemble variance of N(eps).
Estimate global_variance(const std::vector<LevelSet>& ensemble, double eps);

/// Orbit amplitude A = kappa c S / sqrt(L).
double orbit_amplitude(const PeriodicOrbitFamily& family, double kappa);

/// Orbit-sum number variance sum_j 8 A_j^2 / T_j^2 sin^2(E T_j / 2), averaged over catalogs.
double sigma_theory(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs, double kappa,
                    double eps, double width);

/// Orbit-sum global variance sum_j 2 A_j^2 / T_j^2, averaged over catalogs.
double global_variance_theory(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs,
                              double kappa, double eps);

/// kappa reproducing `measured` at (eps, width); the theory is quadratic in kappa.
double fit_kappa(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs, double eps,
                 double width, double measured);

/// Curves over explicit grids.
StatCurve number_variance_curve(const std::vector<LevelSet>& ensemble, double eps,
                                const std::vector<double>& widths, const Pooling& pooling = {});
StatCurve rigidity_curve(const std::vector<LevelSet>& ensemble, double eps,
                         const std::vector<double>& widths);
StatCurve saturation_curve(const std::vector<LevelSet>& ensemble,
                           const std::vector<double>& energies);
StatCurve global_variance_curve(const std::vector<LevelSet>& ensemble,
                                const std::vector<double>& energies);
/// Global variance averaged over points energies spread uniformly across [eps (1 - span/2),
/// eps (1 + span/2)]. Errors are the mean of the point errors, an upper bound.
StatCurve global_variance_window_curve(const std::vector<LevelSet>& ensemble,
                                       const std::vector<double>& energies, double span, int points);

/// Centered moving average over 2 half_window + 1 points, shrinking at the ends.
std::vector<double> moving_average(const std::vector<double>& values, int half_window);

/// Positions of local extrema of a curve (interior points only), in order.
std::vector<std::size_t> local_extrema(const std::vector<double>& values);

/// Least-squares slope of log(values) against log(abscissa).
double loglog_slope(const std::vector<double>& abscissa, const std::vector<double>& values);

/// Pearson correlation of two equally long sequences.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Uncorrelated levels of the given density on (0, eps_max].
std::vector<double> poisson_levels(double density, double eps_max, std::uint64_t seed);

}  // namespace billiards
