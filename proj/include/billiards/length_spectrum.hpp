#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "billiards/orbits.hpp"
#include "billiards/spectrum.hpp"

namespace billiards {

struct LengthGrid {
    double l_max = 12.0;
    /// 0 selects a twelfth of the nominal half-width 3.79 / (k_max - k_min).
    double step = 0.0;
    /// Gaussian taper over the momentum window; off for the literal rectangular window.
    bool taper = false;
};

/// A(l) = (1/2 pi) sum_i exp(-i k_i l) on l = 0, step, ..., l_max.
struct LengthSpectrum {
    std::vector<double> l;
    std::vector<std::complex<double>> amplitude;
    double k_min = 0.0, k_max = 0.0;
    std::size_t levels = 0;
    std::string source;

    std::vector<double> magnitude() const;
    /// Half-width of a rectangular-window peak, 3.79 / (k_max - k_min).
    double nominal_half_width() const;
};

/// Nominal half-width of a rectangular momentum window.
double rectangular_half_width(double k_min, double k_max);

LengthSpectrum length_spectrum(const std::vector<double>& momenta, double k_min, double k_max,
                               const LengthGrid& grid = {}, std::string source = "levels");
LengthSpectrum length_spectrum(const Spectrum& spectrum, double k_min, double k_max,
                               const LengthGrid& grid = {});

struct Peak {
    double position = 0.0;
    double height = 0.0;
    double half_width = 0.0;
};

struct PeakOptions {
    /// Threshold relative to the largest local maximum with l >= l_min.
    double min_height = 0.02;
    /// Peaks below this length (the smooth-density lobe at l = 0) are ignored.
    double l_min = 1.0;
    /// Maxima wider than this many nominal half-widths are unresolved background.
    double max_width = 4.0;
    /// A maximum at distance d from a taller peak is a window sidelobe when its height is below
    /// factor * H / x, x = 1.8955 d / half-width beyond the first zero. 0 disables the test.
    double sidelobe_factor = 1.5;
};

/// Local maxima of |A(l)| with parabolic refinement and interpolated half-maximum crossings.
std::vector<Peak> detect_peaks(const LengthSpectrum& ls, const PeakOptions& options = {});

/// max / min half-width over the peaks (1 for fewer than two peaks).
double half_width_dispersion(const std::vector<Peak>& peaks);

struct TheoryPeak {
    double length = 0.0;
    double relative_amplitude = 0.0;
    std::size_t family = 0;
    std::string label;
    OrbitKind kind = OrbitKind::R;
};

/// Amplitudes c S / sqrt(L) relative to the reference family, sorted by length.
std::vector<TheoryPeak> theory_peaks(const std::vector<PeriodicOrbitFamily>& catalog,
                                     const PeriodicOrbitFamily& reference);

struct MatchRow {
    std::string family;
    OrbitKind kind = OrbitKind::R;
    double l_theory = 0.0;
    std::optional<double> l_detected;
    double height_numeric = 0.0;
    double height_theory = 0.0;
    std::optional<double> ratio;
    /// "isolated", "interference", "unmatched", "reference".
    std::vector<std::string> flags;
    /// Members of one interference group share the id; -1 when alone.
    int group = -1;

    bool has_flag(const std::string& flag) const;
};

struct MatchReport {
    std::vector<MatchRow> rows;
    double reference_length = 0.0;
    double reference_height = 0.0;
    double half_width = 0.0;
    /// Half-width dispersion over matched peaks outside interference groups.
    double dispersion = 1.0;

    /// Columns: family, L_theory, L_detected, dL, height_num, height_theory, ratio, flags.
    std::string table() const;
};

/// Pairs every theory peak with the nearest detected peak within one half-width. Numeric
/// heights are normalized by the peak matched to the reference family. Interference groups
/// join theory lengths closer than one half-width and families whose measured peak is shared
/// or broadened.
MatchReport match_report(const std::vector<Peak>& peaks, const std::vector<TheoryPeak>& theory,
                         const PeriodicOrbitFamily& reference, double half_width);

}  // namespace billiards
