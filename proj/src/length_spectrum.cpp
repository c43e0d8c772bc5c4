#include "billiards/length_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

bool same_family(const PeriodicOrbitFamily& x, const PeriodicOrbitFamily& y) {
    return x.kind == y.kind && x.n == y.n && x.m == y.m && x.repetition == y.repetition &&
           x.quarter == y.quarter;
}

double weight(const PeriodicOrbitFamily& fam) { return fam.c * fam.area / std::sqrt(fam.length); }

}  // namespace

std::vector<double> LengthSpectrum::magnitude() const {
    std::vector<double> out;
    out.reserve(amplitude.size());
    for (const auto& z : amplitude) out.push_back(std::abs(z));
    return out;
}

double rectangular_half_width(double k_min, double k_max) {
    // |sinc| falls to 1/2 at x = 1.8955; FWHM in l is 4 x / (k_max - k_min).
    return 2.0 * 1.8954942670 / (k_max - k_min);
}

double LengthSpectrum::nominal_half_width() const { return rectangular_half_width(k_min, k_max); }

LengthSpectrum length_spectrum(const std::vector<double>& momenta, double k_min, double k_max,
                               const LengthGrid& grid, std::string source) {
    if (!(k_max > k_min) || k_min < 0.0) throw DomainError("momentum window must be increasing");
    if (!(grid.l_max > 0.0)) throw DomainError("length grid needs l_max > 0");
    std::vector<double> ks;
    for (double k : momenta)
        if (k >= k_min && k <= k_max) ks.push_back(k);
    if (ks.size() < 200)
        throw DomainError("length spectrum needs at least 200 momenta in the window, found " +
                          std::to_string(ks.size()));

    LengthSpectrum out;
    out.k_min = k_min;
    out.k_max = k_max;
    out.levels = ks.size();
    out.source = std::move(source);
    const double step = grid.step > 0.0 ? grid.step : out.nominal_half_width() / 12.0;
    const auto points = static_cast<std::size_t>(std::floor(grid.l_max / step)) + 1;

    std::vector<double> w(ks.size(), 1.0);
    if (grid.taper) {
        const double center = 0.5 * (k_min + k_max), scale = 0.25 * (k_max - k_min);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double z = (ks[i] - center) / scale;
            w[i] = std::exp(-0.5 * z * z);
        }
    }
    out.l.resize(points);
    out.amplitude.resize(points);
    // Phases advance by a per-level rotation and are reseeded exactly at every chunk start.
    constexpr std::size_t chunk = 256;
    const std::size_t m = ks.size();
    std::vector<double> cr(m), ci(m), zr(m), zi(m);
    for (std::size_t i = 0; i < m; ++i) {
        zr[i] = std::cos(ks[i] * step);
        zi[i] = -std::sin(ks[i] * step);
    }
    for (std::size_t j0 = 0; j0 < points; j0 += chunk) {
        const double l0 = step * j0;
        for (std::size_t i = 0; i < m; ++i) {
            cr[i] = w[i] * std::cos(ks[i] * l0);
            ci[i] = -w[i] * std::sin(ks[i] * l0);
        }
        const std::size_t j1 = std::min(points, j0 + chunk);
        for (std::size_t j = j0; j < j1; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                re += cr[i];
                im += ci[i];
                const double r = cr[i] * zr[i] - ci[i] * zi[i];
                ci[i] = cr[i] * zi[i] + ci[i] * zr[i];
                cr[i] = r;
            }
            out.l[j] = step * j;
            out.amplitude[j] = {re / (2.0 * pi), im / (2.0 * pi)};
        }
    }
    return out;
}

LengthSpectrum length_spectrum(const Spectrum& spectrum, double k_min, double k_max,
                               const LengthGrid& grid) {
    std::vector<double> ks;
    for (double e : spectrum.converged_levels()) ks.push_back(Conventions::momentum(e));
    if (!ks.empty() && ks.back() < k_max)
        throw DomainError("spectrum is certified only up to k = " + std::to_string(ks.back()));
    return length_spectrum(ks, k_min, k_max, grid,
                           spectrum.shape.describe() + ":" + spectrum.symmetry_name());
}

std::vector<Peak> detect_peaks(const LengthSpectrum& ls, const PeakOptions& options) {
    const std::vector<double> mag = ls.magnitude();
    const std::size_t n = mag.size();
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (ls.l[i] >= options.l_min && mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])
            maxima.push_back(i);
    double top = 0.0;
    for (std::size_t i : maxima) top = std::max(top, mag[i]);
    if (top <= 0.0) return {};
    const double step = n > 1 ? ls.l[1] - ls.l[0] : 0.0;
    const double nominal = ls.nominal_half_width();
    std::vector<Peak> out;
    for (std::size_t i : maxima) {
        if (mag[i] < options.min_height * top) continue;
        Peak p;
        // Parabola through the three samples around the maximum.
        const double ym = mag[i - 1], y0 = mag[i], yp = mag[i + 1];
        const double denom = ym - 2.0 * y0 + yp;
        const double shift = denom < 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
        p.position = ls.l[i] + shift * step;
        p.height = y0 - 0.25 * (ym - yp) * shift;
        const double half = 0.5 * p.height;
        std::size_t lo = i, hi = i;
        while (lo > 0 && mag[lo] > half) --lo;
        while (hi + 1 < n && mag[hi] > half) ++hi;
        if (mag[lo] > half || mag[hi] > half) continue;
        auto crossing = [&](std::size_t a, std::size_t b) {
            return ls.l[a] + (half - mag[a]) / (mag[b] - mag[a]) * (ls.l[b] - ls.l[a]);
        };
        const double left = crossing(lo, lo + 1);
        const double right = crossing(hi - 1, hi);
        p.half_width = 0.5 * (right - left);
        if (p.half_width > 0.0 && p.half_width <= options.max_width * nominal) out.push_back(p);
    }
    if (options.sidelobe_factor > 0.0) {
        // Drop maxima lying under the 1/x sidelobe envelope of a taller accepted peak.
        std::vector<std::size_t> order(out.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return out[x].height > out[y].height; });
        std::vector<bool> keep(out.size(), false);
        std::vector<std::size_t> accepted;
        for (std::size_t i : order) {
            bool lobe = false;
            for (std::size_t j : accepted) {
                const double x = 1.8954942670 * std::abs(out[i].position - out[j].position) / nominal;
                if (x > pi && out[i].height < options.sidelobe_factor * out[j].height / x) {
                    lobe = true;
                    break;
                }
            }
            if (!lobe) {
                keep[i] = true;
                accepted.push_back(i);
            }
        }
        std::vector<Peak> kept;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (keep[i]) kept.push_back(out[i]);
        out.swap(kept);
    }
    return out;
}

double half_width_dispersion(const std::vector<Peak>& peaks) {
    if (peaks.size() < 2) return 1.0;
    double lo = HUGE_VAL, hi = 0.0;
    for (const auto& p : peaks) {
        lo = std::min(lo, p.half_width);
        hi = std::max(hi, p.half_width);
    }
    return hi / lo;
}

std::vector<TheoryPeak> theory_peaks(const std::vector<PeriodicOrbitFamily>& catalog,
                                     const PeriodicOrbitFamily& reference) {
    auto ref = std::find_if(catalog.begin(), catalog.end(),
                            [&](const PeriodicOrbitFamily& f) { return same_family(f, reference); });
    if (ref == catalog.end()) throw DomainError("reference family " + reference.label() + " not in catalog");
    const double ref_weight = weight(*ref);
    if (!(ref_weight > 0.0)) throw DomainError("reference family has zero amplitude");
    std::vector<TheoryPeak> out;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& fam = catalog[i];
        TheoryPeak t;
        t.length = fam.length;
        t.relative_amplitude = same_family(fam, *ref) ? 1.0 : weight(fam) / ref_weight;
        t.family = i;
        t.label = fam.label();
        t.kind = fam.kind;
        out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TheoryPeak& x, const TheoryPeak& y) { return x.length < y.length; });
    return out;
}

bool MatchRow::has_flag(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

MatchReport match_report(const std::vector<Peak>& peaks, const std::vector<TheoryPeak>& theory,
                         const PeriodicOrbitFamily& reference, double half_width) {
    if (!(half_width > 0.0)) throw DomainError("matching radius must be positive");
    MatchReport rep;
    rep.half_width = half_width;
    const std::string ref_label = reference.label();

    auto nearest = [&](double l) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < peaks.size(); ++i)
            if (std::abs(peaks[i].position - l) <= half_width &&
                (!best || std::abs(peaks[i].position - l) < std::abs(peaks[*best].position - l)))
                best = i;
        return best;
    };

    std::vector<std::optional<std::size_t>> matched;
    for (const auto& t : theory) {
        MatchRow row;
        row.family = t.label;
        row.kind = t.kind;
        row.l_theory = t.length;
        row.height_theory = t.relative_amplitude;
        matched.push_back(nearest(t.length));
        if (matched.back()) {
            row.l_detected = peaks[*matched.back()].position;
            row.height_numeric = peaks[*matched.back()].height;
        } else {
            row.flags.push_back("unmatched");
        }
        if (t.kind == OrbitKind::isolated) row.flags.push_back("isolated");
        if (t.label == ref_label) {
            row.flags.push_back("reference");
            rep.reference_length = t.length;
            if (row.l_detected) rep.reference_height = row.height_numeric;
        }
        rep.rows.push_back(std::move(row));
    }

    // Interference: theory lengths within one half-width, or a measured peak that is shared by
    // two families or broadened beyond 1.5 times the median half-width.
    std::vector<double> widths;
    for (const auto& p : peaks) widths.push_back(p.half_width);
    std::sort(widths.begin(), widths.end());
    const double median = widths.empty() ? 0.0 : widths[widths.size() / 2];
    std::vector<bool> merged(rep.rows.size(), false);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (!matched[i]) continue;
        if (peaks[*matched[i]].half_width > 1.5 * median) merged[i] = true;
        for (std::size_t j = 0; j < rep.rows.size(); ++j)
            if (j != i && matched[j] == matched[i]) merged[i] = true;
    }
    auto linked = [&](std::size_t a, std::size_t b) {
        const double gap = rep.rows[b].l_theory - rep.rows[a].l_theory;
        if (gap < half_width) return true;
        if (!merged[a] && !merged[b]) return false;
        const double reach =
            2.0 * std::max(peaks[*matched[a]].half_width, peaks[*matched[b]].half_width);
        return gap < reach;
    };
    int group = 0;
    for (std::size_t i = 0; i < rep.rows.size();) {
        std::size_t j = i + 1;
        while (j < rep.rows.size() && linked(j - 1, j)) ++j;
        if (j - i > 1 || merged[i]) {
            for (std::size_t k = i; k < j; ++k) {
                rep.rows[k].group = group;
                rep.rows[k].flags.push_back("interference");
            }
            ++group;
        }
        i = j;
    }

    // Dispersion over the peaks that carry a single family.
    std::vector<Peak> clean;
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        if (matched[i] && rep.rows[i].group < 0) clean.push_back(peaks[*matched[i]]);
    rep.dispersion = half_width_dispersion(clean);

    for (auto& row : rep.rows) {
        if (!row.l_detected) continue;
        if (rep.reference_height > 0.0) {
            row.height_numeric /= rep.reference_height;
            if (row.height_theory > 0.0) row.ratio = row.height_numeric / row.height_theory;
        }
    }
    if (rep.reference_height > 0.0)
        for (auto& row : rep.rows)
            if (row.has_flag("reference")) row.height_numeric = 1.0;
    return rep;
}

std::string MatchReport::table() const {
    std::ostringstream os;
    os << "# reference L = " << std::setprecision(10) << reference_length
       << " normalized to 1; matching radius " << half_width << "; half-width dispersion "
       << dispersion << "\n";
    os << std::left << std::setw(14) << "family" << std::setw(12) << "L_theory" << std::setw(12)
       << "L_detected" << std::setw(12) << "dL" << std::setw(12) << "height_num" << std::setw(14)
       << "height_theory" << std::setw(10) << "ratio"
       << "flags\n";
    os << std::fixed;
    for (const auto& r : rows) {
        os << std::setw(14) << r.family << std::setw(12) << std::setprecision(5) << r.l_theory;
        if (r.l_detected) {
            os << std::setw(12) << *r.l_detected << std::setw(12) << (*r.l_detected - r.l_theory)
               << std::setw(12) << r.height_numeric;
        } else {
            os << std::setw(12) << "-" << std::setw(12) << "-" << std::setw(12) << "-";
        }
        os << std::setw(14) << r.height_theory;
        if (r.ratio) {
            os << std::setw(10) << std::setprecision(3) << *r.ratio;
        } else {
            os << std::setw(10) << "-";
        }
        std::string flags;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ",") + f;
        os << (flags.empty() ? "-" : flags) << "\n";
    }
    return os.str();
}

}  // namespace billiards
