#include "billiards/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace billiards {

namespace {

/// Unbiased variance and the standard error of that variance estimate.
Estimate variance_with_error(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("variance needs at least two samples");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    const double var = m2 / (n - 1);
    m4 /= n;
    const double s4 = var * var;
    const double spread = (m4 - s4 * (n - 3.0) / (n - 1.0)) / n;
    return {var, std::sqrt(std::max(0.0, spread))};
}

Estimate mean_with_error(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n == 0) throw DomainError("mean of an empty ensemble");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    if (n == 1) return {mean, 0.0};
    double m2 = 0.0;
    for (double v : x) m2 += (v - mean) * (v - mean);
    return {mean, std::sqrt(m2 / (n - 1) / n)};
}

void require_window(const LevelSet& set, double lo, double hi) {
    if (lo < 0.0 || hi > set.upper)
        throw DomainError("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] leaves the converged range of " + set.id + " (upper " +
                          std::to_string(set.upper) + ")");
}

void require_catalogs(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs) {
    if (catalogs.empty()) throw DomainError("empty catalog list");
    for (const auto& c : catalogs)
        if (c.empty()) throw DomainError("empty orbit catalog");
}

double orbit_weight(const PeriodicOrbitFamily& fam, double kappa, double eps) {
    const double amp = orbit_amplitude(fam, kappa);
    const double period = Conventions::period(fam.length, eps);
    return amp * amp / (std::pow(Conventions::hbar, Conventions::dof - 1) * period * period);
}

}  // namespace

std::vector<double> sample_ensemble(const EnsembleSpec& spec) {
    if (!(spec.spread > 0.0)) throw DomainError("ensemble spread must be positive");
    if (!(spec.center > 0.05 && spec.center <= 1.0))
        throw DomainError("ensemble center must lie in (0.05, 1]");
    if (spec.samples == 0) throw DomainError("ensemble needs at least one sample");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(spec.center, spec.spread);
    std::vector<double> out;
    out.reserve(spec.samples);
    while (out.size() < spec.samples) {
        const double s = normal(rng);
        if (s > 0.05 && s <= 1.0) out.push_back(s);
    }
    return out;
}

LevelSet level_set(const Spectrum& spectrum, std::string id) {
    LevelSet set;
    set.id = std::move(id);
    set.levels = spectrum.converged_levels();
    set.upper = set.levels.empty() ? 0.0 : set.levels.back();
    return set;
}

std::size_t staircase(const LevelSet& set, double eps) {
    return static_cast<std::size_t>(
        std::upper_bound(set.levels.begin(), set.levels.end(), eps) - set.levels.begin());
}

double UnfoldedSpectrum::smooth_count(double eps) const {
    return c2 * eps + c1 * std::sqrt(std::max(0.0, eps)) + c0;
}

UnfoldedSpectrum unfold(const std::vector<double>& levels) {
    if (levels.size() < 100) throw DomainError("unfolding needs at least 100 levels");
    if (!std::is_sorted(levels.begin(), levels.end()))
        throw ContractViolation("levels must be ascending");
    const std::size_t n = levels.size();
    const double scale = levels.back();
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd counts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = levels[i] / scale;
        design(i, 0) = x;
        design(i, 1) = std::sqrt(std::max(0.0, x));
        design(i, 2) = 1.0;
        counts(i) = i + 0.5;
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(counts);
    UnfoldedSpectrum out;
    out.raw = levels;
    out.c2 = coef(0) / scale;
    out.c1 = coef(1) / std::sqrt(scale);
    out.c0 = coef(2);
    out.levels.reserve(n);
    for (double e : levels) out.levels.push_back(out.smooth_count(e));
    return out;
}

UnfoldedSpectrum unfold(const Spectrum& spectrum) { return unfold(spectrum.converged_levels()); }

StatCurve spacing_distribution(const std::vector<UnfoldedSpectrum>& ensemble, int bins,
                               double s_max) {
    if (bins < 1 || !(s_max > 0.0)) throw ContractViolation("histogram needs bins and a range");
    std::vector<double> counts(bins, 0.0);
    std::size_t total = 0;
    for (const auto& u : ensemble) {
        for (std::size_t i = 1; i < u.levels.size(); ++i) {
            const double s = u.levels[i] - u.levels[i - 1];
            ++total;
            const int b = static_cast<int>(s / s_max * bins);
            if (b >= 0 && b < bins) counts[b] += 1.0;
        }
    }
    StatCurve c;
    c.statistic = "P(s)";
    c.samples = ensemble.size();
    const double width = s_max / bins;
    for (int b = 0; b < bins; ++b) {
        c.abscissa.push_back((b + 0.5) * width);
        const double norm = total > 0 ? 1.0 / (total * width) : 0.0;
        c.values.push_back(counts[b] * norm);
        c.errors.push_back(std::sqrt(counts[b]) * norm);
    }
    return c;
}

Estimate number_variance(const std::vector<LevelSet>& ensemble, double eps, double width,
                         const Pooling& pooling) {
    if (width < 0.0) throw DomainError("window width must be non-negative");
    if (pooling.half_count < 0 || (pooling.half_count > 0 && !(pooling.step > 0.0)))
        throw ContractViolation("pooling needs a positive step");
    std::vector<double> counts;
    counts.reserve(ensemble.size() * (2 * pooling.half_count + 1));
    for (const auto& set : ensemble) {
        for (int j = -pooling.half_count; j <= pooling.half_count; ++j) {
            const double center = eps + j * pooling.step;
            require_window(set, center - 0.5 * width, center + 0.5 * width);
            if (width == 0.0) {
                counts.push_back(0.0);
                continue;
            }
            counts.push_back(static_cast<double>(staircase(set, center + 0.5 * width)) -
                             static_cast<double>(staircase(set, center - 0.5 * width)));
        }
    }
    return variance_with_error(counts);
}

double rigidity_single(const LevelSet& set, double eps, double width) {
    if (!(width > 0.0)) throw DomainError("rigidity window must have positive width");
    const double lo = eps - 0.5 * width, hi = eps + 0.5 * width;
    require_window(set, lo, hi);
    auto first = std::upper_bound(set.levels.begin(), set.levels.end(), lo);
    auto last = std::upper_bound(set.levels.begin(), set.levels.end(), hi);
    const double inside = static_cast<double>(last - first);
    // Window mapped to v in [0, 1]; counts centered to keep the quadratic moments small.
    const double shift = 0.5 * inside;
    double j0 = 0.0, j1 = 0.0, j2 = 0.0;
    double v_prev = 0.0;
    double count = -shift;
    auto segment = [&](double v_next) {
        const double dv = v_next - v_prev;
        j0 += count * dv;
        j1 += count * 0.5 * (v_next * v_next - v_prev * v_prev);
        j2 += count * count * dv;
        v_prev = v_next;
    };
    for (auto it = first; it != last; ++it) {
        segment((*it - lo) / width);
        count += 1.0;
    }
    segment(1.0);
    // Normal equations of min over (A, B) of int_0^1 (n - A v - B)^2 dv.
    const double a = 12.0 * (j1 - 0.5 * j0);
    const double b = 12.0 * (j0 / 3.0 - 0.5 * j1);
    return std::max(0.0, j2 - a * j1 - b * j0);
}

Estimate rigidity(const std::vector<LevelSet>& ensemble, double eps, double width) {
    std::vector<double> v;
    v.reserve(ensemble.size());
    for (const auto& set : ensemble) v.push_back(rigidity_single(set, eps, width));
    return mean_with_error(v);
}

Estimate rigidity_saturation(const std::vector<LevelSet>& ensemble, double eps, int points) {
    if (points < 2) throw ContractViolation("plateau average needs at least two widths");
    const double e_max = 0.25 * eps;
    for (const auto& set : ensemble) require_window(set, eps - 0.5 * e_max, eps + 0.5 * e_max);
    std::vector<double> per_sample;
    per_sample.reserve(ensemble.size());
    for (const auto& set : ensemble) {
        double sum = 0.0;
        for (int j = 0; j < points; ++j) {
            const double width = 0.5 * e_max * (1.0 + static_cast<double>(j) / (points - 1));
            sum += rigidity_single(set, eps, width);
        }
        per_sample.push_back(sum / points);
    }
    return mean_with_error(per_sample);
}

Estimate global_variance(const std::vector<LevelSet>& ensemble, double eps) {
    std::vector<double> counts;
    counts.reserve(ensemble.size());
    for (const auto& set : ensemble) {
        require_window(set, eps, eps);
        counts.push_back(static_cast<double>(staircase(set, eps)));
    }
    return variance_with_error(counts);
}

double orbit_amplitude(const PeriodicOrbitFamily& family, double kappa) {
    return kappa * family.c * family.area / std::sqrt(family.length);
}

double sigma_theory(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs, double kappa,
                    double eps, double width) {
    require_catalogs(catalogs);
    double total = 0.0;
    for (const auto& cat : catalogs) {
        double sum = 0.0;
        for (const auto& fam : cat) {
            const double period = Conventions::period(fam.length, eps);
            const double s = std::sin(0.5 * width * period / Conventions::hbar);
            sum += 8.0 * orbit_weight(fam, kappa, eps) * s * s;
        }
        total += sum;
    }
    return total / catalogs.size();
}

double global_variance_theory(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs,
                              double kappa, double eps) {
    require_catalogs(catalogs);
    double total = 0.0;
    for (const auto& cat : catalogs)
        for (const auto& fam : cat) total += 2.0 * orbit_weight(fam, kappa, eps);
    return total / catalogs.size();
}

double fit_kappa(const std::vector<std::vector<PeriodicOrbitFamily>>& catalogs, double eps,
                 double width, double measured) {
    const double unit = sigma_theory(catalogs, 1.0, eps, width);
    if (!(unit > 0.0) || !(measured > 0.0))
        throw NumericFailure("amplitude fit needs positive theory and measurement");
    return std::sqrt(measured / unit);
}

StatCurve number_variance_curve(const std::vector<LevelSet>& ensemble, double eps,
                                const std::vector<double>& widths, const Pooling& pooling) {
    StatCurve c{"Sigma", widths, {}, {}, ensemble.size()};
    for (double w : widths) {
        const Estimate e = number_variance(ensemble, eps, w, pooling);
        c.values.push_back(e.value);
        c.errors.push_back(e.error);
    }
    return c;
}

StatCurve rigidity_curve(const std::vector<LevelSet>& ensemble, double eps,
                         const std::vector<double>& widths) {
    StatCurve c{"Delta3", widths, {}, {}, ensemble.size()};
    for (double w : widths) {
        const Estimate e = rigidity(ensemble, eps, w);
        c.values.push_back(e.value);
        c.errors.push_back(e.error);
    }
    return c;
}

StatCurve saturation_curve(const std::vector<LevelSet>& ensemble,
                           const std::vector<double>& energies) {
    StatCurve c{"Delta3_inf", energies, {}, {}, ensemble.size()};
    for (double eps : energies) {
        const Estimate e = rigidity_saturation(ensemble, eps);
        c.values.push_back(e.value);
        c.errors.push_back(e.error);
    }
    return c;
}

StatCurve global_variance_curve(const std::vector<LevelSet>& ensemble,
                                const std::vector<double>& energies) {
    StatCurve c{"Sigma_g", energies, {}, {}, ensemble.size()};
    for (double eps : energies) {
        const Estimate e = global_variance(ensemble, eps);
        c.values.push_back(e.value);
        c.errors.push_back(e.error);
    }
    return c;
}

StatCurve global_variance_window_curve(const std::vector<LevelSet>& ensemble,
                                       const std::vector<double>& energies, double span, int points) {
    if (span < 0.0 || span >= 1.0) throw DomainError("global variance window span must lie in [0, 1)");
    if (points < 1) throw DomainError("global variance window needs at least one point");
    StatCurve c{"Sigma_g_window", energies, {}, {}, ensemble.size()};
    for (double eps : energies) {
        double value = 0.0, error = 0.0;
        for (int j = 0; j < points; ++j) {
            const double t = points == 1 ? 0.0 : static_cast<double>(j) / (points - 1) - 0.5;
            const Estimate e = global_variance(ensemble, eps * (1.0 + span * t));
            value += e.value;
            error += e.error;
        }
        c.values.push_back(value / points);
        c.errors.push_back(error / points);
    }
    return c;
}

std::vector<double> moving_average(const std::vector<double>& values, int half_window) {
    if (half_window < 0) throw ContractViolation("negative smoothing window");
    const int n = static_cast<int>(values.size());
    std::vector<double> out(values.size());
    for (int i = 0; i < n; ++i) {
        const int w = std::min({half_window, i, n - 1 - i});
        double sum = 0.0;
        for (int j = i - w; j <= i + w; ++j) sum += values[j];
        out[i] = sum / (2 * w + 1);
    }
    return out;
}

std::vector<std::size_t> local_extrema(const std::vector<double>& values) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double left = values[i] - values[i - 1];
        const double right = values[i + 1] - values[i];
        if ((left > 0.0 && right <= 0.0) || (left < 0.0 && right >= 0.0)) out.push_back(i);
    }
    return out;
}

double loglog_slope(const std::vector<double>& abscissa, const std::vector<double>& values) {
    if (abscissa.size() != values.size() || abscissa.size() < 2)
        throw ContractViolation("slope needs matching sequences of at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(abscissa.size());
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        if (!(abscissa[i] > 0.0) || !(values[i] > 0.0))
            throw DomainError("log-log slope needs positive data");
        const double x = std::log(abscissa[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ContractViolation("correlation needs matching sequences of at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> poisson_levels(double density, double eps_max, std::uint64_t seed) {
    if (!(density > 0.0) || !(eps_max > 0.0)) throw DomainError("Poisson levels need positive density");
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(density);
    std::vector<double> out;
    double x = gap(rng);
    while (x <= eps_max) {
        out.push_back(x);
        x += gap(rng);
    }
    return out;
}

}  // namespace billiards
