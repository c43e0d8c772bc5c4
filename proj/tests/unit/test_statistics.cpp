#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "billiards/statistics.hpp"

using namespace billiards;

namespace {

std::vector<LevelSet> poisson_ensemble(std::size_t samples, double eps_max, std::uint64_t seed) {
    std::vector<LevelSet> out;
    for (std::size_t i = 0; i < samples; ++i)
        out.push_back({"p" + std::to_string(i), poisson_levels(1.0, eps_max, seed + i), eps_max});
    return out;
}

std::vector<LevelSet> picket_fences(int samples, double eps_max) {
    std::vector<LevelSet> out;
    for (int s = 0; s < samples; ++s) {
        LevelSet set{"f" + std::to_string(s), {}, eps_max};
        for (double x = (s + 0.5) / samples; x <= eps_max; x += 1.0) set.levels.push_back(x);
        out.push_back(set);
    }
    return out;
}

/// Rigidity by brute force: midpoint sampling of the staircase and the 2x2 normal equations.
double rigidity_brute(const LevelSet& set, double eps, double width, int samples = 200000) {
    const double lo = eps - width / 2, h = width / samples;
    double sx = 0, sxx = 0, sy = 0, sxy = 0, syy = 0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (i + 0.5) * h;
        const double y = static_cast<double>(
            std::upper_bound(set.levels.begin(), set.levels.end(), x) - set.levels.begin());
        sx += x; sxx += x * x; sy += y; sxy += x * y; syy += y * y;
    }
    const double n = samples;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double r = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (i + 0.5) * h;
        const double y = static_cast<double>(
            std::upper_bound(set.levels.begin(), set.levels.end(), x) - set.levels.begin());
        const double d = y - icpt - slope * x;
        r += d * d;
    }
    return r / n;
}

PeriodicOrbitFamily toy_family(double length, double area, double c) {
    PeriodicOrbitFamily f;
    f.length = length;
    f.area = area;
    f.c = c;
    return f;
}

}  // namespace

TEST_CASE("ensemble draws are seeded and bounded") {
    EnsembleSpec spec;
    spec.center = 0.5;
    spec.spread = 0.05;
    spec.samples = 4000;
    spec.seed = 3;
    const auto a = sample_ensemble(spec), b = sample_ensemble(spec);
    CHECK(a == b);
    spec.seed = 4;
    CHECK(sample_ensemble(spec) != a);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    double var = 0.0;
    for (double s : a) var += (s - mean) * (s - mean);
    var /= a.size() - 1;
    CHECK(std::abs(mean - 0.5) < 4 * 0.05 / std::sqrt(4000.0));
    CHECK(std::abs(std::sqrt(var) / 0.05 - 1.0) < 0.05);
    for (double s : a) CHECK((s > 0.05 && s <= 1.0));
    spec.spread = 0.0;
    CHECK_THROWS_AS(sample_ensemble(spec), DomainError);
}

TEST_CASE("Poisson levels: number variance equals the width") {
    const auto ens = poisson_ensemble(400, 1000.0, 100);
    for (double w : {5.0, 20.0}) {
        const auto e = number_variance(ens, 500.0, w);
        CHECK(std::abs(e.value - w) < 4 * e.error);
    }
    const auto r = rigidity(ens, 500.0, 30.0);
    CHECK(std::abs(r.value - 2.0) < 4 * r.error);
    CHECK(std::abs(global_variance(ens, 800.0).value / 800.0 - 1.0) < 0.2);
}

TEST_CASE("Poisson spacings are exponential") {
    std::vector<UnfoldedSpectrum> us;
    for (int i = 0; i < 50; ++i) {
        UnfoldedSpectrum u;
        u.levels = poisson_levels(1.0, 2000.0, 900 + i);
        us.push_back(u);
    }
    const auto p = spacing_distribution(us, 12, 3.0);
    const double w = 3.0 / 12;
    for (std::size_t b = 0; b < p.values.size(); ++b) {
        const double lo = b * w;
        const double expected = (std::exp(-lo) - std::exp(-lo - w)) / w;
        CHECK(std::abs(p.values[b] - expected) < 4 * p.errors[b] + 1e-3);
    }
}

TEST_CASE("picket fence statistics") {
    const auto fences = picket_fences(400, 200.0);
    // Count in a window of width n + f over uniform shifts is n or n + 1: variance f (1 - f).
    for (double w : {3.3, 10.5, 12.8}) {
        const double f = w - std::floor(w);
        CHECK(number_variance(fences, 100.0, w).value == doctest::Approx(f * (1 - f)).epsilon(1e-2));
    }
    CHECK(rigidity(fences, 100.0, 40.0).value == doctest::Approx(1.0 / 12).epsilon(2e-2));
    CHECK(number_variance(fences, 100.0, 7.0).value == doctest::Approx(0.0));
}

TEST_CASE("exact rigidity integral against brute-force least squares") {
    const auto ens = poisson_ensemble(3, 300.0, 7);
    for (const auto& set : ens)
        for (double w : {4.0, 17.5, 60.0}) {
            const double exact = rigidity_single(set, 150.0, w);
            CHECK(exact == doctest::Approx(rigidity_brute(set, 150.0, w)).epsilon(1e-4));
        }
    const auto fence = picket_fences(1, 100.0)[0];
    CHECK(rigidity_single(fence, 50.0, 1e-3) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("unfolding recovers the smooth staircase") {
    // Levels placed where 0.25 e - 0.5 sqrt(e) crosses n - 1/2.
    std::vector<double> levels;
    for (int n = 1; n <= 2000; ++n) {
        const double q = n - 0.5, r = (0.5 + std::sqrt(0.25 + q)) / 0.5;
        levels.push_back(r * r);
    }
    const auto u = unfold(levels);
    CHECK(u.c2 == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(u.c1 == doctest::Approx(-0.5).epsilon(1e-2));
    CHECK(u.smooth_count(levels[999]) == doctest::Approx(999.5).epsilon(1e-3));
    CHECK(u.levels.size() == levels.size());
    for (std::size_t i = 1; i < u.levels.size(); ++i)
        CHECK(std::abs(u.levels[i] - u.levels[i - 1] - 1.0) < 1e-2);
}

TEST_CASE("staircase") {
    LevelSet set{"s", {1.0, 2.0, 2.0, 5.0}, 10.0};
    CHECK(staircase(set, 0.5) == 0);
    CHECK(staircase(set, 2.0) == 3);
    CHECK(staircase(set, 7.0) == 4);
}

TEST_CASE("orbit sums for a single family") {
    const auto f = toy_family(3.0, 2.0, 0.5);
    const double kappa = 0.7, eps = 400.0, width = 1.3;
    CHECK(orbit_amplitude(f, kappa) == doctest::Approx(kappa * 0.5 * 2.0 / std::sqrt(3.0)));
    const double a = orbit_amplitude(f, kappa);
    const double t = 3.0 / (2.0 * std::sqrt(eps));
    const double s = std::sin(width * t / 2);
    CHECK(sigma_theory({{f}}, kappa, eps, width) == doctest::Approx(8 * a * a / (t * t) * s * s));
    CHECK(global_variance_theory({{f}}, kappa, eps) == doctest::Approx(2 * a * a / (t * t)));
    // Averaging over catalogs.
    const auto g = toy_family(4.0, 1.0, 1.0);
    CHECK(global_variance_theory({{f}, {g}}, kappa, eps) ==
          doctest::Approx(0.5 * (global_variance_theory({{f}}, kappa, eps) +
                                 global_variance_theory({{g}}, kappa, eps))));
    const double measured = sigma_theory({{f, g}}, 0.123, eps, width);
    CHECK(fit_kappa({{f, g}}, eps, width, measured) == doctest::Approx(0.123));
    CHECK_THROWS(fit_kappa({{f}}, eps, width, -1.0));
}

TEST_CASE("curve helpers") {
    CHECK(pearson({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
    CHECK(pearson({1, 2, 3, 4}, {8, 6, 4, 2}) == doctest::Approx(-1.0));
    CHECK(pearson({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5));
    CHECK(loglog_slope({1, 2, 4, 8}, {3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)}) ==
          doctest::Approx(0.5));
    const auto avg = moving_average({1, 2, 3, 4, 5}, 1);
    CHECK(avg[0] == doctest::Approx(1.0));
    CHECK(avg[1] == doctest::Approx(2.0));
    CHECK(avg[2] == doctest::Approx(3.0));
    CHECK(avg[4] == doctest::Approx(5.0));
    CHECK(moving_average({1, 2, 6, 4, 5}, 1)[2] == doctest::Approx(4.0));
    const auto ext = local_extrema({0, 2, 1, 3, 3.5, 0});
    REQUIRE(ext.size() == 3);
    CHECK(ext[0] == 1);
    CHECK(ext[1] == 2);
    CHECK(ext[2] == 4);
}

TEST_CASE("Poisson levels are seeded") {
    const auto a = poisson_levels(2.0, 100.0, 5);
    CHECK(a == poisson_levels(2.0, 100.0, 5));
    CHECK(a != poisson_levels(2.0, 100.0, 6));
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(a.back() <= 100.0);
    CHECK(std::abs(static_cast<double>(a.size()) - 200.0) < 4 * std::sqrt(200.0));
}

TEST_CASE("windowed global variance averages the point estimates") {
    const auto ens = poisson_ensemble(40, 600.0, 300);
    const std::vector<double> energies = {200.0, 400.0};
    const auto point = global_variance_curve(ens, energies);
    const auto zero = global_variance_window_curve(ens, energies, 0.0, 5);
    for (std::size_t i = 0; i < energies.size(); ++i) CHECK(zero.values[i] == doctest::Approx(point.values[i]));
    const auto three = global_variance_window_curve(ens, energies, 0.2, 3);
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double e = energies[i];
        const double mean = (global_variance(ens, 0.9 * e).value + global_variance(ens, e).value +
                             global_variance(ens, 1.1 * e).value) / 3.0;
        CHECK(three.values[i] == doctest::Approx(mean));
    }
    CHECK_THROWS_AS(global_variance_window_curve(ens, energies, 1.0, 3), DomainError);
    CHECK_THROWS_AS(global_variance_window_curve(ens, energies, 0.1, 0), DomainError);
}
