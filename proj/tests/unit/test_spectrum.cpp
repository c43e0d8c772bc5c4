#include "doctest.h"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "billiards/spectrum.hpp"
#include "fd_oracle.hpp"

using namespace billiards;

namespace {

struct CircleLevel {
    double eps;
    int m;
};

/// Squared Bessel zeros of the orders allowed in a class, from Boost's zero finder.
std::vector<CircleLevel> circle_levels(const SymmetryClass& c, double eps_max) {
    const bool x_odd = c.x_parity == Parity::odd, y_odd = c.y_parity == Parity::odd;
    // sin(m t) is y-odd, cos(m t) y-even; even m keeps or flips x-parity with the sine/cosine.
    const int first = y_odd ? (x_odd ? 2 : 1) : (x_odd ? 1 : 0);
    std::vector<CircleLevel> out;
    for (int m = first; m * m < eps_max; m += 2)
        for (int s = 1;; ++s) {
            const double j = boost::math::cyl_bessel_j_zero(static_cast<double>(m), s);
            if (j * j > eps_max) break;
            out.push_back({j * j, m});
        }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
    return out;
}

std::vector<double> circle_oracle(const SymmetryClass& c, double eps_max) {
    std::vector<double> out;
    for (const auto& l : circle_levels(c, eps_max)) out.push_back(l.eps);
    return out;
}

}  // namespace

TEST_CASE("rectangle closed form") {
    const auto s = rb_spectrum(1.0, 1.0, 8);
    const double p2 = M_PI * M_PI;
    const double expected[] = {2, 5, 5, 8, 10, 10, 13, 13};
    REQUIRE(s.eigenvalues.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(expected[i] * p2));
    CHECK(s.converged_count == 8);
    const auto below = rb_spectrum_below(1.0, 2.0, 100.0);
    for (double e : below.eigenvalues) CHECK(e <= 100.0);
    CHECK(std::is_sorted(below.eigenvalues.begin(), below.eigenvalues.end()));
}

TEST_CASE("Bessel zeros") {
    CHECK(bessel_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(bessel_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-14));
    CHECK(bessel_zero(2, 1) == doctest::Approx(5.135622301840683).epsilon(1e-14));
    for (int m : {0, 3, 17, 60})
        for (int s : {1, 2, 9})
            CHECK(bessel_zero(m, s) ==
                  doctest::Approx(boost::math::cyl_bessel_j_zero(static_cast<double>(m), s)).epsilon(1e-13));
    CHECK_THROWS_AS(bessel_zeros_below(-1, 10.0), DomainError);
}

TEST_CASE("quarter circle levels are squared Bessel zeros in every class") {
    for (int c = 0; c < 4; ++c) {
        const auto& sym = all_symmetry_classes()[c];
        const auto s = cb_spectrum_below(sym, 3000.0);
        const auto oracle = circle_oracle(sym, 3000.0);
        REQUIRE(s.eigenvalues.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(s.eigenvalues[i] - oracle[i]) < 1e-10 * oracle[i]);
    }
}

TEST_CASE("ellipse near sigma = 1 approaches the circle") {
    // Boundary r = 1 + eta cos 2t with eta = (a - b)/2 shifts the m = 1 levels by -/+ eta eps
    // (cos t / sin t) at first order; every other m moves only at second order.
    const auto shape = ellipse_from_sigma(0.999);
    const double eta = 0.5 * (shape.a() - shape.b());
    for (int c = 0; c < 4; ++c) {
        const auto& sym = all_symmetry_classes()[c];
        const auto e = eb_spectrum(0.999, sym, 50);
        REQUIRE(e.converged_count >= 50);
        std::vector<double> predicted;
        bool has_m1 = false;
        for (const auto& l : circle_levels(sym, 4000.0)) {
            const double shift = l.m == 1 ? (sym.x_parity == Parity::odd ? -eta : eta) : 0.0;
            has_m1 = has_m1 || l.m == 1;
            predicted.push_back(l.eps * (1 + shift));
        }
        std::sort(predicted.begin(), predicted.end());
        const auto plain = circle_oracle(sym, 4000.0);
        REQUIRE(predicted.size() >= 50);
        INFO(sym.name());
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(std::abs(e.eigenvalues[i] / predicted[i] - 1.0) < 1e-4);
            if (!has_m1) CHECK(std::abs(e.eigenvalues[i] / plain[i] - 1.0) < 1e-4);
        }
    }
}

TEST_CASE("separation spectrum agrees with the finite-difference oracle") {
    const auto e = eb_spectrum(0.5, SymmetryClass::odd_odd(), 20);
    const auto fd = oracle::quarter_ellipse_fd(std::sqrt(2.0), std::sqrt(0.5), 0.01, 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(std::abs(e.eigenvalues[i] / fd[i] - 1.0) < 5e-3);
}

TEST_CASE("separation and Rayleigh-Ritz routes agree") {
    // Ritz levels are upper bounds converging like k_cut^-3 in the scaled Bessel basis.
    for (int c = 0; c < 4; ++c) {
        const auto& sym = all_symmetry_classes()[c];
        const auto sep = eb_spectrum(0.5, sym, 40);
        const auto coarse = eb_ritz_eigenvalues(0.5, sym, 80.0);
        const auto fine = eb_ritz_eigenvalues(0.5, sym, 160.0);
        REQUIRE(fine.size() >= 40);
        double worst_coarse = 0.0, worst_fine = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
            CHECK(fine[i] >= sep.eigenvalues[i] * (1 - 1e-12));
            worst_coarse = std::max(worst_coarse, coarse[i] / sep.eigenvalues[i] - 1.0);
            worst_fine = std::max(worst_fine, fine[i] / sep.eigenvalues[i] - 1.0);
        }
        INFO(sym.name());
        CHECK(worst_fine < 1e-4);
        CHECK(worst_coarse / worst_fine > 5.0);
    }
}

TEST_CASE("Rayleigh-Ritz levels never rise when the basis grows") {
    const auto sym = SymmetryClass::odd_odd();
    const auto small = eb_ritz_eigenvalues(0.5, sym, 25.0);
    const auto large = eb_ritz_eigenvalues(0.5, sym, 35.0);
    REQUIRE(large.size() >= small.size());
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(large[i] <= small[i] * (1 + 1e-12));
}

TEST_CASE("spectrum invariants") {
    const auto s = eb_spectrum_below(0.5, SymmetryClass::odd_odd(), 2000.0);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(s.eigenvalues.front() > 0.0);
    CHECK(s.converged_count <= s.eigenvalues.size());
    CHECK(s.eigenvalues.back() <= 2000.0);
    CHECK(s.converged.size() == s.eigenvalues.size());
    CHECK(s.symmetry_name() == "odd-odd");
}

TEST_CASE("merging classes drops near-degenerate levels") {
    std::vector<Spectrum> parts(4);
    parts[0].eigenvalues = {1.0, 2.0, 3.0};
    parts[1].eigenvalues = {2.0 * (1 + 1e-9), 4.0};
    parts[2].eigenvalues = {5.0};
    parts[3].eigenvalues = {0.5, 6.0};
    for (auto& s : parts) {
        s.converged.assign(s.eigenvalues.size(), true);
        s.converged_count = s.eigenvalues.size();
    }
    const auto m = merge_classes(parts, 1e-8);
    CHECK(m.eigenvalues.size() == 7);
    CHECK(m.meta.removed == 1);
    CHECK(m.symmetry_name() == "merged");
    CHECK(std::is_sorted(m.eigenvalues.begin(), m.eigenvalues.end()));
    const auto keep = merge_classes(parts, 0.0);
    CHECK(keep.eigenvalues.size() == 8);
    CHECK_THROWS_AS(merge_classes({parts[0], parts[1]}, 0.0), ContractViolation);
}

TEST_CASE("merged circle holds each degenerate pair once") {
    const auto m = merged_circle_spectrum(500.0, 1e-8);
    const auto all = merged_circle_spectrum(500.0, 0.0);
    // For m >= 1 the levels of sin and cos partners coincide; only m = 0 is single.
    std::size_t singles = 0;
    for (int s = 1; boost::math::cyl_bessel_j_zero(0.0, s) < std::sqrt(500.0); ++s) ++singles;
    CHECK(all.eigenvalues.size() - m.eigenvalues.size() == (all.eigenvalues.size() - singles) / 2);
}
