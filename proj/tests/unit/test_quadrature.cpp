#include "doctest.h"

#include <cmath>

#include "billiards/mathieu.hpp"
#include "billiards/quadrature.hpp"

using namespace billiards;

TEST_CASE("Gauss-Legendre is exact through degree 2n - 1") {
    for (int n : {1, 3, 8, 20}) {
        const auto rule = quad::gauss_legendre(n, -1.0, 2.0);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
            const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK_THROWS(quad::gauss_legendre(0, 0.0, 1.0));
}

TEST_CASE("adaptive Simpson") {
    CHECK(quad::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(quad::adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("Mathieu characteristic values against reference tables at q = 1") {
    using mathieu::Family;
    CHECK(mathieu::characteristic_value(Family::ce_even, 1, 1.0, 40) == doctest::Approx(-0.4551386041).epsilon(1e-9));
    CHECK(mathieu::characteristic_value(Family::ce_even, 2, 1.0, 40) == doctest::Approx(4.3713009827).epsilon(1e-9));
    CHECK(mathieu::characteristic_value(Family::ce_odd, 1, 1.0, 40) == doctest::Approx(1.8591080725).epsilon(1e-9));
    CHECK(mathieu::characteristic_value(Family::se_odd, 1, 1.0, 40) == doctest::Approx(-0.1102488170).epsilon(1e-9));
    CHECK(mathieu::characteristic_value(Family::se_even, 1, 1.0, 40) == doctest::Approx(3.9170247731).epsilon(1e-9));
}

TEST_CASE("Mathieu values reduce to squared harmonics at q = 0") {
    using mathieu::Family;
    for (auto f : {Family::ce_even, Family::ce_odd, Family::se_even, Family::se_odd})
        for (int r = 1; r <= 6; ++r) {
            const int h = mathieu::harmonic(f, r);
            CHECK(mathieu::characteristic_value(f, r, 0.0, 30) == doctest::Approx(double(h * h)).epsilon(1e-12));
        }
}
