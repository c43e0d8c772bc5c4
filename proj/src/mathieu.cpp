#include "billiards/mathieu.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace billiards::mathieu {

Family family_for(const SymmetryClass& symmetry) {
    // y -> -y is nu -> -nu, x -> -x is nu -> pi - nu.
    const bool sine = symmetry.y_parity == Parity::odd;
    if (sine) return symmetry.x_parity == Parity::odd ? Family::se_even : Family::se_odd;
    return symmetry.x_parity == Parity::even ? Family::ce_even : Family::ce_odd;
}

int harmonic(Family family, int r) {
    switch (family) {
        case Family::ce_even: return 2 * (r - 1);
        case Family::ce_odd: return 2 * r - 1;
        case Family::se_even: return 2 * r;
        case Family::se_odd: return 2 * r - 1;
    }
    return 0;
}

int default_modes(int r, double q) {
    return r + 40 + static_cast<int>(std::ceil(3.0 * std::sqrt(std::abs(q))));
}

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1
};

Tridiagonal recurrence(Family family, double q, int modes) {
    Tridiagonal t;
    t.diag.resize(modes);
    t.off.assign(modes > 0 ? modes - 1 : 0, q);
    for (int i = 0; i < modes; ++i) {
        const double h = harmonic(family, i + 1);
        t.diag[i] = h * h;
    }
    switch (family) {
        case Family::ce_even:
            if (modes > 1) t.off[0] = std::numbers::sqrt2 * q;
            break;
        case Family::ce_odd: t.diag[0] += q; break;
        case Family::se_odd: t.diag[0] -= q; break;
        case Family::se_even: break;
    }
    return t;
}

/// Number of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& t, double x) {
    int count = 0;
    double p = 1.0;
    const std::size_t n = t.diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double coupling = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
        p = t.diag[i] - x - (i == 0 ? 0.0 : coupling / p);
        if (p == 0.0) p = -1e-300;
        if (p < 0.0) ++count;
    }
    return count;
}

}  // namespace

double characteristic_value(Family family, int r, double q, int modes) {
    if (r < 1) throw ContractViolation("characteristic value index is 1-based");
    if (modes < r + 2) throw ContractViolation("Fourier truncation smaller than the index");
    const Tridiagonal t = recurrence(family, q, modes);
    double lo = t.diag[0], hi = t.diag[0];
    for (std::size_t i = 0; i < t.diag.size(); ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.off[i - 1]);
        if (i + 1 < t.diag.size()) radius += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    // Invariant: count(lo) < r <= count(hi).
    lo -= 1.0;
    hi += 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) >= r) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double radial_phase(Family family, double a, double q, double mu_end, double tolerance) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 1>;
    const bool odd_radial = family == Family::se_even || family == Family::se_odd;
    const double q_end = 2.0 * q * std::cosh(2.0 * mu_end) - a;
    const double q_start = 2.0 * q - a;
    const double scale = std::sqrt(std::max({std::abs(q_end), std::abs(q_start), 1.0}));
    auto rhs = [&](const State& th, State& dth, double mu) {
        const double big_q = 2.0 * q * std::cosh(2.0 * mu) - a;
        const double s = std::sin(th[0]);
        const double c = std::cos(th[0]);
        dth[0] = scale * c * c + (big_q / scale) * s * s;
    };
    State theta{odd_radial ? 0.0 : 0.5 * std::numbers::pi};
    auto stepper =
        odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, theta, 0.0, mu_end, mu_end / 64.0);
    return theta[0];
}

}  // namespace billiards::mathieu
