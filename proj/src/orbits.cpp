#include "billiards/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

void require_ellipse(const BilliardShape& shape) {
    if (shape.kind() != ShapeKind::ellipse) throw ContractViolation("orbit engine needs an ellipse");
    if (shape.b() > shape.a()) throw DomainError("orbit engine expects b <= a");
}

double cross(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return u.x() * v.y() - u.y() * v.x();
}

double wrap_positive(double d) {
    d = std::fmod(d, 2.0 * pi);
    if (d < 0.0) d += 2.0 * pi;
    return d;
}

double wrap_signed(double d) {
    d = wrap_positive(d);
    return d > pi ? d - 2.0 * pi : d;
}

Eigen::Vector2d boundary_point(const BilliardShape& s, double t) {
    return {s.a() * std::cos(t), s.b() * std::sin(t)};
}

double eccentric_anomaly(const BilliardShape& s, const Eigen::Vector2d& p) {
    return std::atan2(p.y() / s.b(), p.x() / s.a());
}

/// Chords of a closed polygon, as (unit normal, signed offset).
std::vector<std::pair<Eigen::Vector2d, double>> chord_lines(const std::vector<Eigen::Vector2d>& v) {
    std::vector<std::pair<Eigen::Vector2d, double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector2d& p = v[i];
        const Eigen::Vector2d& q = v[(i + 1) % v.size()];
        Eigen::Vector2d d = (q - p).normalized();
        Eigen::Vector2d n(-d.y(), d.x());
        out.emplace_back(n, n.dot(p));
    }
    return out;
}

bool is_hyperbolic(double lambda) { return lambda < 0.0; }

/// Libration angle on the O-type phase circle; the top/bottom sign flip makes it advance
/// monotonically across alternating bounces.
double libration_angle(const BilliardShape& s, const BounceState& st, double lambda) {
    const double f = s.focal_half_distance();
    const double kappa = f * f + lambda;
    const double c = st.point.x() / s.a();
    const double pnu = std::sqrt(std::max(0.0, kappa - f * f * c * c));
    const Eigen::Vector2d dnu(-s.a() * st.point.y() / s.b(), s.b() * st.point.x() / s.a());
    double sign = st.direction.dot(dnu) >= 0.0 ? 1.0 : -1.0;
    if (st.point.y() < 0.0) sign = -sign;
    return std::atan2(sign * pnu, f * c);
}

struct PhaseTracker {
    const BilliardShape& shape;
    double lambda;
    bool librating;
    double last;
    double total = 0.0;

    PhaseTracker(const BilliardShape& s, double lam, const BounceState& start)
        : shape(s), lambda(lam), librating(is_hyperbolic(lam)), last(angle(start)) {}

    double angle(const BounceState& st) const {
        return librating ? libration_angle(shape, st, lambda) : eccentric_anomaly(shape, st.point);
    }

    void advance(const BounceState& st) {
        const double now = angle(st);
        total += wrap_positive(now - last);
        last = now;
    }
};

double phase_after(const BilliardShape& s, double lambda, int bounces) {
    BounceState st = canonical_start(s, lambda);
    PhaseTracker tracker(s, lambda, st);
    for (int i = 0; i < bounces; ++i) {
        st = billiard_map(s, st).state;
        tracker.advance(st);
    }
    return tracker.total;
}

/// Parameter range over which a family member can be launched from the upper arc.
std::pair<double, double> launch_range(const BilliardShape& s, const PeriodicOrbitFamily& fam) {
    if (!fam.caustic || fam.caustic->kind == ConicKind::ellipse) return {0.0, 2.0 * pi};
    const double a = s.a(), b = s.b();
    const double cap_a = fam.caustic->semi_x * fam.caustic->semi_x;
    const double cap_b = fam.caustic->semi_y * fam.caustic->semi_y;
    const double y2 = (a * a - cap_a) / (a * a / (b * b) + cap_a / cap_b);
    const double x = std::sqrt(cap_a * (1.0 + y2 / cap_b));
    const double t0 = std::acos(std::min(1.0, x / a));
    return {t0, pi - t0};
}

/// Family member started at parameter u in (0, 1) of the launch range.
BounceState member_start(const BilliardShape& s, const PeriodicOrbitFamily& fam, double u) {
    const auto [lo, hi] = launch_range(s, fam);
    const double t = lo + (hi - lo) * u;
    if (!fam.caustic) {
        const Eigen::Vector2d p = boundary_point(s, t);
        return {p, -p.normalized()};
    }
    auto st = tangent_state(s, t, fam.caustic->lambda);
    if (!st) throw DegenerateOrbit("no tangent from the launch point");
    return *st;
}

double member_length(const BilliardShape& s, BounceState st, int bounces) {
    double length = 0.0;
    for (int i = 0; i < bounces; ++i) {
        const Bounce next = billiard_map(s, st);
        length += next.chord;
        st = next.state;
    }
    return length;
}

bool primitive_libration(int n, int m) {
    if (n % 2 != 0) return false;
    const int g = std::gcd(n, m);
    const int q = n / g;
    return (q % 2 == 0 && g == 1) || (q % 2 == 1 && g == 2);
}

/// Lower end of the libration winding range, reached as the hyperbola collapses onto the minor axis.
double min_libration_winding(const BilliardShape& s) {
    const double mu0 = std::atanh(s.b() / s.a());
    return 2.0 / pi * std::atan(std::tanh(0.5 * mu0));
}

bool family_less(const PeriodicOrbitFamily& x, const PeriodicOrbitFamily& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.n != y.n) return x.n < y.n;
    return x.m < y.m;
}

}  // namespace

Bounce billiard_map(const BilliardShape& shape, const BounceState& state) {
    require_ellipse(shape);
    const double a2 = shape.a() * shape.a(), b2 = shape.b() * shape.b();
    const Eigen::Vector2d& p = state.point;
    const Eigen::Vector2d& d = state.direction;
    const double qa = d.x() * d.x() / a2 + d.y() * d.y() / b2;
    const double qb = 2.0 * (p.x() * d.x() / a2 + p.y() * d.y() / b2);
    const double qc = p.x() * p.x() / a2 + p.y() * p.y() / b2 - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(disc >= 0.0)) throw DegenerateOrbit("ray misses the boundary");
    const double root = std::sqrt(disc);
    if (-qb + root <= 1e-14 * root + 1e-300) throw DegenerateOrbit("ray is tangent or outward");
    const double s = (-qb + root) / (2.0 * qa);

    Eigen::Vector2d q = p + s * d;
    q /= std::sqrt(q.x() * q.x() / a2 + q.y() * q.y() / b2);
    const Eigen::Vector2d normal = Eigen::Vector2d(q.x() / a2, q.y() / b2).normalized();
    Eigen::Vector2d out = d - 2.0 * d.dot(normal) * normal;
    out.normalize();
    return {{q, out}, s};
}

double caustic_invariant(const BilliardShape& shape, const BounceState& state) {
    require_ellipse(shape);
    const double f = shape.focal_half_distance();
    const Eigen::Vector2d n(-state.direction.y(), state.direction.x());
    const double offset = n.dot(state.point);
    const double lambda = offset * offset - f * f * n.x() * n.x();
    if (std::abs(lambda) < 1e-13 * shape.a() * shape.a())
        throw DegenerateOrbit("chord passes through a focus");
    return lambda;
}

std::optional<BounceState> tangent_state(const BilliardShape& shape, double t, double lambda) {
    require_ellipse(shape);
    confocal_conic(shape, lambda);  // range check
    const double f = shape.focal_half_distance();
    const Eigen::Vector2d p = boundary_point(shape, t);
    const double qa = p.x() * p.x() - f * f - lambda;
    const double qb = p.x() * p.y();
    const double qc = p.y() * p.y() - lambda;
    Eigen::Matrix2d m;
    m << qc, -qb, -qb, qa;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    const double e1 = eig.eigenvalues()(0), e2 = eig.eigenvalues()(1);
    const double scale = std::abs(e1) + std::abs(e2);
    if (!(e1 < -1e-14 * scale) || !(e2 > 1e-14 * scale)) return std::nullopt;
    const Eigen::Vector2d v1 = eig.eigenvectors().col(0), v2 = eig.eigenvectors().col(1);
    const Eigen::Vector2d inward_normal = -Eigen::Vector2d(p.x() / (shape.a() * shape.a()),
                                                           p.y() / (shape.b() * shape.b()));
    std::optional<BounceState> best;
    for (double sign : {1.0, -1.0}) {
        Eigen::Vector2d d = (std::sqrt(e2) * v1 + sign * std::sqrt(-e1) * v2).normalized();
        if (d.dot(inward_normal) < 0.0) d = -d;
        if (!best || cross(p, d) > cross(p, best->direction)) best = BounceState{p, d};
    }
    return best;
}

double winding_phase(const BilliardShape& shape, const BounceState& state, double lambda) {
    require_ellipse(shape);
    return is_hyperbolic(lambda) ? libration_angle(shape, state, lambda)
                                 : eccentric_anomaly(shape, state.point);
}

BounceState canonical_start(const BilliardShape& shape, double lambda) {
    const double t = is_hyperbolic(lambda) ? 0.5 * pi : 0.0;
    auto st = tangent_state(shape, t, lambda);
    if (!st) throw DegenerateOrbit("no tangent from the canonical start");
    return *st;
}

RotationEstimate rotation_number(const BilliardShape& shape, double lambda, int iterations) {
    if (iterations < 1) throw ContractViolation("rotation number needs at least one bounce");
    const double total = phase_after(shape, lambda, iterations);
    return {total / (2.0 * pi * iterations), 1.0 / iterations};
}

std::string to_string(OrbitKind kind) {
    switch (kind) {
        case OrbitKind::R: return "R";
        case OrbitKind::O: return "O";
        case OrbitKind::isolated: return "isolated";
        case OrbitKind::lattice: return "lattice";
    }
    return "?";
}

std::string PeriodicOrbitFamily::label() const {
    std::ostringstream os;
    if (quarter) os << "Q";
    switch (kind) {
        case OrbitKind::R: os << "R(" << primitive_n() << "," << primitive_m() << ")"; break;
        case OrbitKind::O: os << "O(" << primitive_n() << "," << primitive_m() << ")"; break;
        case OrbitKind::isolated: os << (primitive_m() == 0 ? "A(minor)" : "A(major)"); break;
        case OrbitKind::lattice: os << "(" << n << "," << m << ")"; return os.str();
    }
    if (repetition > 1) os << "x" << repetition;
    return os.str();
}

std::string PeriodicOrbitFamily::stability() const {
    if (!stability_trace) return "marginal";
    const double tr = std::abs(*stability_trace);
    if (tr < 2.0 - 1e-9) return "stable";
    if (tr > 2.0 + 1e-9) return "unstable";
    return "marginal";
}

PeriodicOrbitFamily find_family(const BilliardShape& shape, int n, int m, OrbitKind kind,
                                const FamilyOptions& options) {
    require_ellipse(shape);
    if (n < 2 || m < 1 || 2 * m > n) throw ContractViolation("winding numbers need 1 <= m <= n/2");
    const double a = shape.a(), b = shape.b();

    PeriodicOrbitFamily fam;
    fam.kind = kind;
    fam.n = n;
    fam.m = m;

    if (kind == OrbitKind::R) {
        if (std::gcd(n, m) != 1) throw ContractViolation("R family needs coprime (n, m)");
        if (2 * m == n) {
            if (!shape.is_circle()) throw FamilyNotFound("R(2,1) is the isolated axis pair");
            fam.c = 0.5;
            fam.representative = {{a, 0.0}, {-a, 0.0}};
            fam.length = 4.0 * a;
            fam.area = family_area(shape, fam);
            return fam;
        }
    } else if (kind == OrbitKind::O) {
        if (!primitive_libration(n, m)) throw ContractViolation("O family (n, m) is not primitive");
        if (shape.is_circle()) throw FamilyNotFound("the circle has no librating orbits");
        if (2 * m == n) throw FamilyNotFound("O winding 1/2 is the separatrix");
    } else {
        throw ContractViolation("find_family handles R and O families");
    }

    const double f = shape.focal_half_distance();
    double lo, hi;
    if (kind == OrbitKind::R) {
        lo = 1e-13 * b * b;
        hi = b * b * (1.0 - 1e-12);
    } else {
        lo = -f * f * (1.0 - 1e-12);
        hi = -1e-13 * f * f;
    }
    // Winding decreases with lambda for R and increases for O.
    auto g = [&](double lam) { return phase_after(shape, lam, n) - 2.0 * pi * m; };
    const double sign_lo = kind == OrbitKind::R ? 1.0 : -1.0;
    if (g(lo) * sign_lo <= 0.0 || g(hi) * sign_lo >= 0.0)
        throw FamilyNotFound("winding " + std::to_string(m) + "/" + std::to_string(n) +
                             " lies outside the caustic range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) * sign_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo > options.lambda_tolerance) throw NumericFailure("caustic bisection stalled");
    const double lambda = 0.5 * (lo + hi);
    fam.caustic = confocal_conic(shape, lambda);

    BounceState st = canonical_start(shape, lambda);
    const BounceState start = st;
    for (int i = 0; i < n; ++i) {
        fam.representative.push_back(st.point);
        const Bounce next = billiard_map(shape, st);
        fam.length += next.chord;
        st = next.state;
    }
    const double closure =
        std::max((st.point - start.point).norm() / a, (st.direction - start.direction).norm());
    if (closure > options.closure_tolerance)
        throw FamilyNotFound(fam.label() + " fails to close (mismatch " + std::to_string(closure) +
                             ")");
    fam.area = family_area(shape, fam);
    return fam;
}

PeriodicOrbitFamily repeated(const PeriodicOrbitFamily& family, int times) {
    if (times < 1) throw ContractViolation("repetition count must be positive");
    PeriodicOrbitFamily out = family;
    out.n *= times;
    out.m *= times;
    out.repetition *= times;
    out.length *= times;
    return out;
}

double family_length_constancy(const BilliardShape& shape, const PeriodicOrbitFamily& family,
                               int starts) {
    if (starts < 2) throw ContractViolation("length constancy needs at least two starts");
    if (family.kind != OrbitKind::R && family.kind != OrbitKind::O) return 0.0;
    const int bounces = family.n;
    double lo = HUGE_VAL, hi = -HUGE_VAL, sum = 0.0;
    for (int j = 0; j < starts; ++j) {
        const double u = (j + 0.5) / starts;
        const double len = member_length(shape, member_start(shape, family, u), bounces);
        lo = std::min(lo, len);
        hi = std::max(hi, len);
        sum += len;
    }
    return (hi - lo) / (sum / starts);
}

double family_area(const BilliardShape& shape, const PeriodicOrbitFamily& family) {
    switch (family.kind) {
        case OrbitKind::isolated: return 0.0;
        case OrbitKind::lattice: return shape.a() * shape.b();
        default: break;
    }
    require_ellipse(shape);
    const double a = shape.a(), b = shape.b();
    if (!family.caustic) return pi * a * b;
    const ConfocalConic& cc = *family.caustic;
    if (cc.kind == ConicKind::ellipse) return pi * (a * b - cc.semi_x * cc.semi_y);

    // Two caps of the ellipse beyond the hyperbola branches stay uncovered.
    const double cap_a = cc.semi_x * cc.semi_x, cap_b = cc.semi_y * cc.semi_y;
    const double y_max = std::sqrt((a * a - cap_a) / (a * a / (b * b) + cap_a / cap_b));
    auto width = [&](double y) {
        const double xe = a * std::sqrt(std::max(0.0, 1.0 - y * y / (b * b)));
        const double xh = std::sqrt(cap_a * (1.0 + y * y / cap_b));
        return std::max(0.0, xe - xh);
    };
    const double cap = quad::adaptive_simpson(width, -y_max, y_max, 1e-14);
    return pi * a * b - 2.0 * cap;
}

double family_area_monte_carlo(const BilliardShape& shape, const PeriodicOrbitFamily& family,
                               int members, std::uint64_t seed, int grid) {
    require_ellipse(shape);
    if (members < 1 || grid < 16) throw ContractViolation("Monte Carlo area needs members and a grid");
    if (family.kind != OrbitKind::R && family.kind != OrbitKind::O) return family_area(shape, family);
    const double a = shape.a(), b = shape.b();

    // Coverage on a fine and a half-resolution grid; the edge bias is linear in the cell size.
    struct Raster {
        double h;
        int nx, ny;
        std::vector<char> covered;
    };
    std::array<Raster, 2> rasters;
    for (int k = 0; k < 2; ++k) {
        Raster& r = rasters[k];
        const int cells = k == 0 ? grid : grid / 2;
        r.h = 2.0 * a / cells;
        r.nx = cells;
        r.ny = static_cast<int>(std::ceil(2.0 * b / r.h));
        r.covered.assign(static_cast<std::size_t>(r.nx) * r.ny, 0);
    }
    auto mark = [&](Raster& r, const Eigen::Vector2d& p) {
        const int i = std::clamp(static_cast<int>((p.x() + a) / r.h), 0, r.nx - 1);
        const int j = std::clamp(static_cast<int>((p.y() + b) / r.h), 0, r.ny - 1);
        r.covered[static_cast<std::size_t>(j) * r.nx + i] = 1;
    };

    std::mt19937_64 rng(seed);
    const int bounces = family.primitive_n();
    const double step = rasters[0].h / 4.0;
    for (int k = 0; k < members; ++k) {
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        BounceState st = member_start(shape, family, u);
        for (int i = 0; i < bounces; ++i) {
            const Bounce next = billiard_map(shape, st);
            const int steps = static_cast<int>(std::ceil(next.chord / step));
            for (int s = 0; s <= steps; ++s) {
                const Eigen::Vector2d p = st.point + (next.chord * s / steps) * st.direction;
                for (Raster& r : rasters) mark(r, p);
            }
            st = next.state;
        }
    }
    std::array<double, 2> est{};
    for (int k = 0; k < 2; ++k) {
        const Raster& r = rasters[k];
        est[k] = static_cast<double>(std::count(r.covered.begin(), r.covered.end(), 1)) * r.h * r.h;
    }
    const double ratio = rasters[1].h / rasters[0].h;
    return (ratio * est[0] - est[1]) / (ratio - 1.0);
}

double monodromy_trace(const BilliardShape& shape, const BounceState& start, int bounces) {
    require_ellipse(shape);
    if (bounces < 1) throw ContractViolation("monodromy needs at least one bounce");
    const double a = shape.a(), b = shape.b();
    auto tangent = [&](double t) { return Eigen::Vector2d(-a * std::sin(t), b * std::cos(t)).normalized(); };
    auto to_state = [&](double t, double p) {
        const Eigen::Vector2d pt = boundary_point(shape, t);
        const Eigen::Vector2d tan = tangent(t);
        const Eigen::Vector2d inward = Eigen::Vector2d(tan.y(), -tan.x()) * -1.0;
        const double along = std::sqrt(std::max(0.0, 1.0 - p * p));
        return BounceState{pt, (p * tan + along * inward).normalized()};
    };
    auto iterate = [&](double t, double p) {
        BounceState st = to_state(t, p);
        for (int i = 0; i < bounces; ++i) st = billiard_map(shape, st).state;
        const double t1 = eccentric_anomaly(shape, st.point);
        return Eigen::Vector2d(t + wrap_signed(t1 - t), st.direction.dot(tangent(t1)));
    };
    const double t0 = eccentric_anomaly(shape, start.point);
    const double p0 = start.direction.dot(tangent(t0));
    const double h = 1e-6;
    Eigen::Matrix2d jac;
    jac.col(0) = (iterate(t0 + h, p0) - iterate(t0 - h, p0)) / (2.0 * h);
    jac.col(1) = (iterate(t0, p0 + h) - iterate(t0, p0 - h)) / (2.0 * h);
    return jac.trace();
}

std::array<PeriodicOrbitFamily, 2> axis_orbits(const BilliardShape& shape) {
    require_ellipse(shape);
    const double a = shape.a(), b = shape.b();
    std::array<PeriodicOrbitFamily, 2> out;
    const BounceState starts[2] = {{{0.0, b}, {0.0, -1.0}}, {{a, 0.0}, {-1.0, 0.0}}};
    for (int k = 0; k < 2; ++k) {
        PeriodicOrbitFamily& fam = out[k];
        fam.kind = OrbitKind::isolated;
        fam.n = 2;
        fam.m = k;
        fam.c = 0.5;
        fam.area = 0.0;
        fam.length = k == 0 ? 4.0 * b : 4.0 * a;
        fam.representative = {starts[k].point, -starts[k].point};
        fam.stability_trace = monodromy_trace(shape, starts[k], 2);
    }
    return out;
}

std::vector<PeriodicOrbitFamily> cb_catalog(int n_max) {
    if (n_max < 2) throw ContractViolation("circle catalog needs n_max >= 2");
    const BilliardShape disk = BilliardShape::ellipse(1.0, 1.0);
    std::vector<PeriodicOrbitFamily> out;
    for (int n = 2; n <= n_max; ++n) {
        for (int m = 1; 2 * m <= n; ++m) {
            PeriodicOrbitFamily fam;
            fam.kind = OrbitKind::R;
            fam.n = n;
            fam.m = m;
            fam.repetition = std::gcd(n, m);
            const double angle = pi * m / n;
            fam.length = 2.0 * n * std::sin(angle);
            fam.area = pi * std::sin(angle) * std::sin(angle);
            if (2 * m == n) {
                fam.c = 0.5;
            } else {
                fam.caustic = confocal_conic(disk, std::cos(angle) * std::cos(angle));
            }
            for (int j = 0; j < fam.primitive_n(); ++j) {
                const double t = 2.0 * angle * j;
                fam.representative.emplace_back(std::cos(t), std::sin(t));
            }
            out.push_back(std::move(fam));
        }
    }
    std::sort(out.begin(), out.end(), family_less);
    return out;
}

std::vector<PeriodicOrbitFamily> rb_catalog(double a, double b, double l_max) {
    const BilliardShape rect = BilliardShape::rectangle(a, b);
    if (!(l_max > 0.0)) throw DomainError("length cutoff must be positive");
    std::vector<PeriodicOrbitFamily> out;
    const int p_max = static_cast<int>(std::floor(l_max / (2.0 * a)));
    const int q_max = static_cast<int>(std::floor(l_max / (2.0 * b)));
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            if (p == 0 && q == 0) continue;
            const double len = 2.0 * std::hypot(p * a, q * b);
            if (len > l_max) continue;
            PeriodicOrbitFamily fam;
            fam.kind = OrbitKind::lattice;
            fam.n = p;
            fam.m = q;
            fam.repetition = std::gcd(p, q);
            fam.length = len;
            fam.area = family_area(rect, fam);
            fam.c = (p == 0 || q == 0) ? 0.5 : 1.0;
            out.push_back(std::move(fam));
        }
    }
    std::sort(out.begin(), out.end(), family_less);
    return out;
}

Catalog eb_catalog(const BilliardShape& shape, const CatalogOptions& options) {
    require_ellipse(shape);
    if (!(options.l_max > 0.0)) throw DomainError("length cutoff must be positive");
    const double l_max = options.l_max;
    Catalog cat;
    std::vector<PeriodicOrbitFamily> primitives;
    auto attempt = [&](int n, int m, OrbitKind kind) -> std::optional<PeriodicOrbitFamily> {
        try {
            return find_family(shape, n, m, kind, options.family);
        } catch (const FamilyNotFound& e) {
            cat.warnings.emplace_back(e.what());
        } catch (const DegenerateOrbit& e) {
            cat.warnings.emplace_back(e.what());
        } catch (const NumericFailure& e) {
            cat.warnings.emplace_back(e.what());
        }
        return std::nullopt;
    };

    // Rotating families: for fixed m the length grows with n toward m times the perimeter.
    const int first_n = shape.is_circle() ? 2 : 3;
    for (int m = 1; 2 * m + (shape.is_circle() ? 0 : 1) <= options.max_bounces; ++m) {
        bool any = false;
        for (int n = std::max(first_n, 2 * m + (shape.is_circle() ? 0 : 1)); n <= options.max_bounces; ++n) {
            if (std::gcd(n, m) != 1) continue;
            auto fam = attempt(n, m, OrbitKind::R);
            if (!fam) continue;
            if (fam->length > l_max) break;
            any = true;
            primitives.push_back(std::move(*fam));
        }
        if (!any) break;
    }

    if (!shape.is_circle()) {
        const double w_min = min_libration_winding(shape);
        int misses = 0;
        for (int n = 4; n <= options.max_bounces && misses < 3; n += 2) {
            double shortest_here = HUGE_VAL;
            for (int m = 1; 2 * m < n; ++m) {
                if (!primitive_libration(n, m)) continue;
                if (static_cast<double>(m) / n <= w_min + 1e-12) continue;
                auto fam = attempt(n, m, OrbitKind::O);
                if (!fam) continue;
                shortest_here = std::min(shortest_here, fam->length);
                if (fam->length <= l_max) primitives.push_back(std::move(*fam));
            }
            misses = shortest_here > l_max ? misses + 1 : 0;
        }
        for (const auto& axis : axis_orbits(shape)) primitives.push_back(axis);
    }

    for (const auto& fam : primitives) {
        cat.families.push_back(fam);
        if (!options.include_repetitions) continue;
        for (int r = 2; r * fam.length <= l_max; ++r) {
            PeriodicOrbitFamily rep = repeated(fam, r);
            if (rep.kind == OrbitKind::isolated) {
                const BounceState start{fam.representative[0],
                                        (fam.representative[1] - fam.representative[0]).normalized()};
                rep.stability_trace = monodromy_trace(shape, start, rep.n);
            }
            cat.families.push_back(std::move(rep));
        }
    }
    std::sort(cat.families.begin(), cat.families.end(), family_less);
    return cat;
}

std::vector<PeriodicOrbitFamily> fold_to_quarter(const std::vector<PeriodicOrbitFamily>& families,
                                                 double l_max) {
    std::vector<PeriodicOrbitFamily> out;
    for (const auto& fam : families) {
        if (!fam.primitive() || fam.quarter || fam.kind == OrbitKind::lattice) continue;
        // Isolated axis orbits run along a wall of the quarter and keep half their length.
        const int bounces = fam.kind == OrbitKind::isolated ? 1 : fam.n / std::gcd(fam.n, 2 * fam.m);
        const double base = fam.length * bounces / fam.n;
        for (int r = 1; r * base <= l_max; ++r) {
            PeriodicOrbitFamily q = fam;
            q.quarter = true;
            q.n = bounces * r;
            // Half-turns (R) or half-librations (O) per closed quarter orbit.
            const int turns = fam.kind == OrbitKind::isolated ? fam.m : 2 * bounces * fam.m / fam.n;
            q.m = turns * r;
            q.repetition = r;
            q.length = base * r;
            q.area = fam.area / 4.0;
            q.representative.clear();
            out.push_back(std::move(q));
        }
    }
    std::sort(out.begin(), out.end(), family_less);
    return out;
}

std::vector<PeriodicOrbitFamily> shortest(std::vector<PeriodicOrbitFamily> families,
                                          std::size_t count) {
    std::sort(families.begin(), families.end(), family_less);
    if (families.size() > count) families.resize(count);
    return families;
}

std::vector<FamilyCheck> check_invariants(const BilliardShape& shape,
                                          const std::vector<PeriodicOrbitFamily>& families,
                                          const InvariantThresholds& thresholds) {
    require_ellipse(shape);
    const double f = shape.focal_half_distance();
    std::vector<FamilyCheck> out;
    for (const auto& fam : families) {
        if (fam.kind != OrbitKind::R && fam.kind != OrbitKind::O) continue;
        if (!fam.caustic) continue;
        FamilyCheck chk;
        chk.label = fam.label();
        chk.length = fam.length;
        const double lambda = fam.caustic->lambda;
        // Symmetric representatives can repeat normals; pool generic members instead.
        std::vector<std::pair<Eigen::Vector2d, double>> lines;
        for (double u : {0.137, 0.391, 0.713}) {
            BounceState st = member_start(shape, fam, u);
            std::vector<Eigen::Vector2d> vertices;
            for (int i = 0; i < fam.primitive_n(); ++i) {
                vertices.push_back(st.point);
                st = billiard_map(shape, st).state;
            }
            const auto more = chord_lines(vertices);
            lines.insert(lines.end(), more.begin(), more.end());
        }

        // Unconstrained dual conic alpha n_x^2 + beta n_y^2 = p^2 through every chord.
        Eigen::MatrixXd design(lines.size(), 2);
        Eigen::VectorXd rhs(lines.size());
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const auto& [nrm, off] = lines[i];
            design(i, 0) = nrm.x() * nrm.x();
            design(i, 1) = nrm.y() * nrm.y();
            rhs(i) = off * off;
            const double support = std::sqrt(std::max(
                0.0, (f * f + lambda) * nrm.x() * nrm.x() + lambda * nrm.y() * nrm.y()));
            chk.tangency = std::max(chk.tangency, std::abs(std::abs(off) - support));
        }
        const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
        const double f2_fit = coef(0) - coef(1);
        const double f_fit = std::sqrt(std::max(0.0, f2_fit));
        chk.confocality = f_fit + f > 1e-6 ? std::abs(f2_fit - f * f) / (f_fit + f)
                                           : std::sqrt(std::abs(f2_fit - f * f));

        chk.length_spread = family_length_constancy(shape, fam, thresholds.length_starts);

        BounceState st = canonical_start(shape, lambda);
        const double lambda0 = caustic_invariant(shape, st);
        for (int i = 0; i < thresholds.conservation_bounces; ++i) {
            st = billiard_map(shape, st).state;
            chk.conservation = std::max(chk.conservation, std::abs(caustic_invariant(shape, st) - lambda0));
        }
        out.push_back(chk);
    }
    return out;
}

bool passes(const FamilyCheck& check, const InvariantThresholds& thresholds) {
    return check.confocality <= thresholds.confocality && check.tangency <= thresholds.tangency &&
           check.length_spread <= thresholds.length_spread &&
           check.conservation <= thresholds.conservation;
}

}  // namespace billiards
