#include "billiards/spectrum.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "billiards/mathieu.hpp"
#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

constexpr double pi = std::numbers::pi;

void finalize_certification(Spectrum& spectrum) {
    spectrum.converged_count = 0;
    while (spectrum.converged_count < spectrum.converged.size() &&
           spectrum.converged[spectrum.converged_count])
        ++spectrum.converged_count;
}

Spectrum closed_form(const BilliardShape& shape, std::optional<SymmetryClass> symmetry,
                     std::vector<double> values, std::string solver) {
    Spectrum s;
    s.shape = shape;
    s.symmetry = symmetry;
    std::sort(values.begin(), values.end());
    s.eigenvalues = std::move(values);
    s.converged.assign(s.eigenvalues.size(), true);
    s.converged_count = s.eigenvalues.size();
    s.meta.solver = std::move(solver);
    return s;
}

double bessel_j(int m, double x) { return boost::math::cyl_bessel_j(m, x); }

double refine_bessel_root(int m, double lo, double hi) {
    auto f = [m](double x) { return bessel_j(m, x); };
    boost::uintmax_t iterations = 200;
    auto [left, right] = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iterations);
    const double root = 0.5 * (left + right);
    if (std::abs(f(root)) > 1e-12) {
        std::ostringstream os;
        os << "Bessel zero refinement for m=" << m << " near " << root << " missed 1e-12";
        throw NumericFailure(os.str());
    }
    return root;
}

}  // namespace

std::vector<double> Spectrum::converged_levels() const {
    return {eigenvalues.begin(), eigenvalues.begin() + static_cast<long>(converged_count)};
}

std::vector<double> Spectrum::momenta() const {
    std::vector<double> k(eigenvalues.size());
    std::transform(eigenvalues.begin(), eigenvalues.end(), k.begin(),
                   [](double e) { return Conventions::momentum(e); });
    return k;
}

Spectrum rb_spectrum_below(double a, double b, double eps_max) {
    const auto shape = BilliardShape::rectangle(a, b);
    std::vector<double> values;
    const double pa = pi * pi / (a * a), pb = pi * pi / (b * b);
    for (long p = 1; pa * p * p + pb <= eps_max; ++p) {
        for (long q = 1;; ++q) {
            const double e = pa * p * p + pb * q * q;
            if (e > eps_max) break;
            values.push_back(e);
        }
    }
    return closed_form(shape, std::nullopt, std::move(values), "rectangle-closed-form");
}

Spectrum rb_spectrum(double a, double b, std::size_t count) {
    if (count == 0) return closed_form(BilliardShape::rectangle(a, b), std::nullopt, {}, "rectangle-closed-form");
    // Weyl estimate with margin, grown until enough levels exist.
    double eps_max = 4.0 * pi * (count + 2.0 * std::sqrt(static_cast<double>(count)) + 10.0) / (a * b);
    for (;;) {
        Spectrum s = rb_spectrum_below(a, b, eps_max);
        if (s.eigenvalues.size() >= count) {
            s.eigenvalues.resize(count);
            s.converged.resize(count);
            s.converged_count = count;
            return s;
        }
        eps_max *= 1.5;
    }
}

std::vector<double> bessel_zeros_below(int m, double x_max) {
    if (m < 0) throw DomainError("Bessel order must be non-negative");
    std::vector<double> zeros;
    // j_{m,1} > m, and consecutive zeros are more than 2.5 apart.
    constexpr double step = 0.5;
    double x = std::max(static_cast<double>(m), 1e-3);
    double fx = bessel_j(m, x);
    while (x < x_max) {
        const double next = std::min(x + step, x_max);
        const double fn = bessel_j(m, next);
        if (fn == 0.0) {
            zeros.push_back(next);
        } else if ((fx < 0.0) != (fn < 0.0) && fx != 0.0) {
            zeros.push_back(refine_bessel_root(m, x, next));
        }
        x = next;
        fx = fn;
    }
    return zeros;
}

double bessel_zero(int m, int s) {
    if (s < 1) throw DomainError("Bessel zero index starts at 1");
    // McMahon-type estimate bounds the search window; grow until the s-th zero is inside.
    double x_max = (s + 0.5 * m) * pi + m + 4.0;
    for (;;) {
        auto zeros = bessel_zeros_below(m, x_max);
        if (static_cast<int>(zeros.size()) >= s) return zeros[s - 1];
        x_max *= 1.5;
    }
}

AngularKind angular_kind(const SymmetryClass& symmetry) {
    return symmetry.y_parity == Parity::odd ? AngularKind::sine : AngularKind::cosine;
}

int first_angular_index(const SymmetryClass& symmetry) {
    // sin(m theta): odd in y always; x parity -(-1)^m. cos(m theta): even in y; x parity (-1)^m.
    const bool m_even = angular_kind(symmetry) == AngularKind::sine
                            ? symmetry.x_parity == Parity::odd
                            : symmetry.x_parity == Parity::even;
    if (!m_even) return 1;
    return angular_kind(symmetry) == AngularKind::sine ? 2 : 0;
}

Spectrum cb_spectrum_below(const SymmetryClass& symmetry, double eps_max) {
    const double x_max = std::sqrt(eps_max);
    std::vector<double> values;
    for (int m = first_angular_index(symmetry); m < x_max; m += 2)
        for (double z : bessel_zeros_below(m, x_max)) values.push_back(z * z);
    return closed_form(BilliardShape::ellipse(1.0, 1.0), symmetry, std::move(values),
                       "disk-bessel-zeros");
}

Spectrum cb_spectrum(const SymmetryClass& symmetry, std::size_t count) {
    // Quarter-disk Weyl estimate N(eps) ~ eps/16 with a boundary margin.
    double eps_max = 16.0 * (count + 3.0 * std::sqrt(static_cast<double>(count)) + 10.0);
    for (;;) {
        Spectrum s = cb_spectrum_below(symmetry, eps_max);
        if (s.eigenvalues.size() >= count) {
            s.eigenvalues.resize(count);
            s.converged.resize(count);
            s.converged_count = count;
            return s;
        }
        eps_max *= 1.3;
    }
}

std::vector<BasisFunction> quarter_disk_basis(const SymmetryClass& symmetry, double k_cut) {
    std::vector<BasisFunction> basis;
    const AngularKind kind = angular_kind(symmetry);
    for (int m = first_angular_index(symmetry); m < k_cut; m += 2) {
        const auto zeros = bessel_zeros_below(m, k_cut);
        for (std::size_t s = 0; s < zeros.size(); ++s)
            basis.push_back({m, static_cast<int>(s + 1), zeros[s], kind});
    }
    return basis;
}

namespace {

struct RadialTables {
    quad::Rule rule;
    // Row i holds R_i, R_i' at the radial nodes (normalization folded in).
    Eigen::MatrixXd value;
    Eigen::MatrixXd slope;
};

struct AngularMoments {
    double cos_vv = 0.0;    // int cos2t Phi_i Phi_j
    double cos_dd = 0.0;    // int cos2t Phi_i' Phi_j'
    double sin_vd = 0.0;    // int sin2t Phi_i Phi_j'
    double sin_dv = 0.0;    // int sin2t Phi_i' Phi_j
};

double angular_norm_squared(const BasisFunction& f) {
    // Quarter-circle integral of sin^2 or cos^2.
    return f.m == 0 ? 0.5 * pi : 0.25 * pi;
}

AngularMoments angular_moments(AngularKind kind, int mi, int mj, int nodes) {
    AngularMoments mom;
    const double w = 2.0 * pi / nodes / 4.0;  // full-period trapezoid, reduced to a quarter
    for (int t = 0; t < nodes; ++t) {
        const double th = 2.0 * pi * t / nodes;
        double pi_v, pi_d, pj_v, pj_d;
        if (kind == AngularKind::sine) {
            pi_v = std::sin(mi * th);
            pi_d = mi * std::cos(mi * th);
            pj_v = std::sin(mj * th);
            pj_d = mj * std::cos(mj * th);
        } else {
            pi_v = std::cos(mi * th);
            pi_d = -mi * std::sin(mi * th);
            pj_v = std::cos(mj * th);
            pj_d = -mj * std::sin(mj * th);
        }
        const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
        mom.cos_vv += w * c2 * pi_v * pj_v;
        mom.cos_dd += w * c2 * pi_d * pj_d;
        mom.sin_vd += w * s2 * pi_v * pj_d;
        mom.sin_dv += w * s2 * pi_d * pj_v;
    }
    return mom;
}

struct ResolvedQuadrature {
    int radial;
    int angular;
};

ResolvedQuadrature resolve(const std::vector<BasisFunction>& basis, const RitzQuadrature& q) {
    double k_max = 0.0;
    int m_max = 0;
    for (const auto& f : basis) {
        k_max = std::max(k_max, f.zero);
        m_max = std::max(m_max, f.m);
    }
    ResolvedQuadrature r{q.radial_nodes, q.angular_nodes};
    if (r.radial <= 0) r.radial = std::max(64, static_cast<int>(std::ceil(k_max / 2.0)) + 40);
    if (r.angular <= 0) r.angular = std::max(256, 2 * m_max + 16);
    if (r.radial < 64 || r.angular < 256)
        throw ContractViolation("Ritz quadrature needs >= 64 radial and >= 256 angular nodes");
    return r;
}

RadialTables radial_tables(const std::vector<BasisFunction>& basis, int nodes) {
    RadialTables t;
    t.rule = quad::gauss_legendre(nodes, 0.0, 1.0);
    const std::size_t n = basis.size();
    t.value.resize(static_cast<long>(n), nodes);
    t.slope.resize(static_cast<long>(n), nodes);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = basis[i];
        const double jp1 = bessel_j(f.m + 1, f.zero);
        const double norm = 1.0 / std::sqrt(angular_norm_squared(f) * 0.5 * jp1 * jp1);
        for (int k = 0; k < nodes; ++k) {
            const double x = f.zero * t.rule.nodes[k];
            const double jm = bessel_j(f.m, x);
            // J_m' = (J_{m-1} - J_{m+1})/2, with J_{-1} = -J_1.
            const double jprev = f.m == 0 ? -bessel_j(1, x) : bessel_j(f.m - 1, x);
            const double jnext = bessel_j(f.m + 1, x);
            t.value(static_cast<long>(i), k) = norm * jm;
            t.slope(static_cast<long>(i), k) = norm * f.zero * 0.5 * (jprev - jnext);
        }
    }
    return t;
}

double element(const RadialTables& t, const AngularMoments& mom, std::size_t i, std::size_t j) {
    const auto& r = t.rule.nodes;
    const auto& w = t.rule.weights;
    double rr = 0.0, vv = 0.0, dv = 0.0, vd = 0.0;
    const long li = static_cast<long>(i), lj = static_cast<long>(j);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const long lk = static_cast<long>(k);
        const double vi = t.value(li, lk), vj = t.value(lj, lk);
        const double si = t.slope(li, lk), sj = t.slope(lj, lk);
        rr += w[k] * si * sj * r[k];
        vv += w[k] * vi * vj / r[k];
        dv += w[k] * si * vj;
        vd += w[k] * vi * sj;
    }
    return mom.cos_vv * rr - mom.cos_dd * vv - mom.sin_vd * dv - mom.sin_dv * vd;
}

void require_single_class(const std::vector<BasisFunction>& basis) {
    if (basis.empty()) return;
    const AngularKind kind = basis.front().kind;
    const int parity = basis.front().m % 2;
    for (const auto& f : basis)
        if (f.kind != kind || f.m % 2 != parity)
            throw ContractViolation("basis mixes symmetry classes");
}

bool couples(int mi, int mj) { return mi == mj || std::abs(mi - mj) == 2; }

}  // namespace

double anisotropy_element(const std::vector<BasisFunction>& basis, std::size_t i, std::size_t j,
                          const RitzQuadrature& quadrature) {
    require_single_class(basis);
    if (!couples(basis[i].m, basis[j].m)) return 0.0;
    const auto q = resolve(basis, quadrature);
    const std::vector<BasisFunction> pair{basis[i], basis[j]};
    const RadialTables t = radial_tables(pair, q.radial);
    return element(t, angular_moments(basis[i].kind, basis[i].m, basis[j].m, q.angular), 0, 1);
}

Eigen::MatrixXd anisotropy_matrix(const std::vector<BasisFunction>& basis,
                                  const RitzQuadrature& quadrature) {
    require_single_class(basis);
    const std::size_t n = basis.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    if (n == 0) return d;
    const auto q = resolve(basis, quadrature);
    const RadialTables t = radial_tables(basis, q.radial);
    std::map<std::pair<int, int>, AngularMoments> moments;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const int mi = basis[i].m, mj = basis[j].m;
            if (!couples(mi, mj)) continue;
            auto it = moments.find({mi, mj});
            if (it == moments.end())
                it = moments.emplace(std::pair{mi, mj}, angular_moments(basis[i].kind, mi, mj, q.angular)).first;
            const double v = element(t, it->second, i, j);
            d(static_cast<long>(i), static_cast<long>(j)) = v;
            d(static_cast<long>(j), static_cast<long>(i)) = v;
        }
    }
    return d;
}

namespace {

Eigen::MatrixXd assemble(double sigma, const std::vector<BasisFunction>& basis,
                         const Eigen::MatrixXd& anisotropy) {
    const double iso = 0.5 * (sigma + 1.0 / sigma);
    const double aniso = 0.5 * (sigma - 1.0 / sigma);
    Eigen::MatrixXd h = aniso * anisotropy;
    for (std::size_t i = 0; i < basis.size(); ++i)
        h(static_cast<long>(i), static_cast<long>(i)) += iso * basis[i].zero * basis[i].zero;
    return h;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& h) {
    if (h.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericFailure("dense symmetric eigensolver failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

Eigen::MatrixXd eb_hamiltonian(double sigma, const SymmetryClass& symmetry,
                               const std::vector<BasisFunction>& basis,
                               const RitzQuadrature& quadrature) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    for (const auto& f : basis)
        if (f.kind != angular_kind(symmetry) || (f.m - first_angular_index(symmetry)) % 2 != 0)
            throw ContractViolation("basis function outside the requested symmetry class");
    return assemble(sigma, basis, anisotropy_matrix(basis, quadrature));
}

std::vector<double> eb_ritz_eigenvalues(double sigma, const SymmetryClass& symmetry, double k_cut,
                                        const RitzQuadrature& quadrature) {
    const auto basis = quarter_disk_basis(symmetry, k_cut);
    return symmetric_eigenvalues(eb_hamiltonian(sigma, symmetry, basis, quadrature));
}

Spectrum eb_ritz_spectrum(double sigma, const SymmetryClass& symmetry, std::size_t target_count,
                          const RitzOptions& options) {
    if (!(sigma > 0.0) || sigma > 1.0) throw DomainError("sigma must lie in (0, 1]");
    // Basis count ~ k_cut^2/16 for a quarter disk.
    double k_cut = 4.0 * std::sqrt(options.oversampling * target_count + 8.0);
    auto basis = quarter_disk_basis(symmetry, k_cut);
    while (basis.size() < options.oversampling * target_count) {
        k_cut *= 1.05;
        basis = quarter_disk_basis(symmetry, k_cut);
    }
    const auto coarse = symmetric_eigenvalues(eb_hamiltonian(sigma, symmetry, basis));
    const auto grown_basis = quarter_disk_basis(symmetry, options.growth * k_cut);
    RitzQuadrature doubled;
    doubled.radial_nodes = 2 * std::max(64, static_cast<int>(std::ceil(options.growth * k_cut / 2.0)) + 40);
    const auto fine = symmetric_eigenvalues(eb_hamiltonian(sigma, symmetry, grown_basis, doubled));

    Spectrum s;
    s.shape = ellipse_from_sigma(sigma);
    s.symmetry = symmetry;
    const std::size_t keep = std::min(coarse.size(), std::max<std::size_t>(target_count, coarse.size() / 3));
    s.eigenvalues.assign(fine.begin(), fine.begin() + static_cast<long>(keep));
    s.converged.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const double change = std::abs(coarse[i] - fine[i]) / fine[i];
        s.meta.max_relative_change = std::max(s.meta.max_relative_change, change);
        s.converged[i] = change < options.relative_tolerance;
    }
    finalize_certification(s);
    s.meta.solver = "quarter-disk-ritz";
    s.meta.basis_size = grown_basis.size();
    s.meta.k_cut = options.growth * k_cut;
    s.meta.tolerance = options.relative_tolerance;
    return s;
}

namespace {

struct SeparationProblem {
    mathieu::Family family;
    double focal_squared;
    double mu0;
    double ode_tolerance;
    int extra_modes;

    double phase(int r, double q) const {
        const int modes = mathieu::default_modes(r, q) + extra_modes;
        const double a = mathieu::characteristic_value(family, r, q, modes);
        return mathieu::radial_phase(family, a, q, mu0, ode_tolerance);
    }

    double root(int r, int s, double lo, double hi) const {
        const double target = s * pi;
        auto g = [&](double q) { return phase(r, q) - target; };
        boost::uintmax_t iterations = 200;
        auto [left, right] = boost::math::tools::toms748_solve(
            g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
        return 0.5 * (left + right);
    }
};

SeparationProblem separation_problem(const BilliardShape& shape, const SymmetryClass& symmetry,
                                     const SeparationOptions& options, double tolerance_scale,
                                     int extra_modes) {
    const double f = shape.focal_half_distance();
    return {mathieu::family_for(symmetry), f * f, std::atanh(shape.b() / shape.a()),
            options.ode_tolerance * tolerance_scale, options.extra_modes + extra_modes};
}

}  // namespace

Spectrum eb_spectrum_below(double sigma, const SymmetryClass& symmetry, double eps_max,
                           const SeparationOptions& options) {
    if (!(sigma > 0.0) || sigma > 1.0) throw DomainError("sigma must lie in (0, 1]");
    if (sigma == 1.0) {
        Spectrum s = cb_spectrum_below(symmetry, eps_max);
        s.meta.solver = "separation(circle-limit)";
        return s;
    }
    const BilliardShape shape = ellipse_from_sigma(sigma);
    const auto problem = separation_problem(shape, symmetry, options, 1.0, 0);
    const auto refined = separation_problem(shape, symmetry, options, 1e-2, 24);
    const double q_max = eps_max * problem.focal_squared / 4.0;
    const double q_min = 1e-9 * std::max(q_max, 1.0);

    struct Level {
        double energy;
        bool certified;
    };
    std::vector<Level> levels;
    double max_change = 0.0;
    for (int r = 1;; ++r) {
        const double top = problem.phase(r, q_max);
        const int count = static_cast<int>(std::floor(top / pi));
        if (count < 1) break;  // characteristic values grow with r, so later indices are empty too
        double lo = q_min;
        for (int s = 1; s <= count; ++s) {
            const double q = problem.root(r, s, lo, q_max);
            // Re-solve with more Fourier modes and a tighter ODE tolerance.
            const double width = 1e-6 * q;
            double q_ref = q;
            const double g_lo = refined.phase(r, q - width) - s * pi;
            const double g_hi = refined.phase(r, q + width) - s * pi;
            bool certified = false;
            if ((g_lo < 0.0) != (g_hi < 0.0)) {
                q_ref = refined.root(r, s, q - width, q + width);
                const double change = std::abs(q_ref - q) / q_ref;
                max_change = std::max(max_change, change);
                certified = change < options.relative_tolerance;
            }
            levels.push_back({4.0 * q_ref / problem.focal_squared, certified});
            lo = q;
        }
    }
    std::sort(levels.begin(), levels.end(),
              [](const Level& x, const Level& y) { return x.energy < y.energy; });
    Spectrum s;
    s.shape = shape;
    s.symmetry = symmetry;
    for (const auto& l : levels) {
        s.eigenvalues.push_back(l.energy);
        s.converged.push_back(l.certified);
    }
    finalize_certification(s);
    s.meta.solver = "elliptic-separation";
    s.meta.k_cut = std::sqrt(eps_max);
    s.meta.tolerance = options.relative_tolerance;
    s.meta.max_relative_change = max_change;
    return s;
}

Spectrum eb_spectrum(double sigma, const SymmetryClass& symmetry, std::size_t target_count,
                     const SeparationOptions& options) {
    if (!(sigma > 0.0) || sigma > 1.0) throw DomainError("sigma must lie in (0, 1]");
    const BilliardShape shape = ellipse_from_sigma(sigma);
    // Quarter-billiard Weyl law: N ~ (A/4) eps / 4pi - (P/4 + a + b) sqrt(eps) / 4pi.
    const double quarter_area = 0.25 * area(shape);
    const double edge = 0.25 * perimeter(shape) + shape.a() + shape.b();
    double eps_max = 0.0;
    {
        // Positive root of quarter_area x^2 - edge x - 4 pi (target + margin) = 0, x = sqrt(eps).
        const double need = 4.0 * pi * (1.05 * target_count + 10.0);
        const double x = (edge + std::sqrt(edge * edge + 4.0 * quarter_area * need)) / (2.0 * quarter_area);
        eps_max = x * x;
    }
    for (;;) {
        Spectrum s = eb_spectrum_below(sigma, symmetry, eps_max, options);
        if (s.converged_count >= target_count) return s;
        if (s.converged_count < s.eigenvalues.size() && s.eigenvalues.size() >= target_count)
            return s;  // certification failed inside the range; report, never hide
        eps_max *= 1.2;
    }
}

Spectrum merge_classes(const std::vector<Spectrum>& spectra, double degeneracy_tol) {
    if (spectra.size() != 4) throw ContractViolation("merge_classes expects four spectra");
    for (const auto& s : spectra)
        if (!(s.shape == spectra.front().shape))
            throw ContractViolation("merge_classes: spectra of different shapes");
    // Certified energy range common to all inputs.
    double certified_top = std::numeric_limits<double>::infinity();
    for (const auto& s : spectra) {
        if (s.converged_count < s.eigenvalues.size())
            certified_top = std::min(certified_top, s.converged_count == 0 ? 0.0 : s.eigenvalues[s.converged_count - 1]);
    }
    std::vector<double> all;
    for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    std::sort(all.begin(), all.end());

    Spectrum merged;
    merged.shape = spectra.front().shape;
    merged.meta.solver = "merged(" + spectra.front().meta.solver + ")";
    merged.meta.tolerance = degeneracy_tol;
    for (double e : all) {
        if (!merged.eigenvalues.empty()) {
            const double last = merged.eigenvalues.back();
            if (std::abs(e - last) < degeneracy_tol * std::abs(last)) {
                ++merged.meta.removed;
                continue;
            }
        }
        merged.eigenvalues.push_back(e);
        merged.converged.push_back(e <= certified_top);
    }
    finalize_certification(merged);
    return merged;
}

Spectrum merged_ellipse_spectrum(double sigma, double eps_max, double degeneracy_tol,
                                 const SeparationOptions& options) {
    std::vector<Spectrum> parts;
    for (int c = 0; c < 4; ++c)
        parts.push_back(eb_spectrum_below(sigma, all_symmetry_classes()[c], eps_max, options));
    return merge_classes(parts, degeneracy_tol);
}

Spectrum merged_circle_spectrum(double eps_max, double degeneracy_tol) {
    std::vector<Spectrum> parts;
    for (int c = 0; c < 4; ++c) parts.push_back(cb_spectrum_below(all_symmetry_classes()[c], eps_max));
    return merge_classes(parts, degeneracy_tol);
}

}  // namespace billiards
