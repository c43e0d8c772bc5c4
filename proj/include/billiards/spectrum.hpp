#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "billiards/model.hpp"

namespace billiards {

struct SpectrumMeta {
    std::string solver;
    std::size_t basis_size = 0;
    double k_cut = 0.0;
    double tolerance = 0.0;
    /// Largest relative change seen by the convergence re-run (0 for closed forms).
    double max_relative_change = 0.0;
    /// Levels dropped as near-degenerate by merge_classes.
    std::size_t removed = 0;
};

/// Ascending eigenvalues eps_i (k_i = sqrt(eps_i)) of the Dirichlet problem.
struct Spectrum {
    BilliardShape shape = BilliardShape::rectangle(1.0, 1.0);
    /// Absent for merged spectra.
    std::optional<SymmetryClass> symmetry;
    std::vector<double> eigenvalues;
    /// Per-level certification flags, same length as eigenvalues.
    std::vector<bool> converged;
    /// Length of the longest certified prefix; only these levels feed statistics.
    std::size_t converged_count = 0;
    SpectrumMeta meta;

    std::vector<double> converged_levels() const;
    std::vector<double> momenta() const;
    std::string symmetry_name() const { return symmetry ? symmetry->name() : "merged"; }
};

/// Lowest `count` levels pi^2 (p^2/a^2 + q^2/b^2), p, q >= 1.
Spectrum rb_spectrum(double a, double b, std::size_t count);
/// All rectangle levels up to eps_max.
Spectrum rb_spectrum_below(double a, double b, double eps_max);

/// s-th positive zero of J_m.
double bessel_zero(int m, int s);
/// All positive zeros of J_m below x_max, ascending.
std::vector<double> bessel_zeros_below(int m, double x_max);

/// Quarter unit disk, Dirichlet on the arc; axis conditions from the symmetry class.
Spectrum cb_spectrum(const SymmetryClass& symmetry, std::size_t count);
Spectrum cb_spectrum_below(const SymmetryClass& symmetry, double eps_max);

enum class AngularKind { sine, cosine };

/// Dirichlet eigenfunction J_m(j r) sin(m theta) or cos(m theta) of the quarter disk.
struct BasisFunction {
    int m = 0;
    int s = 1;
    double zero = 0.0;
    AngularKind kind = AngularKind::sine;
};

/// Angular kind and allowed parity of m for a symmetry class.
AngularKind angular_kind(const SymmetryClass& symmetry);
int first_angular_index(const SymmetryClass& symmetry);

/// All basis functions of the class with j_{m,s} <= k_cut, ordered by (m, s).
std::vector<BasisFunction> quarter_disk_basis(const SymmetryClass& symmetry, double k_cut);

struct RitzQuadrature {
    /// 0 selects max(64, k_cut/2 + 40).
    int radial_nodes = 0;
    /// 0 selects max(256, 2 m_max + 16).
    int angular_nodes = 0;
};

/// Anisotropic part D_ij = <d_u phi_i, d_u phi_j> - <d_v phi_i, d_v phi_j> over the quarter disk.
Eigen::MatrixXd anisotropy_matrix(const std::vector<BasisFunction>& basis,
                                  const RitzQuadrature& quadrature = {});
/// Single element of the anisotropy matrix, evaluated without symmetrization.
double anisotropy_element(const std::vector<BasisFunction>& basis, std::size_t i, std::size_t j,
                          const RitzQuadrature& quadrature = {});

/// Ellipse Hamiltonian -sigma d_uu - d_vv / sigma mapped onto the quarter disk basis.
Eigen::MatrixXd eb_hamiltonian(double sigma, const SymmetryClass& symmetry,
                               const std::vector<BasisFunction>& basis,
                               const RitzQuadrature& quadrature = {});

struct RitzOptions {
    double relative_tolerance = 1e-6;
    double growth = 1.2;
    /// Basis size is at least this multiple of the target count.
    double oversampling = 3.0;
};

/// Rayleigh-Ritz spectrum of the quarter ellipse in the scaled Bessel basis, with the
/// k_cut growth test deciding which levels are certified.
Spectrum eb_ritz_spectrum(double sigma, const SymmetryClass& symmetry, std::size_t target_count,
                          const RitzOptions& options = {});

/// Ritz eigenvalues for an explicit cutoff (no certification).
std::vector<double> eb_ritz_eigenvalues(double sigma, const SymmetryClass& symmetry, double k_cut,
                                        const RitzQuadrature& quadrature = {});

struct SeparationOptions {
    /// Certification threshold on the relative change under refined settings.
    double relative_tolerance = 1e-6;
    double ode_tolerance = 1e-13;
    /// Extra Fourier modes beyond the default truncation.
    int extra_modes = 0;
};

/// Quarter ellipse levels from separation in elliptic coordinates: Mathieu characteristic
/// values plus the radial phase condition. Returns every level below eps_max.
Spectrum eb_spectrum_below(double sigma, const SymmetryClass& symmetry, double eps_max,
                           const SeparationOptions& options = {});

/// At least target_count certified levels, complete up to the largest returned value.
Spectrum eb_spectrum(double sigma, const SymmetryClass& symmetry, std::size_t target_count,
                     const SeparationOptions& options = {});

/// Union of four spectra of one shape; a value within degeneracy_tol (relative) of the last
/// kept value is dropped. meta.removed reports the drop count.
Spectrum merge_classes(const std::vector<Spectrum>& spectra, double degeneracy_tol = 1e-8);

/// Spectrum of the given kind for every symmetry class, merged.
Spectrum merged_ellipse_spectrum(double sigma, double eps_max, double degeneracy_tol,
                                 const SeparationOptions& options = {});
Spectrum merged_circle_spectrum(double eps_max, double degeneracy_tol);

}  // namespace billiards
