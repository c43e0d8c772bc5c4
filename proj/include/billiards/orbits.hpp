#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "billiards/model.hpp"

namespace billiards {

/// Tangent ray, chord through a focus, or any other configuration without a unique answer.
class DegenerateOrbit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No periodic family with the requested winding exists in the admissible caustic range.
class FamilyNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point on the ellipse and an inward unit velocity.
struct BounceState {
    Eigen::Vector2d point;
    Eigen::Vector2d direction;
};

struct Bounce {
    BounceState state;
    double chord = 0.0;
};

/// Next boundary hit along the ray followed by specular reflection.
Bounce billiard_map(const BilliardShape& shape, const BounceState& state);

/// Confocal parameter of the conic tangent to the chord line through state.
double caustic_invariant(const BilliardShape& shape, const BounceState& state);

/// Inward direction at boundary parameter t (point (a cos t, b sin t)) tangent to the caustic
/// lambda. Of the two tangents the one with larger angular momentum is returned; for an
/// elliptic caustic that is the counterclockwise one. Empty when no tangent exists.
std::optional<BounceState> tangent_state(const BilliardShape& shape, double t, double lambda);

/// Phase that advances by 2 pi per revolution (type R) or per libration (type O).
double winding_phase(const BilliardShape& shape, const BounceState& state, double lambda);

/// Canonical symmetric start for the caustic: the right vertex for R, the top vertex for O.
BounceState canonical_start(const BilliardShape& shape, double lambda);

struct RotationEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// Mean winding per bounce over `iterations` bounces, with error ~ 1/iterations.
RotationEstimate rotation_number(const BilliardShape& shape, double lambda, int iterations);

enum class OrbitKind { R, O, isolated, lattice };

std::string to_string(OrbitKind kind);

/// One family of periodic orbits. For type R, m counts revolutions; for type O, m counts
/// librations; for rectangle lattice families (n, m) are the reflection counts (p, q).
struct PeriodicOrbitFamily {
    OrbitKind kind = OrbitKind::R;
    int n = 0;
    int m = 0;
    int repetition = 1;
    std::optional<ConfocalConic> caustic;
    double length = 0.0;
    double area = 0.0;
    double c = 1.0;
    std::vector<Eigen::Vector2d> representative;
    std::optional<double> stability_trace;
    /// Orbit of the odd-odd quarter billiard obtained by folding a full family.
    bool quarter = false;

    bool primitive() const { return repetition == 1; }
    /// Primitive winding numbers before repetition.
    int primitive_n() const { return n / repetition; }
    int primitive_m() const { return m / repetition; }
    std::string label() const;
    /// Stability label for isolated orbits: "stable", "unstable" or "marginal".
    std::string stability() const;
};

struct FamilyOptions {
    double lambda_tolerance = 1e-12;
    double closure_tolerance = 1e-9;
};

/// Locates the primitive family winding m times in n bounces and closes it.
PeriodicOrbitFamily find_family(const BilliardShape& shape, int n, int m, OrbitKind kind,
                                const FamilyOptions& options = {});

/// Family traversed `times` times.
PeriodicOrbitFamily repeated(const PeriodicOrbitFamily& family, int times);

/// (max L - min L) / mean L over `starts` family members launched from distinct points.
double family_length_constancy(const BilliardShape& shape, const PeriodicOrbitFamily& family,
                               int starts);

/// Position-space area swept by the family's chords.
double family_area(const BilliardShape& shape, const PeriodicOrbitFamily& family);

/// Rasterized area covered by `members` randomly started family members.
double family_area_monte_carlo(const BilliardShape& shape, const PeriodicOrbitFamily& family,
                               int members, std::uint64_t seed, int grid = 400);

/// Trace of the linearized n-bounce map in Birkhoff coordinates at a periodic state.
double monodromy_trace(const BilliardShape& shape, const BounceState& start, int bounces);

/// Minor-axis (L = 4b) then major-axis (L = 4a) two-bounce orbits.
std::array<PeriodicOrbitFamily, 2> axis_orbits(const BilliardShape& shape);

/// Circle families 2 <= n <= n_max, 1 <= m <= n/2, repetitions included.
std::vector<PeriodicOrbitFamily> cb_catalog(int n_max);

/// Rectangle families (p, q) with L = 2 sqrt(p^2 a^2 + q^2 b^2) <= l_max.
std::vector<PeriodicOrbitFamily> rb_catalog(double a, double b, double l_max);

struct CatalogOptions {
    double l_max = 10.0;
    int max_bounces = 60;
    bool include_repetitions = true;
    FamilyOptions family;
};

struct Catalog {
    std::vector<PeriodicOrbitFamily> families;
    std::vector<std::string> warnings;
};

/// Type-R, type-O, isolated and repeated families of the ellipse with L <= l_max, sorted by L.
Catalog eb_catalog(const BilliardShape& shape, const CatalogOptions& options = {});

/// Periodic orbits of the quarter billiard (Dirichlet walls on both axes) from the primitive
/// full-billiard families. A family of winding m/n closes in the quarter after
/// n / gcd(n, 2m) bounces on the curved wall, so its length scales by that count over n; the
/// covered area is S/4. Repetitions are generated up to l_max.
std::vector<PeriodicOrbitFamily> fold_to_quarter(const std::vector<PeriodicOrbitFamily>& families,
                                                 double l_max);

/// The `count` shortest entries.
std::vector<PeriodicOrbitFamily> shortest(std::vector<PeriodicOrbitFamily> families,
                                          std::size_t count);

struct FamilyCheck {
    std::string label;
    double length = 0.0;
    double confocality = 0.0;
    double tangency = 0.0;
    double length_spread = 0.0;
    double conservation = 0.0;
};

struct InvariantThresholds {
    double confocality = 1e-8;
    double tangency = 1e-9;
    double length_spread = 1e-8;
    double conservation = 1e-9;
    int conservation_bounces = 1000;
    int length_starts = 100;
};

/// Confocality from an unconstrained dual-conic fit to the chords, chord tangency,
/// length constancy and lambda conservation for every continuous family.
std::vector<FamilyCheck> check_invariants(const BilliardShape& shape,
                                          const std::vector<PeriodicOrbitFamily>& families,
                                          const InvariantThresholds& thresholds = {});

bool passes(const FamilyCheck& check, const InvariantThresholds& thresholds);

}  // namespace billiards
