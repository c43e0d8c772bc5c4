#pragma once

#include "billiards/model.hpp"

namespace billiards::mathieu {

/// Fourier family of an angular Mathieu function: ce/se with even or odd harmonics.
enum class Family { ce_even, ce_odd, se_even, se_odd };

/// Family realizing a symmetry class of the ellipse (y-odd -> se, x-odd -> see text).
Family family_for(const SymmetryClass& symmetry);

/// Harmonic carried by the r-th function of the family as q -> 0 (1-based r).
int harmonic(Family family, int r);

/// Default Fourier truncation for index r at parameter q.
int default_modes(int r, double q);

/// r-th smallest characteristic value (1-based), from the Sturm count of the truncated
/// tridiagonal recurrence.
double characteristic_value(Family family, int r, double q, int modes);

/// Scaled Pruefer phase theta(mu_end) of the modified Mathieu equation
/// R'' = (a - 2 q cosh 2 mu) R, started from the parity condition at mu = 0.
/// R(mu_end) = 0 exactly when theta(mu_end) is a multiple of pi.
double radial_phase(Family family, double a, double q, double mu_end, double tolerance);

}  // namespace billiards::mathieu
