#pragma once

#include <functional>
#include <vector>

namespace billiards::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi].
Rule gauss_legendre(int n, double lo, double hi);

/// Adaptive Simpson with Richardson correction; stops when the local error estimate
/// falls below tol (absolute) or max_depth is reached.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int max_depth = 48);

}  // namespace billiards::quad
