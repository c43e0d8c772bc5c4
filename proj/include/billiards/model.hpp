#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a caller breaks a documented precondition (mismatched inputs, bad indices).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when an iterative numeric method fails to deliver its tolerance.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShapeKind { rectangle, ellipse };

/// Rectangle with sides (a, b) or ellipse with semi-axes (a, b).
class BilliardShape {
public:
    static BilliardShape rectangle(double a, double b);
    static BilliardShape ellipse(double a, double b);

    ShapeKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double sigma() const { return b_ / a_; }
    bool is_circle() const { return kind_ == ShapeKind::ellipse && a_ == b_; }

    /// Focal half-distance sqrt(a^2 - b^2); ellipse only, requires b <= a.
    double focal_half_distance() const;

    std::string describe() const;

    friend bool operator==(const BilliardShape&, const BilliardShape&) = default;

private:
    BilliardShape(ShapeKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    ShapeKind kind_;
    double a_;
    double b_;
};

enum class Parity { even, odd };

/// Reflection parity of an eigenfunction under x -> -x and y -> -y.
struct SymmetryClass {
    Parity x_parity = Parity::odd;
    Parity y_parity = Parity::odd;

    static SymmetryClass odd_odd() { return {Parity::odd, Parity::odd}; }
    static SymmetryClass parse(const std::string& text);
    std::string name() const;

    friend bool operator==(const SymmetryClass&, const SymmetryClass&) = default;
};

/// The four classes in a fixed order: odd-odd, even-odd, odd-even, even-even.
const SymmetryClass* all_symmetry_classes();

/// Unit conventions: hbar = 1, two degrees of freedom, dispersion eps = k^2.
struct Conventions {
    static constexpr double hbar = 1.0;
    static constexpr int dof = 2;

    static double momentum(double energy);
    static double energy(double momentum) { return momentum * momentum; }
    /// Period of an orbit of length L at energy eps. The speed is d(eps)/dk = 2k.
    static double period(double length, double energy);
};

enum class ConicKind { ellipse, hyperbola };

/// Member of the confocal family x^2/(f^2+lambda) + y^2/lambda = 1.
struct ConfocalConic {
    double lambda = 0.0;
    ConicKind kind = ConicKind::ellipse;
    double semi_x = 0.0;
    double semi_y = 0.0;

    /// Focal half-distance implied by the semi-axes alone.
    double foci() const;
};

BilliardShape ellipse_from_sigma(double sigma);
/// Rectangle of unit area with b/a = sigma.
BilliardShape rectangle_from_sigma(double sigma);

double perimeter(const BilliardShape& shape);
double area(const BilliardShape& shape);

ConfocalConic confocal_conic(const BilliardShape& shape, double lambda);

}  // namespace billiards
