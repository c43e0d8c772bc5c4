#include "billiards/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

BilliardShape BilliardShape::rectangle(double a, double b) {
    require_positive(a, "rectangle side a");
    require_positive(b, "rectangle side b");
    return {ShapeKind::rectangle, a, b};
}

BilliardShape BilliardShape::ellipse(double a, double b) {
    require_positive(a, "ellipse semi-axis a");
    require_positive(b, "ellipse semi-axis b");
    return {ShapeKind::ellipse, a, b};
}

double BilliardShape::focal_half_distance() const {
    if (kind_ != ShapeKind::ellipse) throw ContractViolation("focal distance needs an ellipse");
    if (b_ > a_) throw DomainError("focal distance requires b <= a (sigma <= 1)");
    return std::sqrt((a_ - b_) * (a_ + b_));
}

std::string BilliardShape::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << (kind_ == ShapeKind::ellipse ? "ellipse" : "rectangle") << "(a=" << a_ << ",b=" << b_
       << ")";
    return os.str();
}

SymmetryClass SymmetryClass::parse(const std::string& text) {
    auto parity = [&](const std::string& p) {
        if (p == "odd") return Parity::odd;
        if (p == "even") return Parity::even;
        throw DomainError("unknown parity '" + p + "' in symmetry class '" + text + "'");
    };
    const auto dash = text.find('-');
    if (dash == std::string::npos) throw DomainError("symmetry class must look like odd-odd");
    return {parity(text.substr(0, dash)), parity(text.substr(dash + 1))};
}

std::string SymmetryClass::name() const {
    auto p = [](Parity q) { return q == Parity::odd ? "odd" : "even"; };
    return std::string(p(x_parity)) + "-" + p(y_parity);
}

const SymmetryClass* all_symmetry_classes() {
    static const SymmetryClass classes[4] = {
        {Parity::odd, Parity::odd},
        {Parity::even, Parity::odd},
        {Parity::odd, Parity::even},
        {Parity::even, Parity::even},
    };
    return classes;
}

double Conventions::momentum(double energy) {
    if (energy < 0.0) throw DomainError("negative energy has no real momentum");
    return std::sqrt(energy);
}

double Conventions::period(double length, double energy) {
    return length / (2.0 * momentum(energy));
}

double ConfocalConic::foci() const {
    return kind == ConicKind::ellipse ? std::sqrt(semi_x * semi_x - semi_y * semi_y)
                                      : std::sqrt(semi_x * semi_x + semi_y * semi_y);
}

BilliardShape ellipse_from_sigma(double sigma) {
    require_positive(sigma, "sigma");
    const double root = std::sqrt(sigma);
    return BilliardShape::ellipse(1.0 / root, root);
}

BilliardShape rectangle_from_sigma(double sigma) {
    require_positive(sigma, "sigma");
    const double root = std::sqrt(sigma);
    return BilliardShape::rectangle(1.0 / root, root);
}

double perimeter(const BilliardShape& shape) {
    if (shape.kind() == ShapeKind::rectangle) return 2.0 * (shape.a() + shape.b());
    const double a = shape.a();
    const double b = shape.b();
    if (a == b) return 2.0 * std::numbers::pi * a;
    // Arc length of (a cos t, b sin t) over a quarter, times four.
    auto speed = [a, b](double t) {
        const double s = std::sin(t), c = std::cos(t);
        return std::sqrt(a * a * s * s + b * b * c * c);
    };
    const double scale = std::max(a, b);
    return 4.0 * quad::adaptive_simpson(speed, 0.0, 0.5 * std::numbers::pi, 1e-13 * scale);
}

double area(const BilliardShape& shape) {
    if (shape.kind() == ShapeKind::rectangle) return shape.a() * shape.b();
    return std::numbers::pi * shape.a() * shape.b();
}

ConfocalConic confocal_conic(const BilliardShape& shape, double lambda) {
    if (shape.kind() != ShapeKind::ellipse) throw ContractViolation("confocal conics need an ellipse");
    const double b = shape.b();
    const double f = shape.focal_half_distance();
    const double f2 = f * f;
    ConfocalConic conic;
    conic.lambda = lambda;
    if (lambda > 0.0 && lambda < b * b) {
        conic.kind = ConicKind::ellipse;
    } else if (lambda < 0.0 && lambda > -f2) {
        conic.kind = ConicKind::hyperbola;
    } else {
        std::ostringstream os;
        os << "caustic parameter " << lambda << " outside (0, b^2) and (-f^2, 0)";
        throw DomainError(os.str());
    }
    conic.semi_x = std::sqrt(f2 + lambda);
    conic.semi_y = std::sqrt(std::abs(lambda));
    return conic;
}

}  // namespace billiards
