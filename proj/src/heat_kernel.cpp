#include "speclap/heat_kernel.hpp"

#include <cmath>

namespace speclap {

HeatKernel::HeatKernel(const Domain& domain, int image_count)
    : dom_(domain), images_(image_count) {
    if (image_count < 2 || image_count > 64)
        throw invalid_configuration("HeatKernel: image count out of range");
    for (int a = 0; a < domain.dim(); ++a) {
        double L = domain.length(a);
        t_switch_[a] = L * L / (2.0 * M_PI * M_PI);
    }
}

double HeatKernel::axis_value(int axis, double t, double x, double y) const {
    const double L = dom_.length(axis);
    if (t < t_switch_[axis]) {
        // Images: sum_m [ g(x - y - 2mL) - g(x + y - 2mL) ].
        double sum = 0.0;
        for (int m = -images_; m <= images_; ++m) {
            double shift = 2.0 * m * L;
            double r1 = x - y - shift;
            double r2 = x + y - shift;
            double e1 = r1 * r1 / (4.0 * t);
            double e2 = r2 * r2 / (4.0 * t);
            if (e1 < 700.0) sum += std::exp(-e1);
            if (e2 < 700.0) sum -= std::exp(-e2);
        }
        return sum / std::sqrt(4.0 * M_PI * t);
    }
    // Spectral sine series.
    double sum = 0.0;
    const double k1 = M_PI / L;
    for (int j = 1;; ++j) {
        double kj = j * k1;
        double e = kj * kj * t;
        if (e > 45.0) break;
        sum += std::exp(-e) * std::sin(kj * x) * std::sin(kj * y);
    }
    return 2.0 / L * sum;
}

double HeatKernel::axis_survival(int axis, double t, double x) const {
    const double L = dom_.length(axis);
    if (t < t_switch_[axis]) {
        // int_0^L of the image sum, expressed through erf differences:
        // sum_m [ E(x - 2mL) - (1/2)E(x - L - 2mL) - (1/2)E(x + L - 2mL) ] with
        // E(a) = erf(a / (2 sqrt t)).
        double inv = 1.0 / (2.0 * std::sqrt(t));
        double sum = 0.0;
        for (int m = -images_; m <= images_; ++m) {
            double shift = 2.0 * m * L;
            sum += std::erf((x - shift) * inv) -
                   0.5 * std::erf((x - L - shift) * inv) -
                   0.5 * std::erf((x + L - shift) * inv);
        }
        return sum;
    }
    double sum = 0.0;
    const double k1 = M_PI / L;
    for (int j = 1;; j += 2) {
        double kj = j * k1;
        double e = kj * kj * t;
        if (e > 45.0) break;
        sum += std::exp(-e) * std::sin(kj * x) * (4.0 / (M_PI * j));
    }
    return sum;
}

double HeatKernel::axis_boundary_derivative(int axis, double t, double x, int side) const {
    const double L = dom_.length(axis);
    if (side == 1) x = L - x; // mirror symmetry reduces to the z = 0 endpoint
    if (t < t_switch_[axis]) {
        // q(t, x, 0) = sum_m (r_m / t) g(r_m), r_m = x - 2mL, from
        // differentiating the image sum in the boundary variable.
        double sum = 0.0;
        for (int m = -images_; m <= images_; ++m) {
            double r = x - 2.0 * m * L;
            double e = r * r / (4.0 * t);
            if (e < 700.0) sum += r * std::exp(-e);
        }
        return sum / (t * std::sqrt(4.0 * M_PI * t));
    }
    double sum = 0.0;
    const double k1 = M_PI / L;
    for (int j = 1;; ++j) {
        double kj = j * k1;
        double e = kj * kj * t;
        if (e > 45.0) break;
        sum += std::exp(-e) * kj * std::sin(kj * x);
    }
    return 2.0 / L * sum;
}

double HeatKernel::value(double t, const Point& x, const Point& y) const {
    if (!(t > 0.0)) throw numeric_input_error("heat kernel: t must be positive");
    dom_.require_interior(x, "heat kernel");
    dom_.require_interior(y, "heat kernel");
    double v = axis_value(0, t, x.x, y.x);
    if (dom_.kind() == DomainKind::rectangle) v *= axis_value(1, t, x.y, y.y);
    return v;
}

double HeatKernel::survival(double t, const Point& x) const {
    if (!(t > 0.0)) throw numeric_input_error("survival: t must be positive");
    dom_.require_interior(x, "survival");
    double v = axis_survival(0, t, x.x);
    if (dom_.kind() == DomainKind::rectangle) v *= axis_survival(1, t, x.y);
    return v;
}

double HeatKernel::boundary_normal_derivative(double t, const Point& x,
                                              const BoundaryPoint& z) const {
    if (!(t > 0.0)) throw numeric_input_error("boundary derivative: t must be positive");
    dom_.require_interior(x, "boundary derivative");
    if (dom_.kind() == DomainKind::interval) {
        if (z.face < 0 || z.face > 1) throw numeric_input_error("boundary face out of range");
        return axis_boundary_derivative(0, t, x.x, z.face);
    }
    switch (z.face) {
        case 0: return axis_boundary_derivative(1, t, x.y, 0) * axis_value(0, t, x.x, z.param);
        case 1: return axis_boundary_derivative(1, t, x.y, 1) * axis_value(0, t, x.x, z.param);
        case 2: return axis_boundary_derivative(0, t, x.x, 0) * axis_value(1, t, x.y, z.param);
        case 3: return axis_boundary_derivative(0, t, x.x, 1) * axis_value(1, t, x.y, z.param);
        default: throw numeric_input_error("boundary face out of range");
    }
}

} // namespace speclap
