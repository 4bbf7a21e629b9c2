#include "speclap/field.hpp"

#include <cmath>

namespace speclap {

SpectralField::SpectralField(Domain domain, std::vector<double> coeffs)
    : dom_(std::move(domain)), c_(std::move(coeffs)) {
    if (c_.size() != dom_.mode_count())
        throw numeric_input_error("SpectralField: coefficient count does not match basis");
}

double SpectralField::eval(const Point& p) const {
    // Separable evaluation: precompute per-axis sine tables.
    const int T = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        double s = 0.0;
        double L = dom_.length(0);
        double amp = std::sqrt(2.0 / L);
        for (int j = 1; j <= T; ++j) s += c_[j - 1] * amp * std::sin(j * M_PI * p.x / L);
        return s;
    }
    double Lx = dom_.length(0), Ly = dom_.length(1);
    double ax = std::sqrt(2.0 / Lx), ay = std::sqrt(2.0 / Ly);
    std::vector<double> sx(T), sy(T);
    for (int j = 1; j <= T; ++j) {
        sx[j - 1] = ax * std::sin(j * M_PI * p.x / Lx);
        sy[j - 1] = ay * std::sin(j * M_PI * p.y / Ly);
    }
    double s = 0.0;
    for (int j = 0; j < T; ++j) {
        double row = 0.0;
        for (int k = 0; k < T; ++k) row += c_[j * T + k] * sy[k];
        s += sx[j] * row;
    }
    return s;
}

Point SpectralField::eval_gradient(const Point& p) const {
    const int T = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        double L = dom_.length(0);
        double amp = std::sqrt(2.0 / L);
        double g = 0.0;
        for (int j = 1; j <= T; ++j) {
            double kj = j * M_PI / L;
            g += c_[j - 1] * amp * kj * std::cos(kj * p.x);
        }
        return {g, 0.0};
    }
    double Lx = dom_.length(0), Ly = dom_.length(1);
    double ax = std::sqrt(2.0 / Lx), ay = std::sqrt(2.0 / Ly);
    std::vector<double> sx(T), sy(T), cx(T), cy(T);
    for (int j = 1; j <= T; ++j) {
        double kx = j * M_PI / Lx, ky = j * M_PI / Ly;
        sx[j - 1] = ax * std::sin(kx * p.x);
        cx[j - 1] = ax * kx * std::cos(kx * p.x);
        sy[j - 1] = ay * std::sin(ky * p.y);
        cy[j - 1] = ay * ky * std::cos(ky * p.y);
    }
    Point g{0.0, 0.0};
    for (int j = 0; j < T; ++j)
        for (int k = 0; k < T; ++k) {
            double c = c_[j * T + k];
            g.x += c * cx[j] * sy[k];
            g.y += c * sx[j] * cy[k];
        }
    return g;
}

SpectralField SpectralField::apply_power(double s) const {
    std::vector<double> out(c_.size());
    for (std::size_t m = 0; m < c_.size(); ++m)
        out[m] = c_[m] * std::pow(dom_.eigenvalue(m), s);
    return SpectralField(dom_, std::move(out));
}

double SpectralField::decay_constant(double m) const {
    double c = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        c = std::max(c, std::abs(c_[i]) * std::pow(dom_.eigenvalue(i), m));
    return c;
}

namespace {

// Per-axis projection quadrature resolving the top mode: at least 8 points
// per oscillation of sin(T pi x / L).
std::vector<std::pair<double, double>> axis_quad(double L, int trunc) {
    int n = std::max(256, 8 * trunc);
    int panels = (n + 31) / 32;
    const GaussRule& g = gauss_legendre(32);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(panels) * 32);
    for (int p = 0; p < panels; ++p) {
        double a = L * p / panels, b = L * (p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 32; ++q)
            out.emplace_back(mid + half * g.nodes[q], half * g.weights[q]);
    }
    return out;
}

} // namespace

SpectralField project(const Domain& domain, const std::function<double(const Point&)>& f) {
    const int T = domain.truncation();
    if (domain.kind() == DomainKind::interval) {
        auto q = axis_quad(domain.length(0), T);
        double L = domain.length(0);
        double amp = std::sqrt(2.0 / L);
        std::vector<double> c(T, 0.0);
        for (const auto& [x, w] : q) {
            double fv = f({x, 0.0}) * w;
            for (int j = 1; j <= T; ++j) c[j - 1] += fv * amp * std::sin(j * M_PI * x / L);
        }
        return SpectralField(domain, std::move(c));
    }
    auto qx = axis_quad(domain.length(0), T);
    auto qy = axis_quad(domain.length(1), T);
    double Lx = domain.length(0), Ly = domain.length(1);
    double ax = std::sqrt(2.0 / Lx), ay = std::sqrt(2.0 / Ly);
    // Separated passes: first integrate in y per x-node, then in x.
    std::vector<double> c(static_cast<std::size_t>(T) * T, 0.0);
    std::vector<double> row(T);
    for (const auto& [x, wx] : qx) {
        std::fill(row.begin(), row.end(), 0.0);
        for (const auto& [y, wy] : qy) {
            double fv = f({x, y}) * wy;
            for (int k = 1; k <= T; ++k) row[k - 1] += fv * ay * std::sin(k * M_PI * y / Ly);
        }
        for (int j = 1; j <= T; ++j) {
            double sx = wx * ax * std::sin(j * M_PI * x / Lx);
            for (int k = 0; k < T; ++k) c[(j - 1) * T + k] += sx * row[k];
        }
    }
    return SpectralField(domain, std::move(c));
}

namespace {

double profile(double u2, BumpShape shape) {
    if (u2 >= 1.0) return 0.0;
    if (shape == BumpShape::poly) {
        double v = 1.0 - u2;
        return v * v * v * v;
    }
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

// d/d(u^2) of the profile.
double profile_du2(double u2, BumpShape shape) {
    if (u2 >= 1.0) return 0.0;
    if (shape == BumpShape::poly) {
        double v = 1.0 - u2;
        return -4.0 * v * v * v;
    }
    double v = 1.0 - u2;
    return -std::exp(1.0 - 1.0 / v) / (v * v);
}

} // namespace

std::function<double(const Point&)> bump_function(const Domain& domain, Point center,
                                                  double radius, BumpShape shape) {
    domain.require_interior(center, "bump");
    if (!(radius > 0.0)) throw numeric_input_error("bump: radius must be positive");
    if (domain.kind() == DomainKind::interval) {
        return [center, radius, shape](const Point& p) {
            double u = (p.x - center.x) / radius;
            return profile(u * u, shape);
        };
    }
    return [center, radius, shape](const Point& p) {
        double ux = (p.x - center.x) / radius;
        double uy = (p.y - center.y) / radius;
        return profile(ux * ux, shape) * profile(uy * uy, shape);
    };
}

std::function<Point(const Point&)> bump_gradient(const Domain& domain, Point center,
                                                 double radius, BumpShape shape) {
    domain.require_interior(center, "bump");
    if (!(radius > 0.0)) throw numeric_input_error("bump: radius must be positive");
    if (domain.kind() == DomainKind::interval) {
        return [center, radius, shape](const Point& p) -> Point {
            double u = (p.x - center.x) / radius;
            return {profile_du2(u * u, shape) * 2.0 * u / radius, 0.0};
        };
    }
    return [center, radius, shape](const Point& p) -> Point {
        double ux = (p.x - center.x) / radius;
        double uy = (p.y - center.y) / radius;
        double fx = profile(ux * ux, shape), fy = profile(uy * uy, shape);
        double dx = profile_du2(ux * ux, shape) * 2.0 * ux / radius;
        double dy = profile_du2(uy * uy, shape) * 2.0 * uy / radius;
        return {dx * fy, fx * dy};
    };
}

} // namespace speclap
