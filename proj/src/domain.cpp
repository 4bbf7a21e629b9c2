#include "speclap/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace speclap {

Domain Domain::interval(double length, int truncation) {
    if (!(length > 0.0)) throw invalid_configuration("interval: length must be positive");
    if (truncation < 1 || truncation > 100000)
        throw invalid_configuration("interval: truncation out of range");
    Domain d;
    d.kind_ = DomainKind::interval;
    d.len_[0] = length;
    d.trunc_ = truncation;
    return d;
}

Domain Domain::rectangle(double lx, double ly, int truncation) {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw invalid_configuration("rectangle: side lengths must be positive");
    if (truncation < 1 || truncation > 4096)
        throw invalid_configuration("rectangle: truncation out of range");
    Domain d;
    d.kind_ = DomainKind::rectangle;
    d.len_[0] = lx;
    d.len_[1] = ly;
    d.trunc_ = truncation;
    return d;
}

std::size_t Domain::mode_count() const {
    std::size_t t = static_cast<std::size_t>(trunc_);
    return kind_ == DomainKind::interval ? t : t * t;
}

std::array<int, 2> Domain::mode_freq(std::size_t m) const {
    if (m >= mode_count()) throw numeric_input_error("mode index out of range");
    if (kind_ == DomainKind::interval) return {static_cast<int>(m) + 1, 0};
    int j = static_cast<int>(m / trunc_) + 1;
    int k = static_cast<int>(m % trunc_) + 1;
    return {j, k};
}

double Domain::eigenvalue(std::size_t m) const {
    auto [j, k] = mode_freq(m);
    double lx = j * M_PI / len_[0];
    double l = lx * lx;
    if (kind_ == DomainKind::rectangle) {
        double ly = k * M_PI / len_[1];
        l += ly * ly;
    }
    return l;
}

double Domain::eigenfunction(std::size_t m, const Point& p) const {
    auto [j, k] = mode_freq(m);
    double v = std::sqrt(2.0 / len_[0]) * std::sin(j * M_PI * p.x / len_[0]);
    if (kind_ == DomainKind::rectangle)
        v *= std::sqrt(2.0 / len_[1]) * std::sin(k * M_PI * p.y / len_[1]);
    return v;
}

double Domain::eigen_normal_derivative(std::size_t m, const BoundaryPoint& z) const {
    auto [j, k] = mode_freq(m);
    if (kind_ == DomainKind::interval) {
        // -d/dnu phi_j at 0 is phi_j'(0); at L it is -phi_j'(L).
        double amp = std::sqrt(2.0 / len_[0]) * j * M_PI / len_[0];
        if (z.face == 0) return amp;
        if (z.face == 1) return amp * (j % 2 == 0 ? -1.0 : 1.0);
        throw numeric_input_error("interval boundary face out of range");
    }
    double sx = std::sqrt(2.0 / len_[0]);
    double sy = std::sqrt(2.0 / len_[1]);
    double kx = j * M_PI / len_[0];
    double ky = k * M_PI / len_[1];
    switch (z.face) {
        case 0: // y = 0, tangential coordinate is x
            return sx * std::sin(kx * z.param) * sy * ky;
        case 1: // y = Ly
            return sx * std::sin(kx * z.param) * sy * ky * -std::cos(k * M_PI);
        case 2: // x = 0, tangential coordinate is y
            return sy * std::sin(ky * z.param) * sx * kx;
        case 3: // x = Lx
            return sy * std::sin(ky * z.param) * sx * kx * -std::cos(j * M_PI);
        default:
            throw numeric_input_error("rectangle boundary face out of range");
    }
}

double Domain::delta(const Point& p) const {
    if (kind_ == DomainKind::interval) return std::min(p.x, len_[0] - p.x);
    return std::min(std::min(p.x, len_[0] - p.x), std::min(p.y, len_[1] - p.y));
}

double Domain::diameter() const {
    if (kind_ == DomainKind::interval) return len_[0];
    return std::hypot(len_[0], len_[1]);
}

double Domain::volume() const {
    return kind_ == DomainKind::interval ? len_[0] : len_[0] * len_[1];
}

bool Domain::contains_interior(const Point& p) const { return delta(p) > 0.0; }

void Domain::require_interior(const Point& p, const char* what) const {
    if (!contains_interior(p)) {
        std::ostringstream os;
        os << what << ": point (" << p.x;
        if (dim() == 2) os << ", " << p.y;
        os << ") is not in the open domain";
        throw numeric_input_error(os.str());
    }
}

double Domain::face_length(int face) const {
    if (kind_ == DomainKind::interval) {
        if (face < 0 || face > 1) throw numeric_input_error("face out of range");
        return 0.0;
    }
    if (face < 0 || face > 3) throw numeric_input_error("face out of range");
    return face < 2 ? len_[0] : len_[1];
}

Point Domain::boundary_coords(const BoundaryPoint& z) const {
    if (kind_ == DomainKind::interval) {
        if (z.face == 0) return {0.0, 0.0};
        if (z.face == 1) return {len_[0], 0.0};
        throw numeric_input_error("interval boundary face out of range");
    }
    switch (z.face) {
        case 0: return {z.param, 0.0};
        case 1: return {z.param, len_[1]};
        case 2: return {0.0, z.param};
        case 3: return {len_[0], z.param};
        default: throw numeric_input_error("rectangle boundary face out of range");
    }
}

double Domain::boundary_measure() const {
    return kind_ == DomainKind::interval ? 2.0 : 2.0 * (len_[0] + len_[1]);
}

std::string Domain::describe() const {
    std::ostringstream os;
    if (kind_ == DomainKind::interval)
        os << "interval(0," << len_[0] << ")";
    else
        os << "rectangle(0," << len_[0] << ")x(0," << len_[1] << ")";
    os << " trunc=" << trunc_;
    return os.str();
}

} // namespace speclap
