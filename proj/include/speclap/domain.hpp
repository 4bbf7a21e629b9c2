#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "speclap/math_util.hpp"

namespace speclap {

/// A point of the closed domain. `y` is ignored for one-dimensional domains.
struct Point {
    double x{0.0};
    double y{0.0};
};

/// A boundary point: face index plus arclength parameter along the face.
/// Interval faces are the two endpoints (param unused). Rectangle faces are
/// the four edges, ordered bottom (y=0), top (y=Ly), left (x=0), right (x=Lx),
/// parametrized by the tangential coordinate.
struct BoundaryPoint {
    int face{0};
    double param{0.0};
};

enum class DomainKind { interval, rectangle };

/// Model domain carrying the analytic Dirichlet sine eigenbasis.
/// Interval (0, L): lambda_j = (j pi / L)^2, phi_j = sqrt(2/L) sin(j pi x / L).
/// Rectangle (0,Lx) x (0,Ly): tensor products, enumerated with the per-axis
/// index bounded by the truncation, row-major in (j, k).
class Domain {
public:
    static Domain interval(double length, int truncation);
    static Domain rectangle(double lx, double ly, int truncation);

    DomainKind kind() const { return kind_; }
    int dim() const { return kind_ == DomainKind::interval ? 1 : 2; }
    double length(int axis) const { return len_[axis]; }
    int truncation() const { return trunc_; }

    std::size_t mode_count() const;
    /// Mode index -> per-axis frequencies (k unused in 1D, reported as 0).
    std::array<int, 2> mode_freq(std::size_t m) const;
    double eigenvalue(std::size_t m) const;
    double eigenfunction(std::size_t m, const Point& p) const;
    /// Outward normal derivative of the eigenfunction at a boundary point,
    /// with the sign convention of -d phi / d nu (nu outward).
    double eigen_normal_derivative(std::size_t m, const BoundaryPoint& z) const;

    double delta(const Point& p) const; ///< distance to the boundary
    double diameter() const;
    double volume() const;
    bool contains_interior(const Point& p) const;
    void require_interior(const Point& p, const char* what) const;

    int face_count() const { return kind_ == DomainKind::interval ? 2 : 4; }
    double face_length(int face) const;
    /// Boundary point -> ambient coordinates.
    Point boundary_coords(const BoundaryPoint& z) const;
    /// Total boundary measure: counting measure (2 points) for the interval,
    /// arclength for the rectangle.
    double boundary_measure() const;

    std::string describe() const;

private:
    DomainKind kind_{DomainKind::interval};
    double len_[2]{0.0, 0.0};
    int trunc_{0};
};

} // namespace speclap
