#pragma once

#include <memory>
#include <vector>

#include "speclap/domain.hpp"

namespace speclap {

/// Boundary-graded quadrature grid. One-dimensional grids are composite
/// Gauss panels (2 points each, 3 on a few central panels to hit the node
/// budget exactly) on geometric panels clustering toward both endpoints;
/// rectangle grids are tensor products of per-axis grids. No node lies on
/// the boundary and every node distance is at least delta_min.
class Grid {
public:
    /// n: total node budget for the interval, per-axis budget for the
    /// rectangle (n^2 nodes in total). ratio in (0,1) controls the geometric
    /// grading; delta_min defaults to 1e-4 * diameter.
    Grid(const Domain& domain, int n, double ratio = 0.75, double delta_min = -1.0);

    const Domain& domain() const { return dom_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Per-axis node coordinates (axis 0 always, axis 1 for rectangles).
    const std::vector<double>& axis_nodes(int axis) const { return axis_nodes_[axis]; }
    const std::vector<double>& axis_weights(int axis) const { return axis_weights_[axis]; }

    /// Smallest node distance to the boundary.
    double min_delta() const;

private:
    Domain dom_;
    std::vector<Point> nodes_;
    std::vector<double> weights_;
    std::vector<double> axis_nodes_[2];
    std::vector<double> axis_weights_[2];
};

/// Weight choices for weighted integrals against the boundary distance.
enum class DistanceWeight { one, delta, delta_pow };

/// Scalar samples on a shared grid, with piecewise-quadratic interpolation.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const Grid> grid);
    GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Local quadratic (tensor-quadratic in 2D) interpolation; exact at nodes.
    double interpolate(const Point& p) const;
    /// Gradient of the local interpolant.
    Point interpolate_gradient(const Point& p) const;

    /// Quadrature of value * omega(delta) over the domain, with
    /// omega in {1, delta, delta^p}.
    double weighted_integral(DistanceWeight w = DistanceWeight::one, double p = 1.0) const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
};

/// Least-squares fit of log(v) against log(delta): v ~ C * delta^rate.
struct RateFit {
    double rate{0.0};
    double log_c{0.0};
    double r_squared{0.0};
};

/// Fit a boundary rate from (delta, value) samples with positive values.
RateFit fit_boundary_rate(const std::vector<double>& delta, const std::vector<double>& value);

} // namespace speclap
