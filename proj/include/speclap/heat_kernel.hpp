#pragma once

#include "speclap/domain.hpp"

namespace speclap {

/// Dirichlet heat kernel on the model domains, with a dual representation:
/// method-of-images reflected Gaussians for t below the per-axis switch time
/// L^2 / (2 pi^2), and the spectral sine series above it. Rectangle values
/// are products of the per-axis factors. All evaluations are accurate to
/// near machine precision across the switch.
class HeatKernel {
public:
    explicit HeatKernel(const Domain& domain, int image_count = 8);

    const Domain& domain() const { return dom_; }
    double switch_time(int axis) const { return t_switch_[axis]; }

    /// p_Omega(t, x, y), t > 0, x and y in the open domain.
    double value(double t, const Point& x, const Point& y) const;

    /// Survival probability S(t, x) = int_Omega p(t, x, y) dy in [0, 1].
    double survival(double t, const Point& x) const;

    /// Inward normal derivative q(t, x, z) = -d p(t, x, .) / d nu at the
    /// boundary point z (the density of the exit distribution in time-space).
    double boundary_normal_derivative(double t, const Point& x, const BoundaryPoint& z) const;

    /// Per-axis factors, exposed for the kernel integrators.
    double axis_value(int axis, double t, double x, double y) const;
    double axis_survival(int axis, double t, double x) const;
    /// Normal derivative of the axis kernel at endpoint 0 (side=0) or L (side=1).
    double axis_boundary_derivative(int axis, double t, double x, int side) const;

private:
    Domain dom_;
    double t_switch_[2]{0.0, 0.0};
    int images_;
};

} // namespace speclap
