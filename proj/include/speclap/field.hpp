#pragma once

#include <functional>
#include <vector>

#include "speclap/domain.hpp"
#include "speclap/grid.hpp"

namespace speclap {

/// A function represented by its coefficients in the Dirichlet sine basis.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(Domain domain, std::vector<double> coeffs);

    const Domain& domain() const { return dom_; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    /// Pointwise reconstruction sum_j c_j phi_j(p).
    double eval(const Point& p) const;

    /// Reconstruction of the x-gradient of the series.
    Point eval_gradient(const Point& p) const;

    /// Fractional power of the generator applied spectrally:
    /// coefficients multiplied by lambda_j^s (s may be negative or zero;
    /// s = -t inverts the operator power t).
    SpectralField apply_power(double s) const;

    /// Largest fitted constant C with |c_j| <= C lambda_j^{-m} over all modes.
    double decay_constant(double m) const;

private:
    Domain dom_;
    std::vector<double> c_;
};

/// Project a callable onto the basis by composite Gauss quadrature dense
/// enough to resolve the highest retained mode.
SpectralField project(const Domain& domain, const std::function<double(const Point&)>& f);

/// Smooth compactly supported bump profiles on the domain.
/// poly: (1 - ((x-c)/r)^2)^4 (tensor product in 2D), the profile used for
/// test functions; cinf: exp(1 - 1/(1 - u^2)), infinitely smooth.
enum class BumpShape { poly, cinf };

std::function<double(const Point&)> bump_function(const Domain& domain, Point center,
                                                  double radius, BumpShape shape = BumpShape::poly);
std::function<Point(const Point&)> bump_gradient(const Domain& domain, Point center,
                                                 double radius, BumpShape shape = BumpShape::poly);

} // namespace speclap
