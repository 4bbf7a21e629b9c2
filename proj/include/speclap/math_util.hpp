#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace speclap {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
/// Cached per n; thread-safe after first use of a given order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Upper incomplete gamma function Gamma(z, a) = int_a^inf v^{z-1} e^{-v} dv
/// for a > 0 and any real z (negative z handled by upward recurrence).
double upper_gamma(double z, double a);

/// Integrate f over [a, b] with an n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Integrate f over [a, b] where f may have integrable singularities at the
/// endpoints listed in `sing` (interior singular points are also accepted and
/// become panel breakpoints with geometric refinement on both sides).
/// Panels shrink geometrically toward each singular point by `ratio` per level
/// down to `floor_rel` times the local segment length. A positive `max_panel`
/// additionally splits every panel to at most that width, so smooth structure
/// away from the singular points is resolved too.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> sing, int nodes_per_panel = 8,
                          double ratio = 0.3, double floor_rel = 1e-14,
                          double max_panel = 0.0);

/// Quadrature nodes and weights underlying integrate_singular, for building
/// tensor-product rules over boxes with singular edges.
std::vector<std::pair<double, double>> singular_quadrature(double a, double b,
                                                           std::span<const double> sing,
                                                           int nodes_per_panel = 8,
                                                           double ratio = 0.3,
                                                           double floor_rel = 1e-14,
                                                           double max_panel = 0.0);

/// Dense LU factorization with partial pivoting, for the small linear
/// systems of the iteration schemes.
class DenseLU {
public:
    /// a: row-major n-by-n matrix.
    DenseLU(std::vector<double> a, std::size_t n);
    std::vector<double> solve(const std::vector<double>& b) const;

private:
    std::vector<double> lu_;
    std::vector<std::size_t> piv_;
    std::size_t n_;
};

/// Run body(i) for i in [0, n). Thread count is capped by the
/// SPECLAP_THREADS environment variable when set. Output written by disjoint
/// indices is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct invalid_configuration : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invalid_measure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace speclap
