#pragma once

#include "speclap/dirichlet.hpp"

namespace speclap {

/// Absorption nonlinearity g(x, t) >= 0 with g(x, 0) = 0.
struct Nonlinearity {
    std::string name;
    std::function<double(const Point&, double)> g;
    std::function<double(const Point&, double)> g_prime; ///< d g / d t
    std::function<double(double)> majorant;              ///< nondecreasing h with g(x,t) <= h(t)
    bool monotone{true};
};

/// Named registry for the CLI: `zero`, `linear`, `power` (param = exponent p,
/// admissible only for p < 1/(1-s)).
Nonlinearity make_nonlinearity(const std::string& name, double param, double s);

/// Probe the structural invariants (g(x,0) = 0, monotonicity if flagged) and
/// the integrability certificate for h(delta^{-(2-2s)}) * delta over the grid.
void check_nonlinearity(const Nonlinearity& g, const DirichletSolver& solver);

struct SemilinearOptions {
    double tol{1e-8};    ///< weighted-L1(delta) increment threshold
    int max_iter{500};
    bool start_from_supersolution{true}; ///< true: u0 = P zeta; false: u0 = 0
};

struct SemilinearReport {
    int iterations{0};
    double last_increment{0.0};
    bool converged{false};
    double bracket_violation{0.0}; ///< worst monotonicity defect of the iterates
    double bound_violation{0.0};   ///< worst escape above P zeta before clamping
};

/// Monotone Picard iteration on the absorption potential
/// v_{k+1} = G^s[g(., P zeta - v_k)], damped nodewise for stability; returns
/// u = P zeta - v_infinity with 0 <= u <= P zeta.
GridFunction solve_semilinear(const DirichletSolver& solver, const Nonlinearity& g,
                              const BoundaryMeasure& zeta, const SemilinearOptions& opts = {},
                              SemilinearReport* report = nullptr);

/// Slack of the convexity inequality for w = G^s f against the test function
/// psi built from a bump: int f Phi'(w) psi - int Phi(w) (-L)^s psi.
/// Nonnegative slack (up to tolerance) certifies the inequality.
double kato_check(const KernelEvaluator& kernel, const SpectralField& f,
                  const std::function<double(double)>& phi,
                  const std::function<double(double)>& phi_prime, const Point& bump_center,
                  double bump_radius);

} // namespace speclap
