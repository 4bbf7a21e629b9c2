#pragma once

#include "speclap/semilinear.hpp"

namespace speclap {

/// Configuration of a boundary blow-up run for the power absorption problem.
struct LargeRunConfig {
    double s{0.5};
    double p{1.75}; ///< admissible range (1 + s, 1/(1 - s)), open
    std::vector<double> schedule{1, 2, 4, 8, 16, 32, 64};
    double stagnation_tol{0.1}; ///< relative sup-norm threshold on the interior core
    double core_fraction{0.2};   ///< core = {delta >= core_fraction * diam}
    double fit_lo{1e-3};         ///< rate-fit window in delta
    double fit_hi{1e-1};
    double inner_tol{1e-8};
    int inner_max_iter{5000};

    double alpha() const { return 2.0 * s / (p - 1.0); }
    void validate() const;
};

struct SupersolutionReport {
    double c_band{0.0};   ///< fitted constant of |(-L)^s delta^-alpha| / delta^-alpha*p
    double lambda{0.0};
    double mu{0.0};
    double min_slack{0.0}; ///< min over nodes of ((-L)^s ubar + ubar^p) / scale
    std::size_t worst_node{0};
};

struct LargeReport {
    std::vector<int> inner_iterations;
    std::vector<double> core_changes; ///< sup |u_j - u_prev| on the core per step
    double monotone_defect{0.0};      ///< worst decrease between consecutive u_j
    double domination_defect{0.0};    ///< worst excess of u_j over ubar
    bool stagnated{false};
    double last_datum{0.0};
    RateFit rate;
    double fitted_c{0.0}; ///< C with u <= C delta^-alpha on the fit window
};

/// One term of the approximating sequence: absorption g = t^p with boundary
/// datum u/h1 = j.
GridFunction solve_datum_j(const DirichletSolver& solver, const LargeRunConfig& config,
                           double j, SemilinearReport* report = nullptr);

/// Explicit blow-up supersolution ubar = mu G^s 1 + lambda delta^-alpha with
/// constants calibrated so that (-L)^s ubar + ubar^p >= 0 up to tolerance;
/// throws if the certificate fails at any node.
GridFunction build_supersolution(const DirichletSolver& solver, const LargeRunConfig& config,
                                 SupersolutionReport* report = nullptr);

/// Run the schedule until interior stagnation, fit the boundary blow-up rate
/// of the limit, and record the monotonicity/domination certificates.
GridFunction solve_large(const DirichletSolver& solver, const LargeRunConfig& config,
                         LargeReport* report = nullptr);

} // namespace speclap
