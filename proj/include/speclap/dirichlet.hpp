#pragma once

#include <memory>
#include <mutex>

#include "speclap/kernels.hpp"
#include "speclap/measures.hpp"

namespace speclap {

struct LinearReport {
    double weighted_l1{0.0};   ///< ||u||_{L1(delta dx)} excluding singular nodes
    double data_norm{0.0};     ///< ||delta mu|| + |zeta|
    double stability_ratio{0.0};
    std::vector<std::size_t> singular_nodes; ///< grid nodes hit exactly by an atom
};

/// Representation-formula solver for the linear Dirichlet problem with
/// measure data: u = int G^s(., y) dmu(y) + int P^s(., z) dzeta(z).
class DirichletSolver {
public:
    DirichletSolver(std::shared_ptr<const KernelEvaluator> kernel,
                    std::shared_ptr<const Grid> grid);

    const KernelEvaluator& kernel() const { return *kernel_; }
    std::shared_ptr<const KernelEvaluator> kernel_ptr() const { return kernel_; }
    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const std::vector<std::pair<BoundaryPoint, double>>& boundary_quad() const { return bq_; }

    /// Nodewise superposition over the grid.
    GridFunction solve(const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                       LinearReport* report = nullptr) const;

    /// The same representation formula at an arbitrary interior point.
    double evaluate(const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                    const Point& x) const;

    /// Dense Green matrix G(x_i, x_j) over the grid nodes; built once on
    /// demand. Diagonal entries hold a cell-averaged regularization.
    const std::vector<double>& green_matrix() const;
    /// y = G[diag(grid weights) f], the Green operator on grid samples.
    std::vector<double> green_apply(const std::vector<double>& f) const;

    /// P^s zeta at every grid node.
    GridFunction poisson_extension(const BoundaryMeasure& zeta) const;
    /// h1 at every grid node (cached).
    const std::vector<double>& h1_nodes() const;

    /// Residual of the weak formulation against the test function
    /// psi = (-L)^{-s} of a bump profile:
    /// int u_eval * (-L)^s psi - int psi dmu + int (dpsi/dnu) dzeta.
    double weak_residual(const std::function<double(const Point&)>& u_eval,
                         const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                         const Point& bump_center, double bump_radius) const;

    /// Strip average (1/t) int_{delta < t} (u / h1) phi dx.
    double boundary_trace(const std::function<double(const Point&)>& u_eval,
                          const std::function<double(const BoundaryPoint&)>& phi,
                          double t) const;
    /// Richardson extrapolation of the trace over t, t/2, t/4.
    double extrapolated_trace(const std::function<double(const Point&)>& u_eval,
                              const std::function<double(const BoundaryPoint&)>& phi,
                              double t) const;

    /// int (G^s(x, y)/delta(y))^p delta(x) dx for one probe y.
    double lp_integral(double p, const Point& y) const;
    /// Supremum of lp_integral over the probe set.
    double lp_threshold_scan(double p, const std::vector<Point>& probes) const;

private:
    std::shared_ptr<const KernelEvaluator> kernel_;
    std::shared_ptr<const Grid> grid_;
    std::vector<std::pair<BoundaryPoint, double>> bq_;
    mutable std::mutex cache_mtx_;
    mutable std::vector<double> green_cache_;
    mutable std::vector<double> h1_cache_;
};

} // namespace speclap
