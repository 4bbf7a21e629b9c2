#include "speclap/large.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace speclap {

void LargeRunConfig::validate() const {
    if (!(s > 0.0 && s < 1.0)) throw invalid_configuration("large run: s must lie in (0, 1)");
    double lo = 1.0 + s, hi = 1.0 / (1.0 - s);
    if (!(p > lo && p < hi)) {
        std::ostringstream os;
        os << "p outside (" << lo << ", " << hi << ")";
        throw invalid_configuration(os.str());
    }
    if (schedule.empty()) throw invalid_configuration("large run: empty schedule");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] >= 1.0)) throw invalid_configuration("large run: datum must be >= 1");
        if (k && !(schedule[k] > schedule[k - 1]))
            throw invalid_configuration("large run: schedule must increase");
    }
    if (!(stagnation_tol > 0.0) || !(core_fraction > 0.0 && core_fraction < 0.5))
        throw invalid_configuration("large run: bad stagnation parameters");
    if (!(fit_lo > 0.0 && fit_lo < fit_hi))
        throw invalid_configuration("large run: bad fit window");
}

GridFunction solve_datum_j(const DirichletSolver& solver, const LargeRunConfig& config,
                           double j, SemilinearReport* report) {
    config.validate();
    if (!(j >= 0.0)) throw invalid_configuration("solve_datum_j: datum must be nonnegative");
    if (j == 0.0) return GridFunction(solver.grid_ptr(), std::vector<double>(solver.grid().size(), 0.0));
    Nonlinearity g = make_nonlinearity("power", config.p, config.s);
    BoundaryMeasure zeta;
    zeta.density = [j](const BoundaryPoint&) { return j; };
    SemilinearOptions opts;
    opts.tol = config.inner_tol;
    opts.max_iter = config.inner_max_iter;
    return solve_semilinear(solver, g, zeta, opts, report);
}

namespace {

PointwiseFn delta_power(const Domain& dom, double alpha) {
    PointwiseFn f;
    f.value = [&dom, alpha](const Point& x) { return std::pow(dom.delta(x), -alpha); };
    f.gradient = [&dom, alpha](const Point& x) {
        double d = dom.delta(x);
        double mag = -alpha * std::pow(d, -alpha - 1.0);
        if (dom.kind() == DomainKind::interval)
            return Point{x.x <= 0.5 * dom.length(0) ? mag : -mag, 0.0};
        // Gradient along the axis realizing the minimum distance.
        double cand[4] = {x.x, dom.length(0) - x.x, x.y, dom.length(1) - x.y};
        int k = 0;
        for (int i = 1; i < 4; ++i)
            if (cand[i] < cand[k]) k = i;
        switch (k) {
            case 0: return Point{mag, 0.0};
            case 1: return Point{-mag, 0.0};
            case 2: return Point{0.0, mag};
            default: return Point{0.0, -mag};
        }
    };
    return f;
}

} // namespace

GridFunction build_supersolution(const DirichletSolver& solver, const LargeRunConfig& config,
                                 SupersolutionReport* report) {
    config.validate();
    const Grid& grid = solver.grid();
    const Domain& dom = grid.domain();
    const KernelEvaluator& K = solver.kernel();
    if (K.s() != config.s)
        throw invalid_configuration("build_supersolution: kernel s differs from config");
    const std::size_t n = grid.size();
    const double alpha = config.alpha();
    const double ap = alpha * config.p; // = alpha + 2s
    const double band_hi = 0.1 * dom.diameter();

    PointwiseFn f = delta_power(dom, alpha);
    std::vector<double> a(n), g1(n), delta(n);
    parallel_for(n, [&](std::size_t i) {
        a[i] = K.apply_pointwise(f, grid.nodes()[i]);
        g1[i] = K.green_one(grid.nodes()[i]);
        delta[i] = dom.delta(grid.nodes()[i]);
    });

    // Near-boundary band: |(-L)^s delta^-alpha| <= C delta^{-alpha p}; the
    // interior complement is controlled by its supremum directly.
    double c_band = 0.0, interior_sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (delta[i] <= band_hi)
            c_band = std::max(c_band, std::abs(a[i]) * std::pow(delta[i], ap));
        else
            interior_sup = std::max(interior_sup, std::abs(a[i]));
    }
    double lambda = std::max(std::pow(c_band, 1.0 / (config.p - 1.0)), 1.0);
    double mu = lambda * interior_sup;

    GridFunction ubar(solver.grid_ptr());
    double min_slack = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ubar[i] = mu * g1[i] + lambda * std::pow(delta[i], -alpha);
        double up = std::pow(ubar[i], config.p);
        double slack = mu + lambda * a[i] + up;
        double scale = std::max({1.0, std::abs(lambda * a[i]), up});
        double rel = slack / scale;
        if (rel < min_slack) {
            min_slack = rel;
            worst = i;
        }
    }
    if (report) {
        report->c_band = c_band;
        report->lambda = lambda;
        report->mu = mu;
        report->min_slack = min_slack;
        report->worst_node = worst;
    }
    if (min_slack < -1e-6) {
        std::ostringstream os;
        os << "supersolution certificate fails at node " << worst << " (x = "
           << grid.nodes()[worst].x << ", slack = " << min_slack << ")";
        throw invalid_configuration(os.str());
    }
    return ubar;
}

GridFunction solve_large(const DirichletSolver& solver, const LargeRunConfig& config,
                         LargeReport* report) {
    config.validate();
    const Grid& grid = solver.grid();
    const Domain& dom = grid.domain();
    const std::size_t n = grid.size();
    const double core = config.core_fraction * dom.diameter();

    GridFunction ubar = build_supersolution(solver, config, nullptr);
    LargeReport rep;
    GridFunction u(solver.grid_ptr());
    bool first = true;
    for (double j : config.schedule) {
        SemilinearReport inner;
        GridFunction uj = solve_datum_j(solver, config, j, &inner);
        if (!inner.converged) break; // partial result: keep the last good step
        rep.inner_iterations.push_back(inner.iterations);
        rep.last_datum = j;
        double core_change = 0.0, core_sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rep.monotone_defect = std::max(rep.monotone_defect, u[i] - uj[i]);
            rep.domination_defect = std::max(rep.domination_defect, uj[i] - ubar[i]);
            if (dom.delta(grid.nodes()[i]) >= core) {
                core_change = std::max(core_change, std::abs(uj[i] - u[i]));
                core_sup = std::max(core_sup, std::abs(uj[i]));
            }
        }
        rep.core_changes.push_back(core_change);
        u = std::move(uj);
        // Stagnation is judged relative to the core amplitude: the interior
        // approach to the limit is a slow power of the datum, so an absolute
        // threshold would never trigger at practical schedule lengths.
        if (!first && core_change < config.stagnation_tol * core_sup) {
            rep.stagnated = true;
            break;
        }
        first = false;
    }

    // Below the crossover depth datum^{-1/(alpha - (2 - 2s))} the finite
    // datum still caps the profile at j * h1; fit only above it, where the
    // blow-up rate has developed.
    const double alpha = config.alpha();
    double gap = alpha - (2.0 - 2.0 * config.s);
    double fit_lo = config.fit_lo;
    if (gap > 0.0 && rep.last_datum > 1.0)
        fit_lo = std::max(fit_lo, 2.0 * std::pow(rep.last_datum, -1.0 / gap));
    std::vector<double> fd, fv;
    rep.fitted_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = dom.delta(grid.nodes()[i]);
        if (d >= fit_lo && d <= config.fit_hi && u[i] > 0.0) {
            fd.push_back(d);
            fv.push_back(u[i]);
            rep.fitted_c = std::max(rep.fitted_c, u[i] * std::pow(d, alpha));
        }
    }
    rep.rate = fit_boundary_rate(fd, fv);
    if (report) *report = rep;
    return u;
}

} // namespace speclap
