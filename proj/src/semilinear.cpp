#include "speclap/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace speclap {

Nonlinearity make_nonlinearity(const std::string& name, double param, double s) {
    Nonlinearity g;
    g.name = name;
    if (name == "zero") {
        g.g = [](const Point&, double) { return 0.0; };
        g.g_prime = [](const Point&, double) { return 0.0; };
        g.majorant = [](double) { return 0.0; };
        return g;
    }
    if (name == "linear") {
        g.g = [](const Point&, double t) { return std::max(t, 0.0); };
        g.g_prime = [](const Point&, double t) { return t > 0.0 ? 1.0 : 0.0; };
        g.majorant = [](double t) { return std::max(t, 0.0); };
        return g;
    }
    if (name == "power") {
        double p = param;
        if (!(p > 1.0))
            throw invalid_configuration("power nonlinearity needs exponent p > 1");
        if (!(s < 1.0) || !(p < 1.0 / (1.0 - s)))
            throw invalid_configuration("power nonlinearity inadmissible: p >= 1/(1-s)");
        g.g = [p](const Point&, double t) { return t > 0.0 ? std::pow(t, p) : 0.0; };
        g.g_prime = [p](const Point&, double t) {
            return t > 0.0 ? p * std::pow(t, p - 1.0) : 0.0;
        };
        g.majorant = [p](double t) { return t > 0.0 ? std::pow(t, p) : 0.0; };
        return g;
    }
    throw invalid_configuration("unknown nonlinearity: " + name);
}

void check_nonlinearity(const Nonlinearity& g, const DirichletSolver& solver) {
    const Grid& grid = solver.grid();
    const Domain& dom = grid.domain();
    const double s = solver.kernel().s();
    // Structural probes at a thinned node subset.
    std::size_t stride = std::max<std::size_t>(1, grid.size() / 16);
    for (std::size_t i = 0; i < grid.size(); i += stride) {
        const Point& x = grid.nodes()[i];
        if (std::abs(g.g(x, 0.0)) > 1e-12)
            throw invalid_configuration("nonlinearity violates g(x, 0) = 0");
        if (g.monotone) {
            double prev = g.g(x, 0.0);
            for (double t : {0.25, 1.0, 4.0, 16.0}) {
                double cur = g.g(x, t);
                if (cur < prev - 1e-12)
                    throw invalid_configuration("nonlinearity not nondecreasing in t");
                prev = cur;
            }
        }
    }
    // Integrability certificate: h(delta^{-(2-2s)}) * delta must integrate.
    double cert = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = dom.delta(grid.nodes()[i]);
        cert += grid.weights()[i] * g.majorant(std::pow(d, -(2.0 - 2.0 * s))) * d;
    }
    if (!std::isfinite(cert))
        throw invalid_configuration("nonlinearity fails the integrability certificate");
}

GridFunction solve_semilinear(const DirichletSolver& solver, const Nonlinearity& g,
                              const BoundaryMeasure& zeta, const SemilinearOptions& opts,
                              SemilinearReport* report) {
    check_nonlinearity(g, solver);
    const Grid& grid = solver.grid();
    const Domain& dom = grid.domain();
    const std::size_t n = grid.size();
    GridFunction pz = solver.poisson_extension(zeta);
    for (std::size_t i = 0; i < n; ++i)
        if (pz[i] < -1e-12)
            throw invalid_measure("solve_semilinear: boundary datum must be nonnegative");

    // Shifted monotone iteration: with a nodewise majorant M_i of g' on the
    // bracket, t -> M_i t - g(x_i, t) is nondecreasing, so
    //   u_{k+1} = (I + G W M)^{-1} (G W (M u_k - g(u_k)) + P zeta)
    // is an isotone map whose iterates decrease from the supersolution
    // P zeta (or increase from the subsolution 0) toward the solution.
    const auto& gm = solver.green_matrix();
    const auto& w = grid.weights();
    const bool from_above = opts.start_from_supersolution;
    std::vector<double> u(n, 0.0);
    if (from_above) u = pz.values();

    auto derivative = [&](std::size_t i, double t) {
        if (g.g_prime) return std::max(g.g_prime(grid.nodes()[i], t), 0.0);
        double h = std::max(1e-6, 1e-6 * std::abs(t));
        return std::max((g.g(grid.nodes()[i], t + h) - g.g(grid.nodes()[i], t)) / h, 0.0);
    };

    SemilinearReport rep;
    std::vector<double> M(n), gv(n), rhs(n);
    std::unique_ptr<DenseLU> lu;
    auto refactor = [&](const std::vector<double>& cap) {
        for (std::size_t i = 0; i < n; ++i) M[i] = derivative(i, cap[i]);
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a[i * n + j] = (i == j ? 1.0 : 0.0) + gm[i * n + j] * w[j] * M[j];
        lu = std::make_unique<DenseLU>(std::move(a), n);
    };
    refactor(pz.values());

    const int refresh = 50;
    for (int it = 0; it < opts.max_iter; ++it) {
        // The upper iterate bounds the remaining bracket, so the majorant may
        // be tightened from it as the sequence descends.
        if (from_above && it > 0 && it % refresh == 0) refactor(u);
        for (std::size_t i = 0; i < n; ++i) {
            gv[i] = g.g(grid.nodes()[i], u[i]);
            rhs[i] = pz[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = &gm[i * n];
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * w[j] * (M[j] * u[j] - gv[j]);
            rhs[i] += acc;
        }
        std::vector<double> un = lu->solve(rhs);
        rep.iterations = it + 1;
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rep.bound_violation =
                std::max({rep.bound_violation, -un[i], un[i] - pz[i]});
            double clamped = std::clamp(un[i], 0.0, pz[i]);
            double defect = from_above ? clamped - u[i] : u[i] - clamped;
            rep.bracket_violation = std::max(rep.bracket_violation, defect);
            inc += w[i] * std::abs(clamped - u[i]) * dom.delta(grid.nodes()[i]);
            u[i] = clamped;
        }
        rep.last_increment = inc;
        if (inc < opts.tol) {
            rep.converged = true;
            break;
        }
    }
    if (rep.converged) {
        // Guard against spurious fixed points of the clamp (the shifted
        // solves can collapse when the datum exceeds what the grid resolves):
        // the converged iterate must satisfy u + G[g(u)] = P zeta.
        for (std::size_t i = 0; i < n; ++i) gv[i] = g.g(grid.nodes()[i], u[i]);
        std::vector<double> absorbed = solver.green_apply(gv);
        for (std::size_t i = 0; i < n; ++i) {
            double res = u[i] + absorbed[i] - pz[i];
            if (std::abs(res) > 1e-5 * std::max(1.0, pz[i])) {
                rep.converged = false;
                rep.last_increment = std::abs(res);
                break;
            }
        }
    }
    if (report) *report = rep;
    return GridFunction(solver.grid_ptr(), std::move(u));
}

double kato_check(const KernelEvaluator& kernel, const SpectralField& f,
                  const std::function<double(double)>& phi,
                  const std::function<double(double)>& phi_prime, const Point& bump_center,
                  double bump_radius) {
    const Domain& dom = kernel.domain();
    SpectralField bump = project(dom, bump_function(dom, bump_center, bump_radius));
    SpectralField psi = bump.apply_power(-kernel.s());
    SpectralField w = f.apply_power(-kernel.s());
    // All factors are smooth; composite Gauss over the closed domain.
    auto integrand = [&](const Point& x) {
        double wx = w.eval(x);
        return f.eval(x) * phi_prime(wx) * psi.eval(x) - phi(wx) * bump.eval(x);
    };
    const GaussRule& rule = gauss_legendre(16);
    auto axis_quad = [&](double L) {
        std::vector<std::pair<double, double>> q;
        const int panels = 24;
        double h = L / panels;
        for (int p = 0; p < panels; ++p)
            for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                q.push_back({(p + 0.5 * (1.0 + rule.nodes[k])) * h, 0.5 * h * rule.weights[k]});
        return q;
    };
    double slack = 0.0;
    if (dom.kind() == DomainKind::interval) {
        for (const auto& [x, wq] : axis_quad(dom.length(0))) slack += wq * integrand({x, 0.0});
    } else {
        auto qx = axis_quad(dom.length(0));
        auto qy = axis_quad(dom.length(1));
        for (const auto& [x, wx] : qx)
            for (const auto& [y, wy] : qy) slack += wx * wy * integrand({x, y});
    }
    return slack;
}

} // namespace speclap
