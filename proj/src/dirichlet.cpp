#include "speclap/dirichlet.hpp"

#include <algorithm>
#include <cmath>

namespace speclap {

namespace {

bool same_point(const Point& a, const Point& b, int dim) {
    if (a.x != b.x) return false;
    return dim == 1 || a.y == b.y;
}

} // namespace

DirichletSolver::DirichletSolver(std::shared_ptr<const KernelEvaluator> kernel,
                                 std::shared_ptr<const Grid> grid)
    : kernel_(std::move(kernel)), grid_(std::move(grid)) {
    if (kernel_->domain().kind() != grid_->domain().kind() ||
        kernel_->domain().length(0) != grid_->domain().length(0))
        throw invalid_configuration("DirichletSolver: kernel and grid domains differ");
    bq_ = boundary_quadrature(kernel_->domain());
}

const std::vector<double>& DirichletSolver::green_matrix() const {
    std::lock_guard<std::mutex> lock(cache_mtx_);
    if (!green_cache_.empty()) return green_cache_;
    const auto& nodes = grid_->nodes();
    const std::size_t n = nodes.size();
    std::vector<double> m(n * n, 0.0);
    const KernelEvaluator& K = *kernel_;
    const Domain& dom = K.domain();
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < i; ++j) m[i * n + j] = K.green(nodes[i], nodes[j]);
        // Diagonal: cell average of the singular kernel over the node's
        // quadrature cell (1D); quarter-cell offset evaluation in 2D.
        if (dom.kind() == DomainKind::interval) {
            double w = grid_->weights()[i];
            double a = std::max(1e-12, nodes[i].x - 0.5 * w);
            double b = std::min(dom.length(0) - 1e-12, nodes[i].x + 0.5 * w);
            double cell = integrate_singular(
                [&](double y) { return K.green(nodes[i], {y, 0.0}); }, a, b,
                std::vector<double>{nodes[i].x}, 4, 0.3, 1e-8);
            m[i * n + i] = cell / (b - a);
        } else {
            double h = 0.25 * std::sqrt(grid_->weights()[i]);
            m[i * n + i] = K.green(nodes[i], {nodes[i].x + h, nodes[i].y + h});
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i];
    green_cache_ = std::move(m);
    return green_cache_;
}

std::vector<double> DirichletSolver::green_apply(const std::vector<double>& f) const {
    const auto& m = green_matrix();
    const auto& w = grid_->weights();
    const std::size_t n = w.size();
    if (f.size() != n) throw numeric_input_error("green_apply: size mismatch");
    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double acc = 0.0;
        const double* row = &m[i * n];
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * w[j] * f[j];
        out[i] = acc;
    });
    return out;
}

GridFunction DirichletSolver::poisson_extension(const BoundaryMeasure& zeta) const {
    GridFunction u(grid_);
    const auto& nodes = grid_->nodes();
    parallel_for(nodes.size(), [&](std::size_t i) {
        double v = 0.0;
        for (const auto& a : zeta.atoms) v += a.weight * kernel_->poisson(nodes[i], a.location);
        if (zeta.has_density())
            for (const auto& [z, w] : bq_)
                v += w * zeta.density(z) * kernel_->poisson(nodes[i], z);
        u[i] = v;
    });
    return u;
}

const std::vector<double>& DirichletSolver::h1_nodes() const {
    std::lock_guard<std::mutex> lock(cache_mtx_);
    if (!h1_cache_.empty()) return h1_cache_;
    const auto& nodes = grid_->nodes();
    std::vector<double> h(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) { h[i] = kernel_->h1(nodes[i]); });
    h1_cache_ = std::move(h);
    return h1_cache_;
}

GridFunction DirichletSolver::solve(const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                                    LinearReport* report) const {
    mu.validate(kernel_->domain());
    const Domain& dom = kernel_->domain();
    const auto& nodes = grid_->nodes();
    const std::size_t n = nodes.size();
    GridFunction u = poisson_extension(zeta);
    std::vector<char> singular(n, 0);
    parallel_for(n, [&](std::size_t i) {
        double v = u[i];
        for (const auto& a : mu.atoms) {
            if (same_point(a.location, nodes[i], dom.dim())) {
                singular[i] = 1;
                continue; // kernel singular here; node flagged, term dropped
            }
            v += a.weight * kernel_->green(nodes[i], a.location);
        }
        u[i] = v;
    });
    if (mu.density) {
        auto gd = green_apply(mu.density->values());
        for (std::size_t i = 0; i < n; ++i) u[i] += gd[i];
    }
    if (report) {
        report->singular_nodes.clear();
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (singular[i]) {
                report->singular_nodes.push_back(i);
                continue;
            }
            l1 += grid_->weights()[i] * std::abs(u[i]) * dom.delta(nodes[i]);
        }
        report->weighted_l1 = l1;
        report->data_norm = mu.weighted_variation(dom) + boundary_variation(dom, zeta);
        report->stability_ratio = report->data_norm > 0.0 ? l1 / report->data_norm : 0.0;
    }
    return u;
}

double DirichletSolver::evaluate(const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                                 const Point& x) const {
    const Domain& dom = kernel_->domain();
    dom.require_interior(x, "evaluate");
    double v = 0.0;
    for (const auto& a : mu.atoms) {
        if (same_point(a.location, x, dom.dim()))
            throw numeric_input_error("evaluate: point coincides with an interior atom");
        v += a.weight * kernel_->green(x, a.location);
    }
    if (mu.density) {
        const Grid& g = mu.density->grid();
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (same_point(g.nodes()[j], x, dom.dim())) continue;
            v += g.weights()[j] * (*mu.density)[j] * kernel_->green(x, g.nodes()[j]);
        }
    }
    for (const auto& a : zeta.atoms) v += a.weight * kernel_->poisson(x, a.location);
    if (zeta.has_density())
        for (const auto& [z, w] : bq_) v += w * zeta.density(z) * kernel_->poisson(x, z);
    return v;
}

double DirichletSolver::weak_residual(const std::function<double(const Point&)>& u_eval,
                                      const InteriorMeasure& mu, const BoundaryMeasure& zeta,
                                      const Point& bump_center, double bump_radius) const {
    const Domain& dom = kernel_->domain();
    const double s = kernel_->s();
    SpectralField f = project(dom, bump_function(dom, bump_center, bump_radius));
    SpectralField psi = f.apply_power(-s);

    // term1 = int u * (-L)^s psi, with (-L)^s psi reconstructed spectrally.
    double term1 = 0.0;
    if (dom.kind() == DomainKind::interval) {
        std::vector<double> sing{0.0, dom.length(0)};
        for (const auto& a : mu.atoms) sing.push_back(a.location.x);
        sing.push_back(bump_center.x - bump_radius);
        sing.push_back(bump_center.x + bump_radius);
        std::erase_if(sing, [&](double v) { return v < 0.0 || v > dom.length(0); });
        term1 = integrate_singular(
            [&](double x) { return u_eval({x, 0.0}) * f.eval({x, 0.0}); }, 0.0, dom.length(0),
            sing, 8, 0.35, 1e-10);
    } else {
        std::vector<double> sx{0.0, dom.length(0)}, sy{0.0, dom.length(1)};
        for (const auto& a : mu.atoms) {
            sx.push_back(a.location.x);
            sy.push_back(a.location.y);
        }
        auto qx = singular_quadrature(0.0, dom.length(0), sx, 6, 0.4, 1e-6);
        auto qy = singular_quadrature(0.0, dom.length(1), sy, 6, 0.4, 1e-6);
        for (const auto& [px, wx] : qx)
            for (const auto& [py, wy] : qy)
                term1 += wx * wy * u_eval({px, py}) * f.eval({px, py});
    }

    // term2 = int psi dmu.
    double term2 = 0.0;
    for (const auto& a : mu.atoms) term2 += a.weight * psi.eval(a.location);
    if (mu.density) {
        const Grid& g = mu.density->grid();
        for (std::size_t j = 0; j < g.size(); ++j)
            term2 += g.weights()[j] * (*mu.density)[j] * psi.eval(g.nodes()[j]);
    }

    // term3 = int (dpsi/dnu) dzeta, with -dpsi/dnu(z) = int P^s(y,z)(-L)^s psi(y) dy.
    auto minus_normal = [&](const BoundaryPoint& z) {
        if (dom.kind() == DomainKind::interval) {
            return integrate_singular(
                [&](double y) { return kernel_->poisson({y, 0.0}, z) * f.eval({y, 0.0}); }, 0.0,
                dom.length(0), std::vector<double>{0.0, dom.length(0)}, 8, 0.35, 1e-10);
        }
        Point zc = dom.boundary_coords(z);
        std::vector<double> sx{0.0, dom.length(0), zc.x}, sy{0.0, dom.length(1), zc.y};
        std::erase_if(sx, [&](double v) { return v < 0.0 || v > dom.length(0); });
        std::erase_if(sy, [&](double v) { return v < 0.0 || v > dom.length(1); });
        double acc = 0.0;
        auto qx = singular_quadrature(0.0, dom.length(0), sx, 6, 0.4, 1e-6);
        auto qy = singular_quadrature(0.0, dom.length(1), sy, 6, 0.4, 1e-6);
        for (const auto& [px, wx] : qx)
            for (const auto& [py, wy] : qy)
                acc += wx * wy * kernel_->poisson({px, py}, z) * f.eval({px, py});
        return acc;
    };
    double term3 = 0.0;
    for (const auto& a : zeta.atoms) term3 += a.weight * -minus_normal(a.location);
    if (zeta.has_density())
        for (const auto& [z, w] : bq_) term3 += w * zeta.density(z) * -minus_normal(z);

    return term1 - term2 + term3;
}

double DirichletSolver::boundary_trace(const std::function<double(const Point&)>& u_eval,
                                       const std::function<double(const BoundaryPoint&)>& phi,
                                       double t) const {
    const Domain& dom = kernel_->domain();
    double dmin = 1e-4 * dom.diameter();
    if (!(t > 4.0 * dmin && t <= dom.diameter() / 8.0))
        throw numeric_input_error("boundary_trace: t outside (4 delta_min, diam/8]");
    if (dom.kind() == DomainKind::interval) {
        double L = dom.length(0);
        auto strip = [&](int face) {
            BoundaryPoint z{face, 0.0};
            double pv = phi(z);
            auto f = [&](double d) {
                Point x{face == 0 ? d : L - d, 0.0};
                return u_eval(x) / kernel_->h1(x) * pv;
            };
            return integrate_singular(f, 0.0, t, std::vector<double>{0.0}, 6, 0.3, 1e-8);
        };
        return (strip(0) + strip(1)) / t;
    }
    // Rectangle: per-face strips of width t, corner squares (counted twice by
    // the face strips) removed once.
    double Lx = dom.length(0), Ly = dom.length(1);
    double total = 0.0;
    auto integrand = [&](const Point& x, const BoundaryPoint& z) {
        return u_eval(x) / kernel_->h1(x) * phi(z);
    };
    auto face_strip = [&](int face) {
        double Lf = dom.face_length(face);
        auto qt = singular_quadrature(0.0, t, std::vector<double>{0.0}, 6, 0.3, 1e-8);
        auto qp = singular_quadrature(0.0, Lf, std::vector<double>{0.0, Lf}, 4, 0.5, 1e-5);
        double acc = 0.0;
        for (const auto& [d, wd] : qt)
            for (const auto& [p, wp] : qp) {
                BoundaryPoint z{face, p};
                Point x;
                switch (face) {
                    case 0: x = {p, d}; break;
                    case 1: x = {p, Ly - d}; break;
                    case 2: x = {d, p}; break;
                    default: x = {Lx - d, p}; break;
                }
                acc += wd * wp * integrand(x, z);
            }
        return acc;
    };
    for (int face = 0; face < 4; ++face) total += face_strip(face);
    // Corner squares [0,t]^2: delta = min of the two coordinates; charge phi
    // at the nearest face point, splitting evenly on the diagonal.
    auto corner = [&](double cx, double cy, int fx, int fy) {
        auto q = singular_quadrature(0.0, t, std::vector<double>{0.0}, 4, 0.4, 1e-6);
        double acc = 0.0;
        for (const auto& [a, wa] : q)
            for (const auto& [b, wb] : q) {
                Point x{cx == 0.0 ? a : Lx - a, cy == 0.0 ? b : Ly - b};
                BoundaryPoint z = a < b ? BoundaryPoint{fx, x.y} : BoundaryPoint{fy, x.x};
                acc += wa * wb * integrand(x, z);
            }
        return acc;
    };
    total -= corner(0.0, 0.0, 2, 0);
    total -= corner(Lx, 0.0, 3, 0);
    total -= corner(0.0, Ly, 2, 1);
    total -= corner(Lx, Ly, 3, 1);
    return total / t;
}

double DirichletSolver::extrapolated_trace(const std::function<double(const Point&)>& u_eval,
                                           const std::function<double(const BoundaryPoint&)>& phi,
                                           double t) const {
    double t1 = boundary_trace(u_eval, phi, t);
    double t2 = boundary_trace(u_eval, phi, 0.5 * t);
    double t3 = boundary_trace(u_eval, phi, 0.25 * t);
    double r1 = 2.0 * t2 - t1;
    double r2 = 2.0 * t3 - t2;
    return (4.0 * r2 - r1) / 3.0;
}

double DirichletSolver::lp_integral(double p, const Point& y) const {
    const Domain& dom = kernel_->domain();
    dom.require_interior(y, "lp_integral");
    if (!(p >= 1.0)) throw invalid_configuration("lp_integral: p must be >= 1");
    double dy = dom.delta(y);
    if (dom.kind() == DomainKind::interval) {
        double L = dom.length(0);
        return integrate_singular(
            [&](double x) {
                return std::pow(kernel_->green({x, 0.0}, y) / dy, p) * dom.delta({x, 0.0});
            },
            0.0, L, std::vector<double>{0.0, y.x, L}, 8, 0.3, 1e-10);
    }
    std::vector<double> sx{0.0, dom.length(0), y.x}, sy{0.0, dom.length(1), y.y};
    auto qx = singular_quadrature(0.0, dom.length(0), sx, 5, 0.35, 1e-6);
    auto qy = singular_quadrature(0.0, dom.length(1), sy, 5, 0.35, 1e-6);
    double acc = 0.0;
    for (const auto& [px, wx] : qx)
        for (const auto& [py, wy] : qy) {
            Point x{px, py};
            acc += wx * wy * std::pow(kernel_->green(x, y) / dy, p) * dom.delta(x);
        }
    return acc;
}

double DirichletSolver::lp_threshold_scan(double p, const std::vector<Point>& probes) const {
    double sup = 0.0;
    for (const auto& y : probes) sup = std::max(sup, lp_integral(p, y));
    return sup;
}

} // namespace speclap
