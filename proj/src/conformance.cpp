#include "speclap/conformance.hpp"

#include <algorithm>
#include <cmath>

#include "speclap/csv.hpp"
#include "speclap/semilinear.hpp"

namespace speclap {

namespace {

Point random_interior(const Domain& dom, double margin, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(margin, dom.length(0) - margin);
    Point p{ux(rng), 0.0};
    if (dom.kind() == DomainKind::rectangle) {
        std::uniform_real_distribution<double> uy(margin, dom.length(1) - margin);
        p.y = uy(rng);
    }
    return p;
}

double integrate_domain(const Domain& dom, const std::function<double(const Point&)>& f,
                        const std::vector<double>& sing_x, const std::vector<double>& sing_y) {
    auto clip = [](std::vector<double> v, double L) {
        std::erase_if(v, [L](double t) { return t < 0.0 || t > L; });
        return v;
    };
    if (dom.kind() == DomainKind::interval) {
        auto sx = clip(sing_x, dom.length(0));
        sx.push_back(0.0);
        sx.push_back(dom.length(0));
        return integrate_singular([&](double x) { return f({x, 0.0}); }, 0.0, dom.length(0), sx,
                                  7, 0.3, 1e-9);
    }
    auto sx = clip(sing_x, dom.length(0));
    auto sy = clip(sing_y, dom.length(1));
    sx.push_back(0.0);
    sx.push_back(dom.length(0));
    sy.push_back(0.0);
    sy.push_back(dom.length(1));
    // Coarse tensor rule: the 2D integrands have at worst log-type
    // singularities and the consumers only test to 1e-3 relative.
    auto qx = singular_quadrature(0.0, dom.length(0), sx, 5, 0.2, 1e-5);
    auto qy = singular_quadrature(0.0, dom.length(1), sy, 5, 0.2, 1e-5);
    double acc = 0.0;
    for (const auto& [px, wx] : qx)
        for (const auto& [py, wy] : qy) acc += wx * wy * f({px, py});
    return acc;
}

struct Window {
    double lo{0.0}, hi{0.0};
    bool started{false};
    void absorb(double v) {
        if (!started) {
            lo = hi = v;
            started = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    double span() const { return hi - lo; }
};

/// Two-phase window check: base probe set, then doubled; pass iff the window
/// stays finite and grows by less than 10% when the lattice is refined.
ConformanceCheck window_check(const std::string& name, const std::string& anchor, int base_probes,
                              const std::function<double(std::mt19937_64&)>& ratio,
                              std::mt19937_64& rng) {
    ConformanceCheck c;
    c.name = name;
    c.anchor = anchor;
    Window base;
    for (int i = 0; i < base_probes; ++i) base.absorb(ratio(rng));
    Window refined = base;
    for (int i = 0; i < base_probes; ++i) refined.absorb(ratio(rng));
    c.probes = static_cast<std::size_t>(2 * base_probes);
    double growth = base.span() > 0.0 ? (refined.span() - base.span()) / base.span()
                                      : refined.span();
    c.max_violation = growth;
    c.window_lo = refined.lo;
    c.window_hi = refined.hi;
    c.pass = std::isfinite(refined.lo) && std::isfinite(refined.hi) && refined.lo > 0.0 &&
             growth < 0.10;
    return c;
}

} // namespace

ConformanceCheck verify_composition(const Domain& dom, double s, int pairs,
                                    std::mt19937_64& rng) {
    ConformanceCheck c;
    c.name = "green-composition";
    c.anchor = "G^(1-s) o G^s = G^1";
    KernelEvaluator ks(dom, s), kc(dom, 1.0 - s), k1(dom, 1.0);
    double margin = std::max(0.1, 0.05 * dom.diameter());
    Window w;
    for (int i = 0; i < pairs; ++i) {
        Point x = random_interior(dom, margin, rng);
        Point y = random_interior(dom, margin, rng);
        double dx = std::hypot(x.x - y.x, dom.dim() == 2 ? x.y - y.y : 0.0);
        if (dx < 0.05 * dom.diameter()) {
            --i;
            continue;
        }
        double lhs = integrate_domain(
            dom, [&](const Point& xi) { return kc.green(x, xi) * ks.green(xi, y); },
            {x.x, y.x}, {x.y, y.y});
        double rhs = k1.green(x, y);
        double rel = std::abs(lhs - rhs) / std::abs(rhs);
        c.max_violation = std::max(c.max_violation, rel);
        w.absorb(lhs / rhs);
        ++c.probes;
    }
    c.window_lo = w.lo;
    c.window_hi = w.hi;
    c.pass = c.probes > 0 && c.max_violation <= 1e-3;
    return c;
}

ConformanceCheck verify_pois_id(const Domain& dom, double s, int probes, std::mt19937_64& rng) {
    ConformanceCheck c;
    c.name = "poisson-composition";
    c.anchor = "G^(1-s) o P^s = P^1";
    KernelEvaluator ks(dom, s), kc(dom, 1.0 - s), k1(dom, 1.0);
    double margin = std::max(0.1, 0.05 * dom.diameter());
    std::uniform_int_distribution<int> face(0, dom.face_count() - 1);
    Window w;
    for (int i = 0; i < probes; ++i) {
        Point x = random_interior(dom, margin, rng);
        BoundaryPoint z{face(rng), 0.0};
        if (dom.kind() == DomainKind::rectangle) {
            std::uniform_real_distribution<double> up(0.1 * dom.face_length(z.face),
                                                      0.9 * dom.face_length(z.face));
            z.param = up(rng);
        }
        Point zc = dom.boundary_coords(z);
        double lhs = integrate_domain(
            dom, [&](const Point& xi) { return kc.green(x, xi) * ks.poisson(xi, z); },
            {x.x, zc.x}, {x.y, zc.y});
        double rhs = k1.poisson(x, z);
        double rel = std::abs(lhs - rhs) / std::abs(rhs);
        c.max_violation = std::max(c.max_violation, rel);
        w.absorb(lhs / rhs);
        ++c.probes;
    }
    c.window_lo = w.lo;
    c.window_hi = w.hi;
    c.pass = c.probes > 0 && c.max_violation <= 1e-3;
    return c;
}

ConformanceCheck verify_operator_agreement(const Domain& dom, double s, std::mt19937_64& rng) {
    ConformanceCheck c;
    c.name = "operator-representations";
    c.anchor = "spectral = principal-value = semigroup";
    KernelEvaluator k(dom, s);
    const double L0 = dom.length(0);
    const double cy = dom.kind() == DomainKind::rectangle ? dom.length(1) : 0.0;
    struct BumpSpec {
        double cx, cyf, r;
        BumpShape shape;
    };
    // On the rectangle the exponential profile needs far more modes than the
    // tensor truncation affords before its fractional power is trustworthy;
    // the polynomial profile reaches quadrature accuracy at moderate
    // truncation, so 2D sticks to it.
    const bool flat = dom.kind() == DomainKind::interval;
    const BumpSpec bumps[5] = {{0.50, 0.50, 0.30, BumpShape::poly},
                               {0.35, 0.45, 0.25, flat ? BumpShape::cinf : BumpShape::poly},
                               {0.65, 0.55, 0.20, BumpShape::poly},
                               {0.45, 0.60, 0.33, flat ? BumpShape::cinf : BumpShape::poly},
                               {0.55, 0.40, 0.15, BumpShape::poly}};
    double probe_margin = 0.2 / 3.14159265358979323846 * dom.diameter();
    // The principal-value route costs seconds per 2D evaluation; keep the
    // five-bump family but thin the probes on the rectangle.
    const int probes_per_bump = dom.kind() == DomainKind::interval ? 7 : 2;
    for (const auto& b : bumps) {
        Point center{b.cx * L0, b.cyf * cy};
        double radius = b.r * std::min(L0, cy > 0.0 ? cy : L0);
        auto f = bump_function(dom, center, radius, b.shape);
        auto g = bump_gradient(dom, center, radius, b.shape);
        SpectralField field = project(dom, f);
        SpectralField powered = field.apply_power(s);
        double sup = 0.0;
        // The center probe pins the scale; without it every random probe can
        // land outside the bump support, where all three routes are tiny and
        // relative spread is meaningless.
        std::vector<Point> probes{center};
        for (int i = 0; i < probes_per_bump; ++i)
            probes.push_back(random_interior(dom, probe_margin, rng));
        std::vector<double> r1(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) {
            r1[i] = powered.eval(probes[i]);
            sup = std::max(sup, std::abs(r1[i]));
        }
        for (std::size_t i = 0; i < probes.size(); ++i) {
            double r2 = k.apply_pointwise({f, g}, probes[i]);
            double r3 = k.apply_semigroup(field, probes[i]);
            double scale = std::max({std::abs(r1[i]), std::abs(r2), std::abs(r3)});
            // Probes where all routes are near zero compare quadrature noise
            // against truncation noise; relative spread is undefined there.
            if (scale < 1e-2 * sup) continue;
            double spread =
                (std::max({r1[i], r2, r3}) - std::min({r1[i], r2, r3})) / scale;
            c.max_violation = std::max(c.max_violation, spread);
            ++c.probes;
        }
    }
    c.pass = c.probes > 0 && c.max_violation <= 1e-3;
    return c;
}

std::vector<ConformanceCheck> verify_bounds(const Domain& dom, double s, std::mt19937_64& rng) {
    std::vector<ConformanceCheck> out;
    KernelEvaluator k(dom, s);
    const HeatKernel& heat = k.heat();
    const double diam = dom.diameter();
    const double N = dom.dim();
    const double eps = 1e-3 * diam;

    double ts = heat.switch_time(0);
    if (dom.kind() == DomainKind::rectangle) ts = std::max(ts, heat.switch_time(1));

    out.push_back(window_check(
        "heat-kernel-envelope", "p_t(x,y) vs min(1, d(x)d(y)/t) t^(-N/2) exp(-|x-y|^2/(4t))",
        600,
        [&](std::mt19937_64& r) {
            std::uniform_real_distribution<double> ut(std::log(1e-2 * ts), std::log(ts));
            double t = std::exp(ut(r));
            Point x = random_interior(dom, eps, r);
            Point y;
            // Keep the Gaussian factor honest: |x-y|^2 <= 8 t.
            do {
                y = random_interior(dom, eps, r);
            } while (std::hypot(x.x - y.x, N == 2 ? x.y - y.y : 0.0) > std::sqrt(8.0 * t));
            double r2 = std::pow(x.x - y.x, 2) + (N == 2 ? std::pow(x.y - y.y, 2) : 0.0);
            double env = std::min(1.0, dom.delta(x) * dom.delta(y) / t) *
                         std::pow(t, -0.5 * N) * std::exp(-r2 / (4.0 * t));
            return heat.value(t, x, y) / env;
        },
        rng));

    if (s < 1.0) {
        out.push_back(window_check(
            "jump-kernel-envelope", "J(x,y) |x-y|^(N+2s) vs min(1, d(x)d(y)/|x-y|^2)", 150,
            [&](std::mt19937_64& r) {
                Point x = random_interior(dom, eps, r);
                Point y;
                double d2;
                do {
                    y = random_interior(dom, eps, r);
                    d2 = std::pow(x.x - y.x, 2) + (N == 2 ? std::pow(x.y - y.y, 2) : 0.0);
                } while (d2 < 1e-8 * diam * diam);
                double env = std::min(1.0, dom.delta(x) * dom.delta(y) / d2);
                return k.jumping(x, y) * std::pow(d2, 0.5 * (N + 2.0 * s)) / env;
            },
            rng));
    }

    // Rectangle corners fall outside the smooth-boundary hypotheses of the
    // Poisson estimate; exclude a neighborhood of each corner.
    auto corner_clear = [&](const Point& x) {
        if (dom.kind() == DomainKind::interval) return true;
        double r = 0.05 * diam;
        for (double cx : {0.0, dom.length(0)})
            for (double cy : {0.0, dom.length(1)})
                if (std::hypot(x.x - cx, x.y - cy) < r) return false;
        return true;
    };
    out.push_back(window_check(
        "poisson-kernel-envelope", "P^s(x,z) |x-z|^(N+2-2s) / d(x)", 500,
        [&](std::mt19937_64& r) {
            Point x;
            do {
                x = random_interior(dom, eps, r);
            } while (!corner_clear(x));
            std::uniform_int_distribution<int> face(0, dom.face_count() - 1);
            BoundaryPoint z{face(r), 0.0};
            if (dom.kind() == DomainKind::rectangle) {
                double lo = 0.05 * diam, hi = dom.face_length(z.face) - 0.05 * diam;
                std::uniform_real_distribution<double> up(lo, hi);
                z.param = up(r);
            }
            Point zc = dom.boundary_coords(z);
            double d = std::hypot(x.x - zc.x, N == 2 ? x.y - zc.y : 0.0);
            return k.poisson(x, z) * std::pow(d, N + 2.0 - 2.0 * s) / dom.delta(x);
        },
        rng));

    out.push_back(window_check(
        "green-envelope", "G^s(x,y) vs |x-y|^(2s-N) (dd'/(dd'+|x-y|^2))^s", 150,
        [&](std::mt19937_64& r) {
            Point x = random_interior(dom, eps, r);
            Point y;
            double d;
            do {
                y = random_interior(dom, eps, r);
                d = std::hypot(x.x - y.x, N == 2 ? x.y - y.y : 0.0);
            } while (d < 0.05 * diam);
            double dd = dom.delta(x) * dom.delta(y);
            double env = std::pow(d, 2.0 * s - N) * std::pow(dd / (dd + d * d), s);
            return k.green(x, y) / env;
        },
        rng));

    if (s < 1.0) {
        out.push_back(window_check(
            "boundary-weight-rate", "h1(x) d(x)^(2-2s) window on d in [1e-3, 1e-1]", 60,
            [&](std::mt19937_64& r) {
                std::uniform_real_distribution<double> ud(std::log(1e-3), std::log(1e-1));
                double d = std::exp(ud(r));
                Point x{d, 0.0};
                if (dom.kind() == DomainKind::rectangle) x.y = 0.5 * dom.length(1);
                // Alternate between the two ends of the first axis.
                if (std::uniform_int_distribution<int>(0, 1)(r)) x.x = dom.length(0) - d;
                return k.h1(x) * std::pow(d, 2.0 - 2.0 * s);
            },
            rng));
    }
    return out;
}

std::vector<ConformanceCheck> verify_max_principles(const DirichletSolver& solver, int trials,
                                                    std::mt19937_64& rng) {
    std::vector<ConformanceCheck> out;
    const Domain& dom = solver.grid().domain();
    double margin = 0.02 * dom.diameter();
    std::uniform_real_distribution<double> uw(0.1, 2.0);
    std::uniform_int_distribution<int> natoms(1, 3);
    std::uniform_int_distribution<int> coin(0, 1);

    ConformanceCheck pos;
    pos.name = "nonnegativity-preservation";
    pos.anchor = "nonnegative data give nonnegative solutions";
    // Constant boundary data only rescale one extension; solve it once.
    BoundaryMeasure unit;
    unit.density = [](const BoundaryPoint&) { return 1.0; };
    GridFunction ext = solver.poisson_extension(unit);
    for (int t = 0; t < trials; ++t) {
        double mn = 0.0;
        if (coin(rng)) {
            InteriorMeasure mu;
            int na = natoms(rng);
            for (int a = 0; a < na; ++a)
                mu.atoms.push_back({random_interior(dom, margin, rng), uw(rng)});
            GridFunction u = solver.solve(mu, {});
            for (std::size_t i = 0; i < u.size(); ++i) mn = std::min(mn, u[i]);
        } else {
            double amp = uw(rng);
            for (std::size_t i = 0; i < ext.size(); ++i) mn = std::min(mn, amp * ext[i]);
        }
        pos.max_violation = std::max(pos.max_violation, -mn);
        ++pos.probes;
    }
    pos.pass = pos.probes > 0 && pos.max_violation <= 1e-10;
    out.push_back(pos);

    ConformanceCheck inv;
    inv.name = "negativity-inversion";
    inv.anchor = "a negative atom forces a negative solution";
    {
        InteriorMeasure mu;
        mu.atoms.push_back({random_interior(dom, margin, rng), -1.0});
        GridFunction u = solver.solve(mu, {});
        double mn = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) mn = std::min(mn, u[i]);
        inv.probes = 1;
        inv.max_violation = std::max(0.0, mn + 1e-6); // must be clearly negative
        inv.window_lo = inv.window_hi = mn;
        inv.pass = mn < -1e-6;
    }
    out.push_back(inv);
    return out;
}

std::vector<ConformanceCheck> verify_harmonicity_and_traces(const DirichletSolver& solver,
                                                            std::mt19937_64& rng) {
    std::vector<ConformanceCheck> out;
    const Domain& dom = solver.grid().domain();
    const KernelEvaluator& k = solver.kernel();
    const double L0 = dom.length(0);

    ConformanceCheck harm;
    harm.name = "harmonic-extension";
    harm.anchor = "weak residual of the Poisson kernel vanishes";
    {
        // Mid-face on the rectangle: param 0 would be a corner, where the
        // Poisson kernel degenerates and the check passes vacuously.
        BoundaryPoint z0{0, dom.kind() == DomainKind::rectangle ? 0.5 * dom.face_length(0) : 0.0};
        BoundaryMeasure zeta;
        zeta.atoms.push_back({z0, 1.0});
        auto u_eval = [&](const Point& p) { return k.poisson(p, z0); };
        std::uniform_real_distribution<double> uc(0.3, 0.7), ur(0.15, 0.3);
        const int bumps = dom.kind() == DomainKind::interval ? 5 : 3;
        for (int b = 0; b < bumps; ++b) {
            Point center{uc(rng) * L0, dom.kind() == DomainKind::rectangle
                                           ? uc(rng) * dom.length(1)
                                           : 0.0};
            double radius = ur(rng) * L0;
            double res = solver.weak_residual(u_eval, {}, zeta, center, radius);
            harm.max_violation = std::max(harm.max_violation, std::abs(res));
            ++harm.probes;
        }
        harm.pass = harm.max_violation <= 1e-3;
    }
    out.push_back(harm);

    ConformanceCheck tb;
    tb.name = "weighted-boundary-trace";
    tb.anchor = "strip average of u/h1 recovers the boundary datum";
    {
        // The extension of the unit boundary density is h1 itself, which is
        // directly evaluable; on the rectangle this avoids a full boundary
        // quadrature at every strip point.
        BoundaryMeasure zeta;
        zeta.density = [](const BoundaryPoint&) { return 1.0; };
        std::function<double(const Point&)> u_eval;
        if (dom.kind() == DomainKind::interval)
            u_eval = [&](const Point& p) { return solver.evaluate({}, zeta, p); };
        else
            u_eval = [&](const Point& p) { return k.h1(p); };
        auto phi = [](const BoundaryPoint&) { return 1.0; };
        double tr = solver.extrapolated_trace(u_eval, phi, dom.diameter() / 16.0);
        double target = boundary_variation(dom, zeta);
        tb.probes = 1;
        tb.max_violation = std::abs(tr - target);
        tb.window_lo = tb.window_hi = tr;
        tb.pass = tb.max_violation <= 0.01 * std::max(1.0, target);
    }
    out.push_back(tb);

    ConformanceCheck tg;
    tg.name = "green-potential-trace";
    tg.anchor = "Green potentials have zero weighted boundary trace";
    {
        InteriorMeasure mu;
        mu.atoms.push_back({random_interior(dom, 0.25 * dom.diameter(), rng), 1.0});
        auto u_eval = [&](const Point& p) { return solver.evaluate(mu, {}, p); };
        auto phi = [](const BoundaryPoint&) { return 1.0; };
        double tr = solver.extrapolated_trace(u_eval, phi, dom.diameter() / 16.0);
        tg.probes = 1;
        tg.max_violation = std::abs(tr);
        tg.window_lo = tg.window_hi = tr;
        tg.pass = tg.max_violation <= 0.01;
    }
    out.push_back(tg);
    return out;
}

bool ConformanceReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

std::string ConformanceReport::to_csv() const {
    CsvWriter w("conformance-suite",
                {"check", "anchor", "probes", "max_violation", "window_lo", "window_hi", "pass"});
    w.add_comment("s: " + CsvWriter::format_number(s));
    w.add_comment("seed: " + std::to_string(seed));
    for (const auto& c : checks)
        w.add_text_row({c.name, c.anchor, std::to_string(c.probes),
                        CsvWriter::format_number(c.max_violation),
                        CsvWriter::format_number(c.window_lo),
                        CsvWriter::format_number(c.window_hi), c.pass ? "1" : "0"});
    return w.to_string();
}

ConformanceReport run_conformance(const Domain& dom, double s, std::uint64_t seed) {
    ConformanceReport rep;
    rep.s = s;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    const bool flat = dom.kind() == DomainKind::interval;
    if (s < 1.0) {
        rep.checks.push_back(verify_composition(dom, s, flat ? 50 : 8, rng));
        rep.checks.push_back(verify_pois_id(dom, s, flat ? 30 : 8, rng));
        rep.checks.push_back(verify_operator_agreement(dom, s, rng));
    }
    for (auto& c : verify_bounds(dom, s, rng)) rep.checks.push_back(std::move(c));
    auto kernel = std::make_shared<KernelEvaluator>(dom, s);
    auto grid = std::make_shared<Grid>(dom, flat ? 96 : 32);
    DirichletSolver solver(kernel, grid);
    for (auto& c : verify_max_principles(solver, 50, rng)) rep.checks.push_back(std::move(c));
    if (s < 1.0)
        for (auto& c : verify_harmonicity_and_traces(solver, rng))
            rep.checks.push_back(std::move(c));
    return rep;
}

} // namespace speclap
