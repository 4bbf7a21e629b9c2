#include "speclap/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace speclap {

namespace {

constexpr double kTailThreshold = 42.0; // drop tail modes with lambda*T above this

inline double sq(double v) { return v * v; }

double dist2(const Point& a, const Point& b, int dim) {
    double d = sq(a.x - b.x);
    if (dim == 2) d += sq(a.y - b.y);
    return d;
}

// Spectral coefficient of the constant 1 for per-axis frequency j.
double one_coeff_axis(double L, int j) {
    if (j % 2 == 0) return 0.0;
    return std::sqrt(2.0 / L) * 2.0 * L / (j * M_PI);
}

} // namespace

KernelEvaluator::KernelEvaluator(const Domain& domain, double s, QuadraturePlan plan)
    : dom_(domain), s_(s), heat_(domain), plan_(plan) {
    // s = 1 is admitted as the classical reference operator for the Green
    // and Poisson kernels; the PV-form kernels additionally require s < 1.
    if (!(s > 0.0 && s <= 1.0))
        throw invalid_configuration("KernelEvaluator: s must lie in (0,1]");
    if (plan_.near_nodes < 8 || plan_.mid_nodes < 8 || plan_.tail_cut < 1.0)
        throw invalid_configuration("KernelEvaluator: bad quadrature plan");
    gamma_s_ = std::tgamma(s);
    gamma_1ms_ = s < 1.0 ? std::tgamma(1.0 - s) : 0.0;
}

double KernelEvaluator::tail_T(double t0) const {
    double tsw = heat_.switch_time(0);
    if (dom_.dim() == 2) tsw = std::max(tsw, heat_.switch_time(1));
    return std::max(tsw, plan_.tail_cut * t0);
}

double KernelEvaluator::time_integral(double t0, double power,
                                      const std::function<double(double)>& f, double T) const {
    // Near field (0, t0]: t = t0 * tau, plain Gauss; the integrand vanishes
    // to all orders at tau = 0 through the heat-kernel decay.
    double total = 0.0;
    {
        const GaussRule& g = gauss_legendre(plan_.near_nodes);
        for (int i = 0; i < plan_.near_nodes; ++i) {
            double tau = 0.5 * (g.nodes[i] + 1.0);
            double t = t0 * tau;
            if (t <= 0.0) continue;
            double fv = f(t);
            if (fv != 0.0) total += 0.5 * g.weights[i] * t0 * fv * std::pow(t, power);
        }
    }
    // Mid field (t0, T]: Gauss in log t.
    {
        const GaussRule& g = gauss_legendre(plan_.mid_nodes);
        double ua = std::log(t0), ub = std::log(T);
        double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
        for (int i = 0; i < plan_.mid_nodes; ++i) {
            double t = std::exp(mid + half * g.nodes[i]);
            total += half * g.weights[i] * f(t) * std::pow(t, power + 1.0);
        }
    }
    return total;
}

double KernelEvaluator::green(const Point& x, const Point& y) const {
    dom_.require_interior(x, "green");
    dom_.require_interior(y, "green");
    double t0 = dist2(x, y, dom_.dim());
    if (!(t0 > 0.0)) throw numeric_input_error("green: x and y must be distinct");
    double T = tail_T(t0);
    double body = time_integral(
        t0, s_ - 1.0, [&](double t) { return heat_.value(t, x, y); }, T);
    // Tail: termwise int_T^inf e^{-lambda t} t^{s-1} dt = lambda^{-s} Gamma(s, lambda T).
    double tail = 0.0;
    const int Tn = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        for (int j = 1; j <= Tn; ++j) {
            double lam = sq(j * M_PI / dom_.length(0));
            if (lam * T > kTailThreshold) break;
            std::size_t m = j - 1;
            tail += dom_.eigenfunction(m, x) * dom_.eigenfunction(m, y) *
                    std::pow(lam, -s_) * upper_gamma(s_, lam * T);
        }
    } else {
        for (int j = 1; j <= Tn; ++j) {
            double lx = sq(j * M_PI / dom_.length(0));
            if ((lx + sq(M_PI / dom_.length(1))) * T > kTailThreshold) break;
            for (int k = 1; k <= Tn; ++k) {
                double lam = lx + sq(k * M_PI / dom_.length(1));
                if (lam * T > kTailThreshold) break;
                std::size_t m = static_cast<std::size_t>(j - 1) * Tn + (k - 1);
                tail += dom_.eigenfunction(m, x) * dom_.eigenfunction(m, y) *
                        std::pow(lam, -s_) * upper_gamma(s_, lam * T);
            }
        }
    }
    return (body + tail) / gamma_s_;
}

double KernelEvaluator::poisson(const Point& x, const BoundaryPoint& z) const {
    dom_.require_interior(x, "poisson");
    Point zc = dom_.boundary_coords(z);
    double t0 = dist2(x, zc, dom_.dim());
    double T = tail_T(t0);
    double body = time_integral(
        t0, s_ - 1.0, [&](double t) { return heat_.boundary_normal_derivative(t, x, z); }, T);
    double tail = 0.0;
    for (std::size_t m = 0; m < dom_.mode_count(); ++m) {
        double lam = dom_.eigenvalue(m);
        if (lam * T > kTailThreshold) {
            if (dom_.kind() == DomainKind::interval) break;
            continue;
        }
        tail += dom_.eigenfunction(m, x) * dom_.eigen_normal_derivative(m, z) *
                std::pow(lam, -s_) * upper_gamma(s_, lam * T);
    }
    return (body + tail) / gamma_s_;
}

double KernelEvaluator::jumping(const Point& x, const Point& y) const {
    if (s_ >= 1.0) throw invalid_configuration("operation requires s in (0,1)");
    dom_.require_interior(x, "jumping");
    dom_.require_interior(y, "jumping");
    double t0 = dist2(x, y, dom_.dim());
    if (!(t0 > 0.0)) throw numeric_input_error("jumping: x and y must be distinct");
    double T = tail_T(t0);
    double body = time_integral(
        t0, -1.0 - s_, [&](double t) { return heat_.value(t, x, y); }, T);
    double tail = 0.0;
    const int Tn = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        for (int j = 1; j <= Tn; ++j) {
            double lam = sq(j * M_PI / dom_.length(0));
            if (lam * T > kTailThreshold) break;
            std::size_t m = j - 1;
            tail += dom_.eigenfunction(m, x) * dom_.eigenfunction(m, y) *
                    std::pow(lam, s_) * upper_gamma(-s_, lam * T);
        }
    } else {
        for (int j = 1; j <= Tn; ++j) {
            double lx = sq(j * M_PI / dom_.length(0));
            if ((lx + sq(M_PI / dom_.length(1))) * T > kTailThreshold) break;
            for (int k = 1; k <= Tn; ++k) {
                double lam = lx + sq(k * M_PI / dom_.length(1));
                if (lam * T > kTailThreshold) break;
                std::size_t m = static_cast<std::size_t>(j - 1) * Tn + (k - 1);
                tail += dom_.eigenfunction(m, x) * dom_.eigenfunction(m, y) *
                        std::pow(lam, s_) * upper_gamma(-s_, lam * T);
            }
        }
    }
    return s_ / gamma_1ms_ * (body + tail);
}

double KernelEvaluator::killing(const Point& x) const {
    if (s_ >= 1.0) throw invalid_configuration("operation requires s in (0,1)");
    dom_.require_interior(x, "killing");
    double d = dom_.delta(x);
    double t0 = d * d;
    double T = tail_T(t0);
    double body = time_integral(
        t0, -1.0 - s_, [&](double t) { return 1.0 - heat_.survival(t, x); }, T);
    // Tail: int_T^inf t^{-1-s} dt minus the termwise survival part.
    double tail = std::pow(T, -s_) / s_;
    const int Tn = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        for (int j = 1; j <= Tn; j += 2) {
            double lam = sq(j * M_PI / dom_.length(0));
            if (lam * T > kTailThreshold) break;
            std::size_t m = j - 1;
            tail -= one_coeff_axis(dom_.length(0), j) * dom_.eigenfunction(m, x) *
                    std::pow(lam, s_) * upper_gamma(-s_, lam * T);
        }
    } else {
        for (int j = 1; j <= Tn; j += 2) {
            double lx = sq(j * M_PI / dom_.length(0));
            if ((lx + sq(M_PI / dom_.length(1))) * T > kTailThreshold) break;
            for (int k = 1; k <= Tn; k += 2) {
                double lam = lx + sq(k * M_PI / dom_.length(1));
                if (lam * T > kTailThreshold) break;
                std::size_t m = static_cast<std::size_t>(j - 1) * Tn + (k - 1);
                tail -= one_coeff_axis(dom_.length(0), j) * one_coeff_axis(dom_.length(1), k) *
                        dom_.eigenfunction(m, x) * std::pow(lam, s_) *
                        upper_gamma(-s_, lam * T);
            }
        }
    }
    return s_ / gamma_1ms_ * (body + tail);
}

double KernelEvaluator::h1(const Point& x) const {
    if (s_ >= 1.0) throw invalid_configuration("operation requires s in (0,1)");
    dom_.require_interior(x, "h1");
    // h1(x) = int_boundary P^s(x, z) dsigma(z)
    //       = (1-s)/Gamma(s) * int_0^inf t^{s-2} (1 - S(t, x)) dt,
    // obtained by integrating the exit rate -dS/dt by parts.
    double d = dom_.delta(x);
    double t0 = d * d;
    double T = tail_T(t0);
    double body = time_integral(
        t0, s_ - 2.0, [&](double t) { return 1.0 - heat_.survival(t, x); }, T);
    double tail = std::pow(T, s_ - 1.0) / (1.0 - s_);
    const int Tn = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        for (int j = 1; j <= Tn; j += 2) {
            double lam = sq(j * M_PI / dom_.length(0));
            if (lam * T > kTailThreshold) break;
            std::size_t m = j - 1;
            tail -= one_coeff_axis(dom_.length(0), j) * dom_.eigenfunction(m, x) *
                    std::pow(lam, 1.0 - s_) * upper_gamma(s_ - 1.0, lam * T);
        }
    } else {
        for (int j = 1; j <= Tn; j += 2) {
            double lx = sq(j * M_PI / dom_.length(0));
            if ((lx + sq(M_PI / dom_.length(1))) * T > kTailThreshold) break;
            for (int k = 1; k <= Tn; k += 2) {
                double lam = lx + sq(k * M_PI / dom_.length(1));
                if (lam * T > kTailThreshold) break;
                std::size_t m = static_cast<std::size_t>(j - 1) * Tn + (k - 1);
                tail -= one_coeff_axis(dom_.length(0), j) * one_coeff_axis(dom_.length(1), k) *
                        dom_.eigenfunction(m, x) * std::pow(lam, 1.0 - s_) *
                        upper_gamma(s_ - 1.0, lam * T);
            }
        }
    }
    return (1.0 - s_) / gamma_s_ * (body + tail);
}

double KernelEvaluator::green_one(const Point& x) const {
    dom_.require_interior(x, "green_one");
    // G^s 1(x) = (1/Gamma(s)) int_0^inf t^{s-1} S(t, x) dt. The survival is
    // smooth down to t = 0 (limit 1), so substitute t = T tau^{1/s} to absorb
    // the t^{s-1} weight exactly, then add the termwise spectral tail.
    double T = tail_T(0.0);
    double body = 0.0;
    const GaussRule& g = gauss_legendre(plan_.near_nodes);
    for (int i = 0; i < plan_.near_nodes; ++i) {
        double tau = 0.5 * (g.nodes[i] + 1.0);
        double t = T * std::pow(tau, 1.0 / s_);
        if (t <= 0.0) continue;
        body += 0.5 * g.weights[i] * heat_.survival(t, x);
    }
    body *= std::pow(T, s_) / s_;
    double tail = 0.0;
    const int Tn = dom_.truncation();
    if (dom_.kind() == DomainKind::interval) {
        for (int j = 1; j <= Tn; j += 2) {
            double lam = sq(j * M_PI / dom_.length(0));
            if (lam * T > kTailThreshold) break;
            tail += one_coeff_axis(dom_.length(0), j) * dom_.eigenfunction(j - 1, x) *
                    std::pow(lam, -s_) * upper_gamma(s_, lam * T);
        }
    } else {
        for (int j = 1; j <= Tn; j += 2) {
            double lx = sq(j * M_PI / dom_.length(0));
            if ((lx + sq(M_PI / dom_.length(1))) * T > kTailThreshold) break;
            for (int k = 1; k <= Tn; k += 2) {
                double lam = lx + sq(k * M_PI / dom_.length(1));
                if (lam * T > kTailThreshold) break;
                std::size_t m = static_cast<std::size_t>(j - 1) * Tn + (k - 1);
                tail += one_coeff_axis(dom_.length(0), j) * one_coeff_axis(dom_.length(1), k) *
                        dom_.eigenfunction(m, x) * std::pow(lam, -s_) *
                        upper_gamma(s_, lam * T);
            }
        }
    }
    return (body + tail) / gamma_s_;
}

double KernelEvaluator::apply_pointwise(const PointwiseFn& u, const Point& x) const {
    if (s_ >= 1.0) throw invalid_configuration("operation requires s in (0,1)");
    dom_.require_interior(x, "apply_pointwise");
    const double ux = u.value(x);
    const Point gx = u.gradient(x);
    const double d = dom_.delta(x);

    if (dom_.kind() == DomainKind::interval) {
        const double L = dom_.length(0);
        const double r = std::min(0.5 * d, 0.05 * L);
        const GaussRule& g = gauss_legendre(32);
        double near = 0.0, odd = 0.0;
        // h = r tau^2 concentrates nodes at the singularity; the Taylor-
        // subtracted integrand is O(h^2) J = O(h^{-2s}), integrable.
        for (int i = 0; i < 32; ++i) {
            double tau = 0.5 * (g.nodes[i] + 1.0);
            double w = 0.5 * g.weights[i] * 2.0 * r * tau; // dh = 2 r tau dtau
            double h = r * tau * tau;
            if (h <= 0.0) continue;
            double jp = jumping(x, {x.x + h, 0.0});
            double jm = jumping(x, {x.x - h, 0.0});
            near += w * ((ux - u.value({x.x + h, 0.0}) + gx.x * h) * jp +
                         (ux - u.value({x.x - h, 0.0}) - gx.x * h) * jm);
            // The gradient term was added symmetrically; remove its principal
            // value, which survives only through the asymmetry of J.
            odd += w * gx.x * h * (jm - jp);
        }
        double far = 0.0;
        auto seg = [&](double a, double b) {
            if (b - a < 1e-12 * L) return;
            std::vector<double> sing{a, b};
            double ridge = 0.5 * L;
            if (ridge > a && ridge < b) sing.push_back(ridge);
            far += integrate_singular(
                [&](double y) {
                    // Graded panels can round onto the boundary itself, where
                    // the jump intensity vanishes.
                    if (y <= 0.0 || y >= L) return 0.0;
                    return (ux - u.value({y, 0.0})) * jumping(x, {y, 0.0});
                },
                a, b, sing, 8, 0.35, 1e-12);
        };
        seg(0.0, x.x - r);
        seg(x.x + r, L);
        return near + odd + far + killing(x) * ux;
    }

    // Rectangle: polar integration over the excised square of half-width r,
    // then graded tensor quadrature over the four complementary blocks.
    const double Lx = dom_.length(0), Ly = dom_.length(1);
    const double r = std::min(0.5 * d, 0.05 * std::min(Lx, Ly));
    const int na = 20, nr = 32;
    const GaussRule& gt = gauss_legendre(na);
    const GaussRule& gr = gauss_legendre(nr);
    double near = 0.0, odd = 0.0;
    for (int oct = 0; oct < 4; ++oct) { // paired with oct + 4 for the PV term
        double th0 = oct * M_PI / 4.0, th1 = (oct + 1) * M_PI / 4.0;
        for (int a = 0; a < na; ++a) {
            double th = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * gt.nodes[a];
            double wth = 0.5 * (th1 - th0) * gt.weights[a];
            double c = std::cos(th), sn = std::sin(th);
            double R = r / std::max(std::abs(c), std::abs(sn));
            for (int b = 0; b < nr; ++b) {
                double tau = 0.5 * (gr.nodes[b] + 1.0);
                double rho = R * tau * tau;
                if (rho <= 0.0) continue;
                double wr = 0.5 * gr.weights[b] * 2.0 * R * tau; // drho = 2 R tau dtau
                for (int sign = 0; sign < 2; ++sign) {
                    double cc = sign ? -c : c, ss = sign ? -sn : sn;
                    Point y{x.x + rho * cc, x.y + rho * ss};
                    double jv = jumping(x, y);
                    double lin = gx.x * rho * cc + gx.y * rho * ss;
                    near += wth * wr * rho * (ux - u.value(y) + lin) * jv;
                    odd -= wth * wr * rho * lin * jv;
                }
            }
        }
    }
    double far = 0.0;
    // Capping the panel width keeps smooth structure of u resolved away from
    // the graded corners; the grading alone leaves panels of most of a block.
    const double cap = 0.1 * std::min(Lx, Ly);
    auto block = [&](double ax, double bx, double ay, double by, std::vector<double> sx,
                     std::vector<double> sy) {
        if (bx - ax < 1e-12 * Lx || by - ay < 1e-12 * Ly) return;
        auto qx = singular_quadrature(ax, bx, sx, 4, 0.3, 1e-7, cap);
        auto qy = singular_quadrature(ay, by, sy, 4, 0.3, 1e-7, cap);
        for (const auto& [px, wx] : qx)
            for (const auto& [py, wy] : qy) {
                Point y{px, py};
                if (px <= 0.0 || px >= Lx || py <= 0.0 || py >= Ly) continue;
                far += wx * wy * (ux - u.value(y)) * jumping(x, y);
            }
    };
    // Left and right strips cover the full height; the middle strips cover
    // the remaining rows above and below the excised square.
    block(0.0, x.x - r, 0.0, Ly, {0.0, x.x - r}, {0.0, Ly, x.y});
    block(x.x + r, Lx, 0.0, Ly, {x.x + r, Lx}, {0.0, Ly, x.y});
    block(x.x - r, x.x + r, 0.0, x.y - r, {x.x}, {0.0, x.y - r});
    block(x.x - r, x.x + r, x.y + r, Ly, {x.x}, {x.y + r, Ly});
    return near + odd + far + killing(x) * ux;
}

double KernelEvaluator::apply_pointwise(const GridFunction& u, const Point& x) const {
    const Grid& grid = u.grid();
    // Reject points within one grid cell of the boundary, where the local
    // quadratic interpolant has no centered stencil.
    const auto& xs = grid.axis_nodes(0);
    double margin = std::max(xs.front(), grid.domain().length(0) - xs.back());
    if (grid.domain().kind() == DomainKind::rectangle) {
        const auto& ys = grid.axis_nodes(1);
        margin = std::max(margin, std::max(ys.front(), grid.domain().length(1) - ys.back()));
    }
    if (dom_.delta(x) < 2.0 * margin)
        throw numeric_input_error("apply_pointwise: point too close to the boundary "
                                  "for the grid interpolant");
    PointwiseFn fn;
    fn.value = [&u](const Point& p) { return u.interpolate(p); };
    fn.gradient = [&u](const Point& p) { return u.interpolate_gradient(p); };
    return apply_pointwise(fn, x);
}

double KernelEvaluator::apply_semigroup(const SpectralField& u, const Point& x) const {
    if (s_ >= 1.0) throw invalid_configuration("operation requires s in (0,1)");
    dom_.require_interior(x, "apply_semigroup");
    if (u.domain().mode_count() != dom_.mode_count())
        throw numeric_input_error("apply_semigroup: field basis does not match evaluator");
    const std::size_t M = dom_.mode_count();
    std::vector<double> cphi(M), lam(M);
    double ux = 0.0, a1 = 0.0, a2 = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        cphi[m] = u.coeffs()[m] * dom_.eigenfunction(m, x);
        lam[m] = dom_.eigenvalue(m);
        ux += cphi[m];
        a1 += cphi[m] * lam[m];
        a2 += cphi[m] * lam[m] * lam[m];
    }
    double lam_max = lam.back();
    for (double l : lam) lam_max = std::max(lam_max, l);
    double t_min = 1e-6 / lam_max;
    double t_max = 42.0 / lam[0];
    // Trapezoid in log t of (u - e^{tL} u)(x) t^{-s}; the difference is
    // evaluated termwise with expm1 so small times lose no precision.
    const double h = 0.08;
    int n = static_cast<int>(std::ceil(std::log(t_max / t_min) / h)) + 1;
    t_max = std::exp(std::log(t_min) + (n - 1) * h); // align grid and tail cut
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double lt = std::log(t_min) + i * h;
        double t = std::exp(lt);
        double diff = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            double e = lam[m] * t;
            diff += cphi[m] * (e > 42.0 ? 1.0 : -std::expm1(-e));
        }
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        total += w * h * diff * std::pow(t, -s_);
    }
    // Head correction: below t_min the integrand is (A u)(x) t^{1-s} to
    // second order in t.
    total += a1 * std::pow(t_min, 1.0 - s_) / (1.0 - s_) -
             0.5 * a2 * std::pow(t_min, 2.0 - s_) / (2.0 - s_);
    // Tail: u(x) t^{-s} beyond t_max; the semigroup part there is below
    // double precision by the choice of t_max.
    total += ux * std::pow(t_max, -s_) / s_;
    return s_ / gamma_1ms_ * total;
}

} // namespace speclap
