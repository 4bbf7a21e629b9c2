#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speclap/kernels.hpp"

using namespace speclap;

namespace {

// Closed forms on the interval (0, pi) at s = 1/2.
double green_half(double x, double y) {
    return std::log(std::sin(0.5 * (x + y)) / std::sin(0.5 * std::abs(x - y))) / M_PI;
}
double poisson_half_left(double x) { return std::cos(x / 2) / std::sin(x / 2) / M_PI; }
double killing_half(double x) { return 2.0 / (M_PI * std::sin(x)); }
double h1_half(double x) { return 2.0 / (M_PI * std::sin(x)); }

} // namespace

TEST_CASE("half-power Green function on the interval") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.5);
    for (auto [x, y] : {std::pair{0.5, 1.5}, {1.0, 1.1}, {2.8, 0.4}, {1.6, 1.55}}) {
        double v = k.green({x, 0.0}, {y, 0.0});
        CHECK(v == doctest::Approx(green_half(x, y)).epsilon(1e-8));
        // symmetry
        CHECK(k.green({y, 0.0}, {x, 0.0}) == doctest::Approx(v).epsilon(1e-10));
    }
    CHECK_THROWS_AS(k.green({1.0, 0.0}, {1.0, 0.0}), numeric_input_error);
}

TEST_CASE("half-power Poisson kernel on the interval") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.5);
    for (double x : {0.1, 0.7, 1.5, 2.9}) {
        CHECK(k.poisson({x, 0.0}, {0, 0.0}) ==
              doctest::Approx(poisson_half_left(x)).epsilon(1e-7));
        // Right endpoint by reflection symmetry.
        CHECK(k.poisson({x, 0.0}, {1, 0.0}) ==
              doctest::Approx(poisson_half_left(M_PI - x)).epsilon(1e-7));
    }
}

TEST_CASE("half-power killing density and reference weight on the interval") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.5);
    for (double x : {0.05, 0.4, 1.2, M_PI / 2, 2.7}) {
        CHECK(k.killing({x, 0.0}) == doctest::Approx(killing_half(x)).epsilon(1e-7));
        CHECK(k.h1({x, 0.0}) == doctest::Approx(h1_half(x)).epsilon(1e-7));
    }
}

TEST_CASE("classical kernels at s = 1") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 1.0);
    // G^1(x, y) = x (pi - y) / pi for x <= y.
    for (auto [x, y] : {std::pair{0.5, 1.5}, {1.0, 2.5}, {2.0, 2.2}}) {
        CHECK(k.green({x, 0.0}, {y, 0.0}) ==
              doctest::Approx(x * (M_PI - y) / M_PI).epsilon(1e-9));
    }
    // P^1(x, 0) = (pi - x)/pi linear interpolation weights.
    for (double x : {0.3, 1.5, 2.9}) {
        CHECK(k.poisson({x, 0.0}, {0, 0.0}) == doctest::Approx((M_PI - x) / M_PI).epsilon(1e-9));
        CHECK(k.poisson({x, 0.0}, {1, 0.0}) == doctest::Approx(x / M_PI).epsilon(1e-9));
    }
    // The purely fractional kernels are undefined at s = 1.
    CHECK_THROWS_AS(k.jumping({1.0, 0.0}, {2.0, 0.0}), invalid_configuration);
    CHECK_THROWS_AS(k.killing({1.0, 0.0}), invalid_configuration);
    CHECK_THROWS_AS(k.h1({1.0, 0.0}), invalid_configuration);
}

TEST_CASE("jumping kernel is symmetric, positive, and singular at coincidence") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.6);
    double j1 = k.jumping({1.0, 0.0}, {1.5, 0.0});
    CHECK(j1 > 0.0);
    CHECK(k.jumping({1.5, 0.0}, {1.0, 0.0}) == doctest::Approx(j1).epsilon(1e-10));
    CHECK(k.jumping({1.0, 0.0}, {1.05, 0.0}) > j1);
    CHECK(k.jumping({1.0, 0.0}, {1.001, 0.0}) > k.jumping({1.0, 0.0}, {1.05, 0.0}));
}

TEST_CASE("h1 equals the boundary integral of the Poisson kernel") {
    Domain dom = Domain::interval(M_PI, 256);
    for (double s : {0.3, 0.7}) {
        KernelEvaluator k(dom, s);
        for (double x : {0.5, 1.9}) {
            double sum = k.poisson({x, 0.0}, {0, 0.0}) + k.poisson({x, 0.0}, {1, 0.0});
            CHECK(k.h1({x, 0.0}) == doctest::Approx(sum).epsilon(1e-7));
        }
    }
}

TEST_CASE("green_one equals quadrature of the Green function") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.5);
    Point x{1.3, 0.0};
    std::vector<double> sing{0.0, x.x, M_PI};
    double q = integrate_singular([&](double y) { return k.green(x, {y, 0.0}); }, 0.0, M_PI,
                                  sing, 8, 0.35, 1e-10);
    CHECK(k.green_one(x) == doctest::Approx(q).epsilon(1e-7));
}

TEST_CASE("operator representations agree on a smooth bump") {
    Domain dom = Domain::interval(M_PI, 256);
    double s = 0.5;
    KernelEvaluator k(dom, s);
    Point c{1.4, 0.0};
    double r = 0.8;
    auto f = bump_function(dom, c, r);
    auto g = bump_gradient(dom, c, r);
    SpectralField F = project(dom, f);
    SpectralField As = F.apply_power(s);
    for (Point p : {Point{1.4, 0.0}, Point{1.0, 0.0}, Point{2.4, 0.0}}) {
        double r1 = As.eval(p);
        double r2 = k.apply_pointwise({f, g}, p);
        double r3 = k.apply_semigroup(F, p);
        CHECK(r2 == doctest::Approx(r1).epsilon(2e-4).scale(1.0));
        CHECK(r3 == doctest::Approx(r1).epsilon(2e-4).scale(1.0));
    }
}

TEST_CASE("grid-backed pointwise route matches the callable route") {
    Domain dom = Domain::interval(M_PI, 256);
    KernelEvaluator k(dom, 0.5);
    auto grid = std::make_shared<Grid>(dom, 640);
    Point c{1.6, 0.0};
    auto f = bump_function(dom, c, 0.9);
    auto gr = bump_gradient(dom, c, 0.9);
    GridFunction u(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) u[i] = f(grid->nodes()[i]);
    Point p{1.3, 0.0};
    double a = k.apply_pointwise({f, gr}, p);
    double b = k.apply_pointwise(u, p);
    // The interpolant's curvature error near the bump edge limits this route.
    CHECK(b == doctest::Approx(a).epsilon(1e-2).scale(1.0));
    CHECK_THROWS_AS(k.apply_pointwise(u, {1e-5, 0.0}), numeric_input_error);
}

TEST_CASE("rectangle kernels keep basic structure") {
    Domain dom = Domain::rectangle(M_PI, 2.0, 48);
    KernelEvaluator k(dom, 0.5);
    Point x{1.0, 0.8}, y{2.0, 1.2};
    double gxy = k.green(x, y);
    CHECK(gxy > 0.0);
    CHECK(k.green(y, x) == doctest::Approx(gxy).epsilon(1e-9));
    CHECK(k.jumping(x, y) == doctest::Approx(k.jumping(y, x)).epsilon(1e-9));
    CHECK(k.killing(x) > 0.0);
    // Reflection symmetry of the rectangle about both midlines.
    Point xr{M_PI - x.x, 2.0 - x.y}, yr{M_PI - y.x, 2.0 - y.y};
    CHECK(k.green(xr, yr) == doctest::Approx(gxy).epsilon(1e-8));
    // h1 grows toward the boundary.
    CHECK(k.h1({0.05, 1.0}) > k.h1({1.5, 1.0}));
}

TEST_CASE("kernel evaluator input validation") {
    Domain dom = Domain::interval(M_PI, 64);
    CHECK_THROWS_AS(KernelEvaluator(dom, 0.0), invalid_configuration);
    CHECK_THROWS_AS(KernelEvaluator(dom, 1.5), invalid_configuration);
    KernelEvaluator k(dom, 0.5);
    CHECK_THROWS_AS(k.green({-1.0, 0.0}, {1.0, 0.0}), numeric_input_error);
}
