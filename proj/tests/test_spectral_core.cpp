#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speclap/domain.hpp"
#include "speclap/field.hpp"
#include "speclap/grid.hpp"

using namespace speclap;

TEST_CASE("interval domain eigen data") {
    Domain dom = Domain::interval(M_PI, 16);
    CHECK(dom.dim() == 1);
    CHECK(dom.mode_count() == 16);
    for (std::size_t m = 0; m < 16; ++m) {
        double j = double(m + 1);
        CHECK(dom.eigenvalue(m) == doctest::Approx(j * j).epsilon(1e-14));
        auto f = dom.mode_freq(m);
        CHECK(f[0] == int(m + 1));
        CHECK(f[1] == 0);
    }
    // phi_1(pi/2) = sqrt(2/pi)
    CHECK(dom.eigenfunction(0, {M_PI / 2, 0.0}) ==
          doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK(dom.delta({0.3, 0.0}) == doctest::Approx(0.3));
    CHECK(dom.delta({3.0, 0.0}) == doctest::Approx(M_PI - 3.0));
    CHECK(dom.diameter() == doctest::Approx(M_PI));
    CHECK(dom.volume() == doctest::Approx(M_PI));
    CHECK(dom.boundary_measure() == doctest::Approx(2.0));
    CHECK(dom.face_count() == 2);
}

TEST_CASE("interval eigenfunctions are orthonormal") {
    Domain dom = Domain::interval(2.0, 8);
    const GaussRule& g = gauss_legendre(64);
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = a; b < 8; ++b) {
            double ip = 0.0;
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                double x = 1.0 + g.nodes[i];
                ip += g.weights[i] * dom.eigenfunction(a, {x, 0.0}) *
                      dom.eigenfunction(b, {x, 0.0});
            }
            CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("rectangle domain eigen data") {
    Domain dom = Domain::rectangle(M_PI, 2.0, 6);
    CHECK(dom.dim() == 2);
    CHECK(dom.mode_count() == 36);
    // mode (j, k) row-major; lambda = (j pi/Lx)^2 + (k pi/Ly)^2
    for (std::size_t m = 0; m < 36; ++m) {
        auto f = dom.mode_freq(m);
        double lam = std::pow(f[0] * M_PI / M_PI, 2) + std::pow(f[1] * M_PI / 2.0, 2);
        CHECK(dom.eigenvalue(m) == doctest::Approx(lam).epsilon(1e-13));
    }
    CHECK(dom.delta({0.1, 1.0}) == doctest::Approx(0.1));
    CHECK(dom.delta({1.5, 1.9}) == doctest::Approx(0.1));
    CHECK(dom.boundary_measure() == doctest::Approx(2.0 * (M_PI + 2.0)));
    CHECK(dom.face_count() == 4);
    // Faces: bottom, top, left, right.
    Point pb = dom.boundary_coords({0, 1.0});
    CHECK(pb.x == doctest::Approx(1.0));
    CHECK(pb.y == doctest::Approx(0.0));
    Point pr = dom.boundary_coords({3, 0.5});
    CHECK(pr.x == doctest::Approx(M_PI));
    CHECK(pr.y == doctest::Approx(0.5));
}

TEST_CASE("normal derivative of interval eigenfunctions") {
    Domain dom = Domain::interval(M_PI, 8);
    // -d phi_j / d nu at x = 0 equals phi_j'(0) = sqrt(2/pi) j.
    for (std::size_t m = 0; m < 4; ++m) {
        double j = double(m + 1);
        CHECK(dom.eigen_normal_derivative(m, {0, 0.0}) ==
              doctest::Approx(std::sqrt(2.0 / M_PI) * j).epsilon(1e-13));
        // At x = L the sign alternates with j.
        double expect = std::sqrt(2.0 / M_PI) * j * (m % 2 == 0 ? 1.0 : -1.0);
        CHECK(dom.eigen_normal_derivative(m, {1, 0.0}) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("project recovers sine coefficients") {
    Domain dom = Domain::interval(M_PI, 32);
    auto f = [&](const Point& p) {
        return 2.0 * dom.eigenfunction(0, p) - 0.5 * dom.eigenfunction(4, p);
    };
    SpectralField F = project(dom, f);
    CHECK(F.coeffs()[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(F.coeffs()[4] == doctest::Approx(-0.5).epsilon(1e-11));
    for (std::size_t m : {1u, 2u, 3u, 10u, 31u}) CHECK(std::abs(F.coeffs()[m]) < 1e-10);
    CHECK(F.eval({1.0, 0.0}) == doctest::Approx(f({1.0, 0.0})).epsilon(1e-10));
    // Gradient of the series.
    double h = 1e-6;
    double fd = (F.eval({1.0 + h, 0.0}) - F.eval({1.0 - h, 0.0})) / (2 * h);
    CHECK(F.eval_gradient({1.0, 0.0}).x == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("apply_power acts diagonally and composes") {
    Domain dom = Domain::interval(M_PI, 16);
    std::vector<double> c(16, 0.0);
    c[2] = 1.5;
    SpectralField F(dom, c);
    SpectralField G = F.apply_power(0.5);
    CHECK(G.coeffs()[2] == doctest::Approx(1.5 * std::pow(9.0, 0.5)).epsilon(1e-14));
    SpectralField H = G.apply_power(-0.5);
    CHECK(H.coeffs()[2] == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("bump functions are supported in the stated ball") {
    Domain dom = Domain::interval(M_PI, 8);
    Point c{1.5, 0.0};
    for (BumpShape shape : {BumpShape::poly, BumpShape::cinf}) {
        auto f = bump_function(dom, c, 0.5, shape);
        auto g = bump_gradient(dom, c, 0.5, shape);
        CHECK(f(c) > 0.0);
        CHECK(f({2.1, 0.0}) == 0.0);
        CHECK(f({0.9, 0.0}) == 0.0);
        double h = 1e-6;
        double fd = (f({1.7 + h, 0.0}) - f({1.7 - h, 0.0})) / (2 * h);
        CHECK(g({1.7, 0.0}).x == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("grid stays interior and integrates exactly enough") {
    Domain dom = Domain::interval(M_PI, 8);
    Grid grid(dom, 96);
    CHECK(grid.size() == 96);
    CHECK(grid.min_delta() > 0.0);
    double wsum = 0.0;
    for (double w : grid.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(M_PI).epsilon(1e-12));
    // Quadrature of a smooth function.
    double v = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        v += grid.weights()[i] * std::sin(grid.nodes()[i].x);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-4));
    // delta_min is honored.
    Grid fine(dom, 128, 0.75, 1e-6);
    CHECK(fine.min_delta() >= 1e-6);
    CHECK(fine.min_delta() < 1e-3); // grading actually approaches the boundary
}

TEST_CASE("rectangle grid is a tensor product") {
    Domain dom = Domain::rectangle(M_PI, 2.0, 8);
    Grid grid(dom, 16);
    CHECK(grid.size() == 256);
    CHECK(grid.axis_nodes(0).size() == 16);
    CHECK(grid.axis_nodes(1).size() == 16);
    double wsum = 0.0;
    for (double w : grid.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("grid function interpolation is exact at nodes and on quadratics") {
    Domain dom = Domain::interval(M_PI, 8);
    auto grid = std::make_shared<Grid>(dom, 64);
    GridFunction u(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double x = grid->nodes()[i].x;
        u[i] = 1.0 + x + 0.5 * x * x;
    }
    for (double x : {0.3, 1.0, 2.0, 3.0}) {
        double exact = 1.0 + x + 0.5 * x * x;
        CHECK(u.interpolate({x, 0.0}) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(u.interpolate_gradient({x, 0.0}).x == doctest::Approx(1.0 + x).epsilon(1e-9));
    }
}

TEST_CASE("weighted integrals with distance weights") {
    Domain dom = Domain::interval(M_PI, 8);
    auto grid = std::make_shared<Grid>(dom, 96);
    GridFunction one(grid);
    for (std::size_t i = 0; i < one.size(); ++i) one[i] = 1.0;
    CHECK(one.weighted_integral(DistanceWeight::one) == doctest::Approx(M_PI).epsilon(1e-12));
    // int_0^pi min(x, pi - x) dx = pi^2 / 4
    CHECK(one.weighted_integral(DistanceWeight::delta) ==
          doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-9));
    // int delta^2 = 2 (pi/2)^3 / 3
    CHECK(one.weighted_integral(DistanceWeight::delta_pow, 2.0) ==
          doctest::Approx(2.0 * std::pow(M_PI / 2.0, 3) / 3.0).epsilon(1e-9));
}

TEST_CASE("fit_boundary_rate recovers an exact power law") {
    std::vector<double> d, v;
    for (int i = 0; i < 20; ++i) {
        double delta = std::pow(10.0, -3.0 + 2.0 * i / 19.0);
        d.push_back(delta);
        v.push_back(2.5 * std::pow(delta, -0.75));
    }
    RateFit fit = fit_boundary_rate(d, v);
    CHECK(fit.rate == doctest::Approx(-0.75).epsilon(1e-10));
    CHECK(std::exp(fit.log_c) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("domain input validation") {
    CHECK_THROWS_AS(Domain::interval(-1.0, 8), invalid_configuration);
    CHECK_THROWS_AS(Domain::interval(M_PI, 0), invalid_configuration);
    CHECK_THROWS_AS(Domain::rectangle(1.0, -2.0, 8), invalid_configuration);
    Domain dom = Domain::interval(M_PI, 8);
    CHECK_THROWS_AS(dom.require_interior({-0.1, 0.0}, "test"), numeric_input_error);
    CHECK(dom.contains_interior({1.0, 0.0}));
    CHECK(!dom.contains_interior({M_PI, 0.0}));
}
