#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speclap/heat_kernel.hpp"

using namespace speclap;

namespace {

// Dense spectral reference for the interval kernel, independent of the
// implementation's switch logic.
double spectral_ref(double L, double t, double x, double y, int terms) {
    double sum = 0.0;
    for (int j = 1; j <= terms; ++j) {
        double lam = std::pow(j * M_PI / L, 2);
        sum += 2.0 / L * std::exp(-lam * t) * std::sin(j * M_PI * x / L) *
               std::sin(j * M_PI * y / L);
    }
    return sum;
}

} // namespace

TEST_CASE("interval kernel matches the dense spectral sum across the switch") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    double ts = hk.switch_time(0);
    CHECK(ts == doctest::Approx(M_PI * M_PI / (2.0 * M_PI * M_PI)).epsilon(1e-14));
    for (double t : {0.05, 0.2, 0.45, 0.55, 1.0, 3.0}) {
        double v = hk.value(t, {1.0, 0.0}, {2.0, 0.0});
        double ref = spectral_ref(M_PI, t, 1.0, 2.0, 400);
        CHECK(v == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("kernel symmetry and positivity") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    for (double t : {0.01, 0.5, 2.0}) {
        double a = hk.value(t, {0.7, 0.0}, {2.3, 0.0});
        double b = hk.value(t, {2.3, 0.0}, {0.7, 0.0});
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
        CHECK(a > 0.0);
    }
}

TEST_CASE("short-time kernel approaches the free Gaussian") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    double t = 1e-4;
    double x = 1.5, y = 1.52;
    double free_g = std::exp(-(x - y) * (x - y) / (4 * t)) / std::sqrt(4 * M_PI * t);
    CHECK(hk.value(t, {x, 0.0}, {y, 0.0}) == doctest::Approx(free_g).epsilon(1e-10));
}

TEST_CASE("survival lies in [0,1] and has the right limits") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    Point c{M_PI / 2, 0.0};
    CHECK(hk.survival(1e-6, c) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hk.survival(50.0, c) < 1e-15);
    double prev = 1.0;
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        double s = hk.survival(t, c);
        CHECK(s >= 0.0);
        CHECK(s <= prev + 1e-13); // monotone decay in t
        prev = s;
    }
    // Long-time: S ~ (4/pi) e^{-t} at the center of interval(pi).
    double t = 8.0;
    CHECK(hk.survival(t, c) == doctest::Approx(4.0 / M_PI * std::exp(-t)).epsilon(1e-6));
}

TEST_CASE("survival equals quadrature of the kernel") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    Point x{1.0, 0.0};
    for (double t : {0.3, 0.8}) {
        const GaussRule& g = gauss_legendre(80);
        double q = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            double y = M_PI / 2 * (g.nodes[i] + 1.0);
            q += M_PI / 2 * g.weights[i] * hk.value(t, x, {y, 0.0});
        }
        CHECK(hk.survival(t, x) == doctest::Approx(q).epsilon(1e-10));
    }
}

TEST_CASE("boundary normal derivative matches a finite difference") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    Point x{1.2, 0.0};
    for (double t : {0.2, 0.8}) {
        double h = 1e-6;
        // Inward derivative at the left endpoint: p(t,x,h)/h as h -> 0.
        double fd = hk.value(t, x, {h, 0.0}) / h;
        CHECK(hk.boundary_normal_derivative(t, x, {0, 0.0}) ==
              doctest::Approx(fd).epsilon(1e-5));
        double fdR = hk.value(t, x, {M_PI - h, 0.0}) / h;
        CHECK(hk.boundary_normal_derivative(t, x, {1, 0.0}) ==
              doctest::Approx(fdR).epsilon(1e-5));
    }
}

TEST_CASE("rectangle kernel factorizes over the axes") {
    Domain dom = Domain::rectangle(M_PI, 2.0, 32);
    HeatKernel hk(dom);
    Point x{1.0, 0.5}, y{2.0, 1.3};
    for (double t : {0.05, 0.4, 1.0}) {
        double prod = hk.axis_value(0, t, x.x, y.x) * hk.axis_value(1, t, x.y, y.y);
        CHECK(hk.value(t, x, y) == doctest::Approx(prod).epsilon(1e-13));
        double sprod = hk.axis_survival(0, t, x.x) * hk.axis_survival(1, t, x.y);
        CHECK(hk.survival(t, x) == doctest::Approx(sprod).epsilon(1e-13));
    }
}

TEST_CASE("rectangle boundary derivative combines axis factors") {
    Domain dom = Domain::rectangle(M_PI, 2.0, 32);
    HeatKernel hk(dom);
    Point x{1.0, 0.7};
    double t = 0.3;
    // Bottom face (y = 0) at tangential coordinate 2.0.
    double expect = hk.axis_value(0, t, x.x, 2.0) * hk.axis_boundary_derivative(1, t, x.y, 0);
    CHECK(hk.boundary_normal_derivative(t, x, {0, 2.0}) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("Chapman-Kolmogorov semigroup identity") {
    Domain dom = Domain::interval(M_PI, 64);
    HeatKernel hk(dom);
    Point x{1.0, 0.0}, y{2.2, 0.0};
    double t1 = 0.3, t2 = 0.5;
    const GaussRule& g = gauss_legendre(96);
    double conv = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double z = M_PI / 2 * (g.nodes[i] + 1.0);
        conv += M_PI / 2 * g.weights[i] * hk.value(t1, x, {z, 0.0}) * hk.value(t2, {z, 0.0}, y);
    }
    CHECK(hk.value(t1 + t2, x, y) == doctest::Approx(conv).epsilon(1e-10));
}
