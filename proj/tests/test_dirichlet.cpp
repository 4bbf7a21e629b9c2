#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "speclap/dirichlet.hpp"

using namespace speclap;

namespace {

struct Fixture {
    Domain dom = Domain::interval(M_PI, 256);
    std::shared_ptr<KernelEvaluator> kern = std::make_shared<KernelEvaluator>(dom, 0.5);
    std::shared_ptr<Grid> grid = std::make_shared<Grid>(dom, 96);
    DirichletSolver solver{kern, grid};
};

} // namespace

TEST_CASE("single interior atom reproduces the Green function") {
    Fixture fx;
    InteriorMeasure mu;
    mu.atoms.push_back({{1.2, 0.0}, 2.0});
    BoundaryMeasure zeta;
    LinearReport rep;
    GridFunction u = fx.solver.solve(mu, zeta, &rep);
    for (std::size_t i = 0; i < fx.grid->size(); i += 17) {
        Point x = fx.grid->nodes()[i];
        if (std::abs(x.x - 1.2) < 1e-12) continue;
        CHECK(u[i] == doctest::Approx(2.0 * fx.kern->green(x, {1.2, 0.0})).epsilon(1e-12));
    }
    CHECK(rep.weighted_l1 > 0.0);
    CHECK(rep.data_norm > 0.0);
    CHECK(rep.stability_ratio > 0.0);
    // evaluate() agrees with the nodewise superposition route.
    Point p{2.0, 0.0};
    CHECK(fx.solver.evaluate(mu, zeta, p) ==
          doctest::Approx(2.0 * fx.kern->green(p, {1.2, 0.0})).epsilon(1e-12));
}

TEST_CASE("boundary atoms reproduce the Poisson kernel") {
    Fixture fx;
    InteriorMeasure mu;
    BoundaryMeasure zeta;
    zeta.atoms.push_back({{0, 0.0}, 1.5});
    GridFunction u = fx.solver.solve(mu, zeta);
    Point p{0.9, 0.0};
    CHECK(fx.solver.evaluate(mu, zeta, p) ==
          doctest::Approx(1.5 * fx.kern->poisson(p, {0, 0.0})).epsilon(1e-12));
    (void)u;
}

TEST_CASE("unit boundary density extension equals h1") {
    Fixture fx;
    BoundaryMeasure zeta;
    zeta.density = [](const BoundaryPoint&) { return 1.0; };
    GridFunction u = fx.solver.poisson_extension(zeta);
    const auto& h1 = fx.solver.h1_nodes();
    for (std::size_t i = 0; i < u.size(); i += 11)
        CHECK(u[i] == doctest::Approx(h1[i]).epsilon(1e-9));
}

TEST_CASE("green matrix is symmetric with regularized diagonal") {
    Fixture fx;
    const auto& G = fx.solver.green_matrix();
    std::size_t n = fx.grid->size();
    for (std::size_t i = 0; i < n; i += 13)
        for (std::size_t j = i + 1; j < n; j += 17)
            CHECK(G[i * n + j] == doctest::Approx(G[j * n + i]).epsilon(1e-11));
    for (std::size_t i = 0; i < n; i += 13) {
        CHECK(std::isfinite(G[i * n + i]));
        CHECK(G[i * n + i] > 0.0);
    }
    // green_apply of the unit vector approximates the Green potential of 1.
    std::vector<double> one(n, 1.0);
    auto g1 = fx.solver.green_apply(one);
    Point p = fx.grid->nodes()[n / 2];
    CHECK(g1[n / 2] == doctest::Approx(fx.kern->green_one(p)).epsilon(1e-2));
}

TEST_CASE("weak residual is small for exact representation data") {
    Fixture fx;
    InteriorMeasure mu;
    mu.atoms.push_back({{2.0, 0.0}, 1.0});
    BoundaryMeasure zeta;
    zeta.atoms.push_back({{0, 0.0}, 0.7});
    auto u_eval = [&](const Point& x) { return fx.solver.evaluate(mu, zeta, x); };
    double r = fx.solver.weak_residual(u_eval, mu, zeta, {1.3, 0.0}, 0.6);
    CHECK(std::abs(r) < 1e-3);
}

TEST_CASE("boundary trace of the unit-density extension") {
    Fixture fx;
    BoundaryMeasure zeta;
    zeta.density = [](const BoundaryPoint&) { return 1.0; };
    InteriorMeasure mu;
    auto u_eval = [&](const Point& x) { return fx.solver.evaluate(mu, zeta, x); };
    auto phi = [](const BoundaryPoint&) { return 1.0; };
    double t = M_PI / 16;
    double tr = fx.solver.extrapolated_trace(u_eval, phi, t);
    // Total boundary mass of the datum: two endpoints, density one.
    CHECK(tr == doctest::Approx(2.0).epsilon(1e-4));
    // A Green potential leaves no boundary datum.
    InteriorMeasure atom;
    atom.atoms.push_back({{1.5, 0.0}, 1.0});
    BoundaryMeasure none;
    auto g_eval = [&](const Point& x) { return fx.solver.evaluate(atom, none, x); };
    CHECK(std::abs(fx.solver.extrapolated_trace(g_eval, phi, t)) < 1e-2);
}

TEST_CASE("lp integrals detect the integrability threshold") {
    Fixture fx;
    std::vector<Point> probes;
    for (double d : {1e-1, 1e-2, 1e-3}) probes.push_back({M_PI - d, 0.0});
    double lo = fx.solver.lp_threshold_scan(1.5, probes);
    CHECK(std::isfinite(lo));
    CHECK(lo < 2.0);
    // Above the threshold the scan grows as the probe approaches the boundary.
    double v1 = fx.solver.lp_integral(2.5, {M_PI - 1e-1, 0.0});
    double v2 = fx.solver.lp_integral(2.5, {M_PI - 1e-2, 0.0});
    double v3 = fx.solver.lp_integral(2.5, {M_PI - 1e-3, 0.0});
    CHECK(v2 > 1.5 * v1);
    CHECK(v3 > 1.5 * v2);
}

TEST_CASE("interior measure validation and weighted variation") {
    Domain dom = Domain::interval(M_PI, 64);
    InteriorMeasure mu;
    mu.atoms.push_back({{1.0, 0.0}, 3.0});
    mu.atoms.push_back({{3.0, 0.0}, -1.0});
    CHECK_NOTHROW(mu.validate(dom));
    double wv = mu.weighted_variation(dom);
    CHECK(wv == doctest::Approx(3.0 * 1.0 + 1.0 * (M_PI - 3.0)).epsilon(1e-12));
    InteriorMeasure bad;
    bad.atoms.push_back({{-0.5, 0.0}, 1.0});
    CHECK_THROWS_AS(bad.validate(dom), invalid_measure);
}

TEST_CASE("boundary quadrature resolves the boundary measure") {
    Domain dom1 = Domain::interval(M_PI, 64);
    auto bq1 = boundary_quadrature(dom1);
    double w1 = 0.0;
    for (auto& [z, w] : bq1) w1 += w;
    CHECK(w1 == doctest::Approx(2.0).epsilon(1e-13));
    Domain dom2 = Domain::rectangle(M_PI, 2.0, 16);
    auto bq2 = boundary_quadrature(dom2);
    double w2 = 0.0;
    for (auto& [z, w] : bq2) w2 += w;
    CHECK(w2 == doctest::Approx(2.0 * (M_PI + 2.0)).epsilon(1e-4));
    BoundaryMeasure zeta;
    zeta.density = [](const BoundaryPoint&) { return 2.0; };
    CHECK(boundary_variation(dom2, zeta) == doctest::Approx(4.0 * (M_PI + 2.0)).epsilon(1e-4));
}

TEST_CASE("measure files parse with diagnostics") {
    Domain dom = Domain::interval(M_PI, 64);
    auto grid = std::make_shared<Grid>(dom, 64);
    {
        std::ofstream f("/tmp/speclap_test_measure.txt");
        f << "[interior]\natom 1.0 2.5\ndensity one\n[boundary]\natom 0 0.5\n";
    }
    MeasureData md = parse_measure_file("/tmp/speclap_test_measure.txt", dom, grid);
    REQUIRE(md.mu.atoms.size() == 1);
    CHECK(md.mu.atoms[0].location.x == doctest::Approx(1.0));
    CHECK(md.mu.atoms[0].weight == doctest::Approx(2.5));
    CHECK(md.mu.density.has_value());
    REQUIRE(md.zeta.atoms.size() == 1);
    CHECK(md.zeta.atoms[0].weight == doctest::Approx(0.5));
    {
        std::ofstream f("/tmp/speclap_test_measure_bad.txt");
        f << "[interior]\natom nonsense\n";
    }
    CHECK_THROWS_AS(parse_measure_file("/tmp/speclap_test_measure_bad.txt", dom, grid),
                    invalid_measure);
    std::remove("/tmp/speclap_test_measure.txt");
    std::remove("/tmp/speclap_test_measure_bad.txt");
}
