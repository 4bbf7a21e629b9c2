#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speclap/large.hpp"

using namespace speclap;

namespace {

struct Fixture {
    Domain dom = Domain::interval(M_PI, 256);
    std::shared_ptr<KernelEvaluator> kern = std::make_shared<KernelEvaluator>(dom, 0.5);
    std::shared_ptr<Grid> grid = std::make_shared<Grid>(dom, 256, 0.75, 1e-6 * M_PI);
    DirichletSolver solver{kern, grid};
};

} // namespace

TEST_CASE("config validation enforces the admissible exponent band") {
    LargeRunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.alpha() == doctest::Approx(2.0 * 0.5 / 0.75).epsilon(1e-14));
    cfg.p = 2.5; // outside (1 + s, 1/(1 - s)) = (1.5, 2) at s = 0.5
    CHECK_THROWS_AS(cfg.validate(), invalid_configuration);
    cfg.p = 1.4;
    CHECK_THROWS_AS(cfg.validate(), invalid_configuration);
    cfg.p = 1.75;
    cfg.schedule = {4.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), invalid_configuration);
    cfg.schedule = {1.0, 2.0};
    cfg.fit_lo = 0.5;
    cfg.fit_hi = 0.1;
    CHECK_THROWS_AS(cfg.validate(), invalid_configuration);
}

TEST_CASE("single-datum solutions grow monotonically in the datum") {
    Fixture fx;
    LargeRunConfig cfg;
    SemilinearReport r1, r2;
    GridFunction u1 = solve_datum_j(fx.solver, cfg, 1.0, &r1);
    GridFunction u2 = solve_datum_j(fx.solver, cfg, 2.0, &r2);
    CHECK(r1.converged);
    CHECK(r2.converged);
    for (std::size_t i = 0; i < u1.size(); ++i) {
        CHECK(u1[i] >= -1e-12);
        CHECK(u2[i] >= u1[i] - 1e-9);
    }
}

TEST_CASE("supersolution certificate holds at every node") {
    Fixture fx;
    LargeRunConfig cfg;
    SupersolutionReport rep;
    GridFunction ub = build_supersolution(fx.solver, cfg, &rep);
    CHECK(rep.lambda > 0.0);
    CHECK(rep.min_slack >= -1e-6);
    // The barrier blows up like delta^{-alpha} toward the boundary.
    double near = ub.values().front();
    double mid = ub.interpolate({M_PI / 2, 0.0});
    CHECK(near > 100.0 * mid);
}

TEST_CASE("short schedule runs report diagnostics without stagnating") {
    Fixture fx;
    LargeRunConfig cfg;
    cfg.schedule = {1.0, 2.0, 4.0};
    LargeReport rep;
    GridFunction u = solve_large(fx.solver, cfg, &rep);
    CHECK(!rep.stagnated);
    CHECK(rep.last_datum == doctest::Approx(4.0));
    CHECK(rep.inner_iterations.size() == 3);
    CHECK(rep.core_changes.size() == 3);
    CHECK(rep.monotone_defect <= 1e-9);
    CHECK(rep.domination_defect <= 1e-9);
    CHECK(u.values().back() >= 0.0);
}

TEST_CASE("full default run stagnates with the expected boundary rate") {
    Fixture fx;
    LargeRunConfig cfg; // s = 0.5, p = 1.75, schedule up to 64
    LargeReport rep;
    GridFunction u = solve_large(fx.solver, cfg, &rep);
    CHECK(rep.stagnated);
    CHECK(rep.last_datum == doctest::Approx(64.0));
    CHECK(rep.monotone_defect <= 1e-9);
    CHECK(rep.domination_defect <= 1e-9);
    // alpha = 2s/(p-1) = 4/3.
    CHECK(rep.rate.rate == doctest::Approx(-4.0 / 3.0).epsilon(0.075));
    CHECK(rep.rate.r_squared >= 0.999);
    CHECK(rep.fitted_c > 0.0);
    CHECK(std::isfinite(u.values().front()));
}
