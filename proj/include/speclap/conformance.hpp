#pragma once

#include <cstdint>
#include <random>

#include "speclap/dirichlet.hpp"

namespace speclap {

/// One row of the conformance report.
struct ConformanceCheck {
    std::string name;
    std::string anchor; ///< mathematical identity or bound the check exercises
    std::size_t probes{0};
    double max_violation{0.0};
    double window_lo{0.0}; ///< empirical window of the normalized ratio
    double window_hi{0.0};
    bool pass{false};
};

struct ConformanceReport {
    double s{0.0};
    std::uint64_t seed{0};
    std::vector<ConformanceCheck> checks;

    bool all_pass() const;
    /// CSV with schema check,anchor,probes,max_violation,window_lo,window_hi,pass.
    std::string to_csv() const;
};

/// Composition of complementary-order Green operators against the classical
/// Green function.
ConformanceCheck verify_composition(const Domain& dom, double s, int pairs,
                                    std::mt19937_64& rng);

/// Composition of the Green operator of order 1-s with the Poisson kernel of
/// order s against the classical Poisson kernel.
ConformanceCheck verify_pois_id(const Domain& dom, double s, int probes, std::mt19937_64& rng);

/// Agreement of the spectral, principal-value, and semigroup forms of the
/// operator on a family of smooth bumps.
ConformanceCheck verify_operator_agreement(const Domain& dom, double s, std::mt19937_64& rng);

/// Window stability of the two-sided kernel envelopes (heat kernel, jumping
/// kernel, Poisson kernel, Green function, boundary weight).
std::vector<ConformanceCheck> verify_bounds(const Domain& dom, double s, std::mt19937_64& rng);

/// Nonnegative data produce nonnegative solutions; a negative atom produces a
/// sign change (sanity inversion).
std::vector<ConformanceCheck> verify_max_principles(const DirichletSolver& solver, int trials,
                                                    std::mt19937_64& rng);

/// Harmonicity of the Poisson kernel in the weak formulation, and the
/// weighted boundary trace limits of boundary data and Green potentials.
std::vector<ConformanceCheck> verify_harmonicity_and_traces(const DirichletSolver& solver,
                                                            std::mt19937_64& rng);

/// The full suite with a fixed probe budget; deterministic given the seed.
ConformanceReport run_conformance(const Domain& dom, double s, std::uint64_t seed = 987654321);

} // namespace speclap
