#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "speclap/grid.hpp"

namespace speclap {

/// Interior Radon measure restricted to finite atom lists plus an optional
/// grid density (the paper's full generality is out of scope).
struct InteriorAtom {
    Point location;
    double weight{0.0};
};

struct InteriorMeasure {
    std::vector<InteriorAtom> atoms;
    std::optional<GridFunction> density;

    bool empty() const { return atoms.empty() && !density; }
    /// Weighted total variation int delta d|mu|.
    double weighted_variation(const Domain& dom) const;
    void validate(const Domain& dom) const;
};

struct BoundaryAtom {
    BoundaryPoint location;
    double weight{0.0};
};

struct BoundaryMeasure {
    std::vector<BoundaryAtom> atoms;
    std::function<double(const BoundaryPoint&)> density; ///< may be empty

    bool has_density() const { return static_cast<bool>(density); }
    bool empty() const { return atoms.empty() && !has_density(); }
};

/// Quadrature over the boundary: counting measure on the two endpoints for
/// the interval, graded composite Gauss along each edge for the rectangle.
std::vector<std::pair<BoundaryPoint, double>> boundary_quadrature(const Domain& dom);

/// Total variation |zeta|(boundary) by quadrature.
double boundary_variation(const Domain& dom, const BoundaryMeasure& zeta);

/// Plain-text measure file: sections `[interior]` / `[boundary]`, lines
/// `atom <coords> <weight>` or `density <named profile>`. Interior profiles:
/// `one`, `const <v>`, `bump <coords> <radius>`; boundary profiles: `one`,
/// `const <v>`.
struct MeasureData {
    InteriorMeasure mu;
    BoundaryMeasure zeta;
};

MeasureData parse_measure_file(const std::string& path, const Domain& dom,
                               std::shared_ptr<const Grid> grid);

} // namespace speclap
