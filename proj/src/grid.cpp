#include "speclap/grid.hpp"

#include <algorithm>
#include <cmath>

namespace speclap {

namespace {

// Build a graded 1D grid on (0, L): geometric panels toward both endpoints,
// 2-point Gauss per panel (central panels may get 3 points to hit `n`).
void build_axis(double L, int n, double ratio, double delta_min, std::vector<double>& nodes,
                std::vector<double>& weights) {
    if (n < 8) throw invalid_configuration("grid: need at least 8 nodes per axis");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw invalid_configuration("grid: ratio must lie in (0,1)");
    if (!(delta_min > 0.0 && delta_min < 0.25 * L))
        throw invalid_configuration("grid: delta_min out of range");

    const GaussRule& g2 = gauss_legendre(2);
    const GaussRule& g3 = gauss_legendre(3);
    // Innermost panel [0, floor_len]: its 2-point Gauss nodes sit at
    // floor_len * (1 -+ 1/sqrt(3))/2, so the smallest node distance equals
    // delta_min when floor_len = delta_min / ((1 - 1/sqrt(3))/2).
    const double gmin = 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
    double floor_len = delta_min / gmin;

    int half_panels = n / 4; // 2 nodes per panel, two halves
    int deficit = n - 4 * half_panels;
    if (half_panels < 2) throw invalid_configuration("grid: node budget too small");

    // Geometric breakpoints b_i = (L/2) * r^i, i = 0..K-1, then [0, b_{K-1}].
    // If the requested ratio would push the innermost panel below floor_len,
    // flatten the grading just enough to land on floor_len.
    int K = half_panels;
    double r_use = ratio;
    double inner = 0.5 * L * std::pow(r_use, K - 1);
    if (inner < floor_len) r_use = std::pow(floor_len / (0.5 * L), 1.0 / (K - 1));

    std::vector<double> brk(K + 1);
    brk[0] = 0.0;
    for (int i = 1; i <= K; ++i) brk[i] = 0.5 * L * std::pow(r_use, K - i);
    brk[K] = 0.5 * L;

    // Panels listed from boundary inward for the left half; the central-most
    // panels absorb the node deficit with 3-point Gauss.
    auto add_panel = [&](double a, double b, bool three) {
        const GaussRule& g = three ? g3 : g2;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            nodes.push_back(mid + half * g.nodes[q]);
            weights.push_back(half * g.weights[q]);
        }
    };
    int extra_left = (deficit + 1) / 2, extra_right = deficit / 2;
    for (int i = 0; i < K; ++i)
        add_panel(brk[i], brk[i + 1], i >= K - extra_left);
    for (int i = K; i > 0; --i)
        add_panel(L - brk[i], L - brk[i - 1], i > K - extra_right);

    // Sort nodes ascending, carrying weights.
    std::vector<std::size_t> idx(nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return nodes[a] < nodes[b];
    });
    std::vector<double> sn(nodes.size()), sw(nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        sn[i] = nodes[idx[i]];
        sw[i] = weights[idx[i]];
    }
    for (std::size_t i = 1; i < sn.size(); ++i)
        if (!(sn[i] > sn[i - 1]))
            throw invalid_configuration(
                "grid: delta_min too small to resolve distinct nodes in double precision");
    nodes = std::move(sn);
    weights = std::move(sw);
}

// Index of the quadratic stencil start for coordinate x in sorted nodes.
std::size_t stencil_start(const std::vector<double>& xs, double x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i > 0 && (i == xs.size() || x - xs[i - 1] < xs[i] - x)) --i;
    // center the 3-point stencil on the nearest node, clamped to range
    if (i == 0) return 0;
    if (i >= xs.size() - 1) return xs.size() - 3;
    return i - 1;
}

void quad_weights(const double* xs, double x, double* w, double* dw) {
    double x0 = xs[0], x1 = xs[1], x2 = xs[2];
    w[0] = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
    w[1] = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
    w[2] = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    if (dw) {
        dw[0] = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        dw[1] = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        dw[2] = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    }
}

} // namespace

Grid::Grid(const Domain& domain, int n, double ratio, double delta_min) : dom_(domain) {
    if (delta_min <= 0.0) delta_min = 1e-4 * domain.diameter();
    build_axis(domain.length(0), n, ratio, delta_min, axis_nodes_[0], axis_weights_[0]);
    if (domain.kind() == DomainKind::interval) {
        nodes_.reserve(axis_nodes_[0].size());
        for (std::size_t i = 0; i < axis_nodes_[0].size(); ++i) {
            nodes_.push_back({axis_nodes_[0][i], 0.0});
            weights_.push_back(axis_weights_[0][i]);
        }
        return;
    }
    build_axis(domain.length(1), n, ratio, delta_min, axis_nodes_[1], axis_weights_[1]);
    nodes_.reserve(axis_nodes_[0].size() * axis_nodes_[1].size());
    for (std::size_t i = 0; i < axis_nodes_[0].size(); ++i)
        for (std::size_t j = 0; j < axis_nodes_[1].size(); ++j) {
            nodes_.push_back({axis_nodes_[0][i], axis_nodes_[1][j]});
            weights_.push_back(axis_weights_[0][i] * axis_weights_[1][j]);
        }
}

double Grid::min_delta() const {
    double m = dom_.diameter();
    for (const Point& p : nodes_) m = std::min(m, dom_.delta(p));
    return m;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
        throw numeric_input_error("GridFunction: value count does not match grid");
}

double GridFunction::interpolate(const Point& p) const {
    const auto& xs = grid_->axis_nodes(0);
    std::size_t i0 = stencil_start(xs, p.x);
    double wx[3];
    quad_weights(&xs[i0], p.x, wx, nullptr);
    if (grid_->domain().kind() == DomainKind::interval) {
        return wx[0] * values_[i0] + wx[1] * values_[i0 + 1] + wx[2] * values_[i0 + 2];
    }
    const auto& ys = grid_->axis_nodes(1);
    std::size_t j0 = stencil_start(ys, p.y);
    double wy[3];
    quad_weights(&ys[j0], p.y, wy, nullptr);
    std::size_t ny = ys.size();
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            v += wx[a] * wy[b] * values_[(i0 + a) * ny + (j0 + b)];
    return v;
}

Point GridFunction::interpolate_gradient(const Point& p) const {
    const auto& xs = grid_->axis_nodes(0);
    std::size_t i0 = stencil_start(xs, p.x);
    double wx[3], dwx[3];
    quad_weights(&xs[i0], p.x, wx, dwx);
    if (grid_->domain().kind() == DomainKind::interval) {
        return {dwx[0] * values_[i0] + dwx[1] * values_[i0 + 1] + dwx[2] * values_[i0 + 2], 0.0};
    }
    const auto& ys = grid_->axis_nodes(1);
    std::size_t j0 = stencil_start(ys, p.y);
    double wy[3], dwy[3];
    quad_weights(&ys[j0], p.y, wy, dwy);
    std::size_t ny = ys.size();
    Point g{0.0, 0.0};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double v = values_[(i0 + a) * ny + (j0 + b)];
            g.x += dwx[a] * wy[b] * v;
            g.y += wx[a] * dwy[b] * v;
        }
    return g;
}

double GridFunction::weighted_integral(DistanceWeight w, double p) const {
    const auto& nodes = grid_->nodes();
    const auto& wt = grid_->weights();
    const Domain& dom = grid_->domain();
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double omega = 1.0;
        if (w == DistanceWeight::delta) omega = dom.delta(nodes[i]);
        else if (w == DistanceWeight::delta_pow) omega = std::pow(dom.delta(nodes[i]), p);
        sum += wt[i] * values_[i] * omega;
    }
    return sum;
}

RateFit fit_boundary_rate(const std::vector<double>& delta, const std::vector<double>& value) {
    if (delta.size() != value.size() || delta.size() < 3)
        throw numeric_input_error("fit_boundary_rate: need at least 3 matched samples");
    std::size_t n = delta.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(delta[i] > 0.0) || !(value[i] > 0.0))
            throw numeric_input_error("fit_boundary_rate: samples must be positive");
        double lx = std::log(delta[i]), ly = std::log(value[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double dn = static_cast<double>(n);
    double vx = sxx - sx * sx / dn;
    double vy = syy - sy * sy / dn;
    double cxy = sxy - sx * sy / dn;
    RateFit f;
    f.rate = cxy / vx;
    f.log_c = (sy - f.rate * sx) / dn;
    f.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
    return f;
}

} // namespace speclap
