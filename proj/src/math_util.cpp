#include "speclap/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace speclap {

namespace {

GaussRule compute_gauss(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Newton iteration on Legendre polynomials, symmetric about 0.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

// Regularized lower incomplete gamma P(z, a) by series, z > 0, a < z + 1.
double gamma_p_series(double z, double a) {
    double term = 1.0 / z;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= a / (z + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-a + z * std::log(a) - std::lgamma(z));
}

// Upper incomplete gamma by Lentz continued fraction, a >= z + 1 (z may be <= 0).
double upper_gamma_cf(double z, double a) {
    const double tiny = 1e-300;
    double b = a + 1.0 - z;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 500; ++k) {
        double an = -k * (k - z);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-a + z * std::log(a)) * h;
}

int max_threads() {
    static int cached = [] {
        unsigned hc = std::thread::hardware_concurrency();
        int n = hc > 0 ? static_cast<int>(hc) : 4;
        if (const char* env = std::getenv("SPECLAP_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) n = std::min<long>(v, 256);
        }
        return n;
    }();
    return cached;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 4096) throw numeric_input_error("gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

double upper_gamma(double z, double a) {
    if (!(a > 0.0)) throw numeric_input_error("upper_gamma: a must be positive");
    if (z <= 0.0) {
        // Gamma(z, a) = (Gamma(z+1, a) - a^z e^{-a}) / z, recursing to z > 0.
        return (upper_gamma(z + 1.0, a) - std::exp(z * std::log(a) - a)) / z;
    }
    if (a < z + 1.0) return std::exp(std::lgamma(z)) * (1.0 - gamma_p_series(z, a));
    return upper_gamma_cf(z, a);
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return sum * half;
}

std::vector<std::pair<double, double>> singular_quadrature(double a, double b,
                                                           std::span<const double> sing,
                                                           int nodes_per_panel, double ratio,
                                                           double floor_rel, double max_panel) {
    if (!(b > a)) throw numeric_input_error("singular_quadrature: empty range");
    // Collect breakpoints: endpoints plus interior singular points.
    std::vector<double> brk{a, b};
    std::vector<double> spts(sing.begin(), sing.end());
    for (double s : spts)
        if (s > a && s < b) brk.push_back(s);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    auto is_singular = [&](double x) {
        for (double s : spts)
            if (x == s) return true;
        return false;
    };

    std::vector<std::pair<double, double>> panels; // (lo, hi)
    for (std::size_t seg = 0; seg + 1 < brk.size(); ++seg) {
        double lo = brk[seg], hi = brk[seg + 1];
        double len = hi - lo;
        bool sl = is_singular(lo), sh = is_singular(hi);
        // Geometric panels toward each singular end; a plain composite
        // rule otherwise.
        double floor_len = len * floor_rel;
        if (sl && sh) {
            double mid = 0.5 * (lo + hi);
            double edge = mid;
            while (edge - lo > floor_len) {
                double next = lo + (edge - lo) * ratio;
                panels.emplace_back(next, edge);
                edge = next;
            }
            edge = mid;
            while (hi - edge > floor_len) {
                double next = hi - (hi - edge) * ratio;
                panels.emplace_back(edge, next);
                edge = next;
            }
        } else if (sh) {
            double rem = len;
            double cur = lo;
            while (rem > floor_len) {
                double next_rem = rem * ratio;
                panels.emplace_back(cur, hi - next_rem);
                cur = hi - next_rem;
                rem = next_rem;
            }
        } else if (sl) {
            double rem = len;
            double cur = hi;
            while (rem > floor_len) {
                double next_rem = rem * ratio;
                panels.emplace_back(lo + next_rem, cur);
                cur = lo + next_rem;
                rem = next_rem;
            }
        } else {
            int parts = 4;
            for (int k = 0; k < parts; ++k)
                panels.emplace_back(lo + len * k / parts, lo + len * (k + 1) / parts);
        }
    }

    if (max_panel > 0.0) {
        std::vector<std::pair<double, double>> split;
        split.reserve(panels.size());
        for (const auto& [lo, hi] : panels) {
            int parts = static_cast<int>(std::ceil((hi - lo) / max_panel));
            if (parts < 1) parts = 1;
            for (int k = 0; k < parts; ++k)
                split.emplace_back(lo + (hi - lo) * k / parts, lo + (hi - lo) * (k + 1) / parts);
        }
        panels.swap(split);
    }

    const GaussRule& g = gauss_legendre(nodes_per_panel);
    std::vector<std::pair<double, double>> out;
    out.reserve(panels.size() * g.nodes.size());
    for (const auto& [lo, hi] : panels) {
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < g.nodes.size(); ++q)
            out.emplace_back(mid + half * g.nodes[q], half * g.weights[q]);
    }
    return out;
}

double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> sing, int nodes_per_panel, double ratio,
                          double floor_rel, double max_panel) {
    auto q = singular_quadrature(a, b, sing, nodes_per_panel, ratio, floor_rel, max_panel);
    double total = 0.0;
    for (const auto& [x, w] : q) total += w * f(x);
    return total;
}

DenseLU::DenseLU(std::vector<double> a, std::size_t n) : lu_(std::move(a)), piv_(n), n_(n) {
    if (lu_.size() != n * n) throw numeric_input_error("DenseLU: matrix size mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_[i * n + k]) > std::abs(lu_[p * n + k])) p = i;
        piv_[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[p * n + j]);
        double d = lu_[k * n + k];
        if (d == 0.0) throw numeric_input_error("DenseLU: singular matrix");
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = lu_[i * n + k] / d;
            lu_[i * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= m * lu_[k * n + j];
        }
    }
}

std::vector<double> DenseLU::solve(const std::vector<double>& b) const {
    if (b.size() != n_) throw numeric_input_error("DenseLU: rhs size mismatch");
    std::vector<double> x = b;
    for (std::size_t k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        for (std::size_t i = k + 1; i < n_; ++i) x[i] -= lu_[i * n_ + k] * x[k];
    }
    for (std::size_t k = n_; k-- > 0;) {
        for (std::size_t j = k + 1; j < n_; ++j) x[k] -= lu_[k * n_ + j] * x[j];
        x[k] /= lu_[k * n_ + k];
    }
    return x;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int nt = std::min<std::size_t>(max_threads(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace speclap
