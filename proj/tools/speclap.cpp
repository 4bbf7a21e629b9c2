// speclap: command-line front end for the spectral fractional Laplacian
// library. Commands emit deterministic CSV tables; every table carries a
// provenance comment naming the quantity it tabulates.
//
// Exit codes: 0 success, 2 configuration/validation failure, 3 convergence
// failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "speclap/conformance.hpp"
#include "speclap/csv.hpp"
#include "speclap/large.hpp"

namespace {

using namespace speclap;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Config file: flat key=value lines under [section] headers. Values for keys
// the user already set on the command line are ignored (flags win).

struct FileConfig {
    std::map<std::string, std::pair<std::string, int>> kv; // section.key -> (value, line)
    std::vector<std::string> errors;
    std::string file;

    void load(const std::string& path) {
        file = path;
        std::ifstream in(path);
        if (!in) {
            errors.push_back(path + ": cannot open config file");
            return;
        }
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            auto last = line.find_last_not_of(" \t\r");
            std::string t = line.substr(first, last - first + 1);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']' || t.size() < 3) {
                    errors.push_back(path + ":" + std::to_string(lineno) +
                                     ": malformed section header '" + t + "'");
                    continue;
                }
                section = t.substr(1, t.size() - 2);
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos) {
                errors.push_back(path + ":" + std::to_string(lineno) +
                                 ": expected key=value, got '" + t + "'");
                continue;
            }
            std::string key = t.substr(0, eq);
            std::string val = t.substr(eq + 1);
            auto trim = [](std::string& s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            trim(key);
            trim(val);
            if (key.empty()) {
                errors.push_back(path + ":" + std::to_string(lineno) + ": empty key");
                continue;
            }
            std::string full = section.empty() ? key : section + "." + key;
            kv[full] = {val, lineno};
        }
    }

    // Overlay a file value onto `var` when the flag was not given on the
    // command line. Records a line-anchored diagnostic on parse failure.
    template <typename T>
    void apply(const CLI::Option* opt, const std::string& key, T& var) {
        if (opt && opt->count() > 0) return;
        auto it = kv.find(key);
        if (it == kv.end()) return;
        std::istringstream is(it->second.first);
        T parsed{};
        if constexpr (std::is_same_v<T, std::string>) {
            parsed = it->second.first;
        } else {
            if (!(is >> parsed) || !(is >> std::ws).eof()) {
                errors.push_back(file + ":" + std::to_string(it->second.second) + ": " + key +
                                 ": cannot parse '" + it->second.first + "'");
                return;
            }
        }
        var = parsed;
        used.insert(key);
    }

    std::set<std::string> used;
};

double parse_scalar_token(const std::string& tok, bool& ok) {
    ok = true;
    if (tok == "pi") return kPi;
    if (tok == "2pi") return 2.0 * kPi;
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) ok = false;
        return v;
    } catch (...) {
        ok = false;
        return 0.0;
    }
}

// ---------------------------------------------------------------------------
// Shared options across commands.

struct CommonOpts {
    std::string config_path;
    std::string domain_spec = "interval:pi";
    double s = 0.5;
    int truncation = 0; // 0 = per-kind default
    int grid_n = 0;     // 0 = per-command default
    double grid_ratio = 0.75;
    double delta_min_rel = 0.0; // 0 = per-command default
    std::string output = "-";
    std::uint64_t seed = 987654321ULL;

    CLI::Option *o_config{}, *o_domain{}, *o_s{}, *o_trunc{}, *o_grid_n{}, *o_grid_ratio{},
        *o_delta_min{}, *o_output{}, *o_seed{};

    // Rebind the option pointers to the active subcommand; `add` runs for
    // every subcommand and leaves the pointers on the last one.
    void bind(CLI::App* cmd) {
        o_config = cmd->get_option("--config");
        o_domain = cmd->get_option("--domain");
        o_s = cmd->get_option("--s");
        o_trunc = cmd->get_option("--truncation");
        o_grid_n = cmd->get_option("--grid-n");
        o_grid_ratio = cmd->get_option("--grid-ratio");
        o_delta_min = cmd->get_option("--delta-min-rel");
        o_output = cmd->get_option("--output");
        o_seed = cmd->get_option("--seed");
    }

    void add(CLI::App* cmd) {
        o_config = cmd->add_option("--config", config_path,
                                   "Config file (key=value lines under [section] headers; "
                                   "command-line flags take precedence)");
        o_domain = cmd->add_option("--domain", domain_spec,
                                   "Domain: interval:<len> or rectangle:<lx>x<ly> "
                                   "(lengths accept 'pi')");
        o_s = cmd->add_option("--s", s, "Fractional order s in (0, 1)");
        o_trunc = cmd->add_option("--truncation", truncation, "Spectral truncation per axis");
        o_grid_n = cmd->add_option("--grid-n", grid_n, "Grid node budget (per axis in 2D)");
        o_grid_ratio = cmd->add_option("--grid-ratio", grid_ratio, "Grid grading ratio in (0,1)");
        o_delta_min = cmd->add_option("--delta-min-rel", delta_min_rel,
                                      "Smallest node boundary distance over the diameter");
        o_output = cmd->add_option("--output", output, "Output path ('-' = stdout)");
        o_seed = cmd->add_option("--seed", seed, "Random seed for probe sampling");
    }

    void overlay(FileConfig& fc) {
        fc.apply(o_domain, "domain.spec", domain_spec);
        fc.apply(o_s, "run.s", s);
        fc.apply(o_trunc, "domain.truncation", truncation);
        fc.apply(o_grid_n, "grid.n", grid_n);
        fc.apply(o_grid_ratio, "grid.ratio", grid_ratio);
        fc.apply(o_delta_min, "grid.delta_min_rel", delta_min_rel);
        fc.apply(o_output, "run.output", output);
        fc.apply(o_seed, "run.seed", seed);
    }
};

Domain make_domain(const CommonOpts& c, std::vector<std::string>& errors) {
    std::string spec = c.domain_spec;
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "interval") {
        bool ok = true;
        double len = rest.empty() ? kPi : parse_scalar_token(rest, ok);
        if (!ok || !(len > 0.0)) {
            errors.push_back("domain: bad interval length '" + rest + "'");
            len = kPi;
        }
        int tr = c.truncation > 0 ? c.truncation : 256;
        return Domain::interval(len, tr);
    }
    if (kind == "rectangle") {
        auto x = rest.find('x');
        bool ok1 = true, ok2 = true;
        double lx = kPi, ly = 2.0;
        if (x == std::string::npos) {
            errors.push_back("domain: rectangle spec needs <lx>x<ly>, got '" + rest + "'");
        } else {
            lx = parse_scalar_token(rest.substr(0, x), ok1);
            ly = parse_scalar_token(rest.substr(x + 1), ok2);
            if (!ok1 || !ok2 || !(lx > 0.0) || !(ly > 0.0)) {
                errors.push_back("domain: bad rectangle lengths '" + rest + "'");
                lx = kPi;
                ly = 2.0;
            }
        }
        int tr = c.truncation > 0 ? c.truncation : 96;
        return Domain::rectangle(lx, ly, tr);
    }
    errors.push_back("domain: unknown kind '" + kind + "' (use interval or rectangle)");
    return Domain::interval(kPi, 256);
}

void validate_common(const CommonOpts& c, std::vector<std::string>& errors, bool allow_s1) {
    double hi = allow_s1 ? 1.0 + 1e-12 : 1.0;
    if (!(c.s > 0.0) || !(c.s < hi))
        errors.push_back("s: must lie in (0, 1)" + std::string(allow_s1 ? " or equal 1" : ""));
    if (!(c.grid_ratio > 0.0 && c.grid_ratio < 1.0))
        errors.push_back("grid-ratio: must lie in (0, 1)");
    if (c.grid_n < 0) errors.push_back("grid-n: must be positive");
    if (c.delta_min_rel < 0.0) errors.push_back("delta-min-rel: must be nonnegative");
    if (c.truncation < 0) errors.push_back("truncation: must be positive");
}

int fail_validation(const std::vector<std::string>& errors) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return 2;
}

void emit(const CsvWriter& w, const std::string& output) {
    if (output == "-")
        std::cout << w.to_string();
    else
        w.write(output);
}

void emit_string(const std::string& text, const std::string& output) {
    if (output == "-") {
        std::cout << text;
        return;
    }
    std::error_code ec;
    auto status = std::filesystem::status(output, ec);
    if (!ec && std::filesystem::exists(status) && !std::filesystem::is_regular_file(status)) {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + output);
        out << text;
        return;
    }
    std::string tmp = output + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << text;
    }
    std::filesystem::rename(tmp, output);
}

Grid make_grid(const Domain& dom, const CommonOpts& c, int default_n,
               double default_delta_rel) {
    int n = c.grid_n > 0 ? c.grid_n : default_n;
    double dmr = c.delta_min_rel > 0.0 ? c.delta_min_rel : default_delta_rel;
    double dmin = dmr > 0.0 ? dmr * dom.diameter() : -1.0;
    return Grid(dom, n, c.grid_ratio, dmin);
}

void add_node_row(CsvWriter& w, const Domain& dom, const Point& p,
                  std::vector<double> tail) {
    std::vector<double> row{p.x};
    if (dom.dim() == 2) row.push_back(p.y);
    row.push_back(dom.delta(p));
    row.insert(row.end(), tail.begin(), tail.end());
    w.add_row(row);
}

std::vector<std::string> node_columns(const Domain& dom, std::vector<std::string> tail) {
    std::vector<std::string> cols{"x"};
    if (dom.dim() == 2) cols.push_back("y");
    cols.push_back("delta");
    cols.insert(cols.end(), tail.begin(), tail.end());
    return cols;
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_basis(const CommonOpts& c, int modes) {
    std::vector<std::string> errors;
    validate_common(c, errors, true);
    Domain dom = make_domain(c, errors);
    if (modes <= 0) errors.push_back("modes: must be positive");
    if (!errors.empty()) return fail_validation(errors);
    CsvWriter w("dirichlet-sine-eigenbasis", {"mode", "freq_x", "freq_y", "eigenvalue"});
    w.add_comment("domain: " + dom.describe());
    std::size_t count = std::min<std::size_t>(modes, dom.mode_count());
    for (std::size_t m = 0; m < count; ++m) {
        auto f = dom.mode_freq(m);
        w.add_row({static_cast<double>(m), static_cast<double>(f[0]),
                   static_cast<double>(f[1]), dom.eigenvalue(m)});
    }
    emit(w, c.output);
    return 0;
}

int cmd_kernel(const CommonOpts& c, const std::string& quantity, int probes) {
    std::vector<std::string> errors;
    bool classical = c.s == 1.0 && quantity == "green";
    validate_common(c, errors, classical);
    Domain dom = make_domain(c, errors);
    if (quantity != "green" && quantity != "jumping" && quantity != "killing")
        errors.push_back("quantity: one of green | jumping | killing");
    if (probes < 8) errors.push_back("probes: need at least 8");
    if (!errors.empty()) return fail_validation(errors);

    KernelEvaluator kernel(dom, c.s);
    Grid grid(dom, probes, c.grid_ratio);
    const auto& nodes = grid.nodes();
    std::string anchor = quantity == "green"     ? "fractional-green-function"
                         : quantity == "jumping" ? "jumping-kernel"
                                                 : "killing-measure-density";
    if (quantity == "killing") {
        CsvWriter w(anchor, node_columns(dom, {"kappa"}));
        w.add_comment("s: " + CsvWriter::format_number(c.s));
        for (const auto& p : nodes) add_node_row(w, dom, p, {kernel.killing(p)});
        emit(w, c.output);
        return 0;
    }
    std::vector<std::string> cols{"x1"};
    if (dom.dim() == 2) cols.push_back("y1");
    cols.push_back("x2");
    if (dom.dim() == 2) cols.push_back("y2");
    cols.push_back(quantity == "green" ? "green" : "jumping");
    CsvWriter w(anchor, cols);
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            double v = quantity == "green" ? kernel.green(nodes[i], nodes[j])
                                           : kernel.jumping(nodes[i], nodes[j]);
            std::vector<double> row{nodes[i].x};
            if (dom.dim() == 2) row.push_back(nodes[i].y);
            row.push_back(nodes[j].x);
            if (dom.dim() == 2) row.push_back(nodes[j].y);
            row.push_back(v);
            w.add_row(row);
        }
    emit(w, c.output);
    return 0;
}

int cmd_poisson(const CommonOpts& c, int probes) {
    std::vector<std::string> errors;
    validate_common(c, errors, true);
    Domain dom = make_domain(c, errors);
    if (probes < 8) errors.push_back("probes: need at least 8");
    if (!errors.empty()) return fail_validation(errors);

    KernelEvaluator kernel(dom, c.s);
    Grid grid(dom, probes, c.grid_ratio);
    std::vector<BoundaryPoint> zs;
    for (int f = 0; f < dom.face_count(); ++f) {
        if (dom.kind() == DomainKind::interval) {
            zs.push_back({f, 0.0});
        } else {
            for (double frac : {0.25, 0.5, 0.75}) zs.push_back({f, frac * dom.face_length(f)});
        }
    }
    std::vector<std::string> cols{"x"};
    if (dom.dim() == 2) cols.push_back("y");
    cols.insert(cols.end(), {"delta", "face", "param", "poisson"});
    CsvWriter w("fractional-poisson-kernel", cols);
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    for (const auto& p : grid.nodes())
        for (const auto& z : zs) {
            std::vector<double> row{p.x};
            if (dom.dim() == 2) row.push_back(p.y);
            row.insert(row.end(), {dom.delta(p), static_cast<double>(z.face), z.param,
                                   kernel.poisson(p, z)});
            w.add_row(row);
        }
    emit(w, c.output);
    return 0;
}

int cmd_h1(const CommonOpts& c, int probes) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    if (probes < 4) errors.push_back("probes: need at least 4 for the rate fit");
    if (!errors.empty()) return fail_validation(errors);

    KernelEvaluator kernel(dom, c.s);
    // Log-spaced boundary distances over two decades, scaled so the interval
    // of length pi probes exactly [1e-3, 1e-1].
    double scale = dom.diameter() / kPi;
    double lo = 1e-3 * scale, hi = 1e-1 * scale;
    std::vector<double> deltas(probes), values(probes);
    CsvWriter w("boundary-reference-weight", node_columns(dom, {"h1", "normalized"}));
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    for (int i = 0; i < probes; ++i) {
        double d = lo * std::pow(hi / lo, static_cast<double>(i) / (probes - 1));
        Point p{d, dom.kind() == DomainKind::rectangle ? 0.5 * dom.length(1) : 0.0};
        double h = kernel.h1(p);
        deltas[i] = d;
        values[i] = h;
        add_node_row(w, dom, p, {h, std::pow(d, 2.0 - 2.0 * c.s) * h});
    }
    RateFit fit = fit_boundary_rate(deltas, values);
    w.add_comment("rate-fit exponent: " + CsvWriter::format_number(fit.rate));
    w.add_comment("rate-fit log-c: " + CsvWriter::format_number(fit.log_c));
    w.add_comment("rate-fit r-squared: " + CsvWriter::format_number(fit.r_squared));
    emit(w, c.output);
    return 0;
}

int cmd_solve_linear(const CommonOpts& c, const std::string& measure_path) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    if (measure_path.empty()) errors.push_back("measure: a measure file is required");
    if (!errors.empty()) return fail_validation(errors);

    auto kernel = std::make_shared<KernelEvaluator>(dom, c.s);
    auto grid = std::make_shared<Grid>(
        make_grid(dom, c, dom.kind() == DomainKind::interval ? 96 : 32, 0.0));
    DirichletSolver solver(kernel, grid);
    MeasureData data = parse_measure_file(measure_path, dom, grid);
    LinearReport rep;
    GridFunction u = solver.solve(data.mu, data.zeta, &rep);

    CsvWriter w("linear-dirichlet-solution", node_columns(dom, {"u"}));
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    w.add_comment("weighted-l1: " + CsvWriter::format_number(rep.weighted_l1));
    w.add_comment("data-norm: " + CsvWriter::format_number(rep.data_norm));
    w.add_comment("stability-ratio: " + CsvWriter::format_number(rep.stability_ratio));
    w.add_comment("singular-nodes: " + std::to_string(rep.singular_nodes.size()));
    for (std::size_t i = 0; i < grid->size(); ++i)
        add_node_row(w, dom, grid->nodes()[i], {u[i]});
    emit(w, c.output);
    return 0;
}

int cmd_solve_semilinear(const CommonOpts& c, const std::string& measure_path,
                         const std::string& nonlinearity, double param, double tol,
                         int max_iter) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    if (measure_path.empty()) errors.push_back("measure: a measure file is required");
    if (!(tol > 0.0)) errors.push_back("tol: must be positive");
    if (max_iter < 1) errors.push_back("max-iter: must be positive");
    if (!errors.empty()) return fail_validation(errors);

    auto kernel = std::make_shared<KernelEvaluator>(dom, c.s);
    auto grid = std::make_shared<Grid>(
        make_grid(dom, c, dom.kind() == DomainKind::interval ? 96 : 32, 0.0));
    DirichletSolver solver(kernel, grid);
    MeasureData data = parse_measure_file(measure_path, dom, grid);
    if (!data.mu.empty())
        return fail_validation({"measure: the semilinear solver accepts boundary data only"});
    Nonlinearity g = make_nonlinearity(nonlinearity, param, c.s);
    SemilinearOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    SemilinearReport rep;
    GridFunction u = solve_semilinear(solver, g, data.zeta, opts, &rep);

    CsvWriter w("semilinear-dirichlet-solution", node_columns(dom, {"u"}));
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    w.add_comment("nonlinearity: " + nonlinearity);
    w.add_comment("iterations: " + std::to_string(rep.iterations));
    w.add_comment("last-increment: " + CsvWriter::format_number(rep.last_increment));
    w.add_comment("converged: " + std::string(rep.converged ? "1" : "0"));
    for (std::size_t i = 0; i < grid->size(); ++i)
        add_node_row(w, dom, grid->nodes()[i], {u[i]});
    emit(w, c.output);
    if (!rep.converged) {
        std::cerr << "error: monotone iteration did not converge\n";
        return 3;
    }
    return 0;
}

int cmd_large(const CommonOpts& c, LargeRunConfig cfg, const std::string& schedule_spec) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    cfg.s = c.s;
    if (!schedule_spec.empty()) {
        cfg.schedule.clear();
        std::istringstream is(schedule_spec);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                cfg.schedule.push_back(std::stod(tok));
            } catch (...) {
                errors.push_back("schedule: cannot parse '" + tok + "'");
            }
        }
    }
    if (!errors.empty()) return fail_validation(errors);
    cfg.validate(); // throws invalid_configuration -> exit 2 in main

    auto kernel = std::make_shared<KernelEvaluator>(dom, c.s);
    auto grid = std::make_shared<Grid>(make_grid(dom, c, 256, 1e-6));
    DirichletSolver solver(kernel, grid);
    LargeReport rep;
    GridFunction u = solve_large(solver, cfg, &rep);

    CsvWriter w("boundary-blowup-solution", node_columns(dom, {"u"}));
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    w.add_comment("p: " + CsvWriter::format_number(cfg.p));
    w.add_comment("last-datum: " + CsvWriter::format_number(rep.last_datum));
    w.add_comment("stagnated: " + std::string(rep.stagnated ? "1" : "0"));
    w.add_comment("monotone-defect: " + CsvWriter::format_number(rep.monotone_defect));
    w.add_comment("domination-defect: " + CsvWriter::format_number(rep.domination_defect));
    w.add_comment("rate-fit exponent: " + CsvWriter::format_number(rep.rate.rate));
    w.add_comment("rate-fit log-c: " + CsvWriter::format_number(rep.rate.log_c));
    w.add_comment("rate-fit r-squared: " + CsvWriter::format_number(rep.rate.r_squared));
    w.add_comment("fitted-c: " + CsvWriter::format_number(rep.fitted_c));
    for (std::size_t i = 0; i < grid->size(); ++i)
        add_node_row(w, dom, grid->nodes()[i], {u[i]});
    emit(w, c.output);
    if (!rep.stagnated) {
        std::cerr << "error: the approximating sequence did not stagnate on the schedule\n";
        return 3;
    }
    return 0;
}

int cmd_trace(const CommonOpts& c, const std::string& measure_path, double t) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    if (measure_path.empty()) errors.push_back("measure: a measure file is required");
    if (!errors.empty()) return fail_validation(errors);

    auto kernel = std::make_shared<KernelEvaluator>(dom, c.s);
    auto grid = std::make_shared<Grid>(
        make_grid(dom, c, dom.kind() == DomainKind::interval ? 96 : 32, 0.0));
    DirichletSolver solver(kernel, grid);
    MeasureData data = parse_measure_file(measure_path, dom, grid);
    if (t <= 0.0) t = dom.diameter() / 16.0;
    auto u_eval = [&](const Point& p) { return solver.evaluate(data.mu, data.zeta, p); };
    auto phi = [](const BoundaryPoint&) { return 1.0; };

    CsvWriter w("weighted-boundary-trace", {"kind", "t", "value"});
    w.add_comment("s: " + CsvWriter::format_number(c.s));
    for (double tv : {t, 0.5 * t, 0.25 * t})
        w.add_text_row({"strip", CsvWriter::format_number(tv),
                        CsvWriter::format_number(solver.boundary_trace(u_eval, phi, tv))});
    double ex = solver.extrapolated_trace(u_eval, phi, t);
    w.add_text_row({"extrapolated", CsvWriter::format_number(t), CsvWriter::format_number(ex)});
    w.add_text_row({"boundary-variation", "0",
                    CsvWriter::format_number(boundary_variation(dom, data.zeta))});
    emit(w, c.output);
    return 0;
}

int cmd_verify(const CommonOpts& c) {
    std::vector<std::string> errors;
    validate_common(c, errors, false);
    Domain dom = make_domain(c, errors);
    if (!errors.empty()) return fail_validation(errors);
    ConformanceReport rep = run_conformance(dom, c.s, c.seed);
    emit_string(rep.to_csv(), c.output);
    if (!rep.all_pass()) {
        for (const auto& chk : rep.checks)
            if (!chk.pass)
                std::cerr << "error: conformance check failed: " << chk.name << " (violation "
                          << chk.max_violation << ")\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"speclap: spectral fractional Laplacian toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    FileConfig fc;

    int modes = 64;
    int probes = 12;
    int h1_probes = 40;
    std::string quantity = "green";
    std::string measure_path;
    std::string nonlinearity = "linear";
    double nl_param = 1.0;
    double sl_tol = 1e-8;
    int sl_max_iter = 500;
    LargeRunConfig lcfg;
    std::string schedule_spec;
    double trace_t = 0.0;

    auto* basis = app.add_subcommand("basis", "Tabulate the Dirichlet sine eigenbasis");
    basis->add_option("--modes", modes, "Number of modes to list");
    auto* kern = app.add_subcommand("kernel", "Tabulate green | jumping | killing");
    auto* o_quantity = kern->add_option("--quantity", quantity, "green | jumping | killing");
    auto* o_probes_k = kern->add_option("--probes", probes, "Probe lattice budget");
    auto* pois = app.add_subcommand("poisson", "Tabulate the Poisson kernel");
    auto* o_probes_p = pois->add_option("--probes", probes, "Probe lattice budget");
    auto* h1c = app.add_subcommand("h1", "Tabulate the boundary reference weight with a rate fit");
    auto* o_probes_h = h1c->add_option("--probes", h1_probes, "Probes along the distance decade");
    auto* lin = app.add_subcommand("solve-linear", "Solve the linear problem with measure data");
    auto* o_measure_l = lin->add_option("--measure", measure_path, "Measure file");
    auto* semi = app.add_subcommand("solve-semilinear",
                                    "Solve the semilinear problem by monotone iteration");
    auto* o_measure_s = semi->add_option("--measure", measure_path, "Measure file (boundary)");
    auto* o_nl = semi->add_option("--nonlinearity", nonlinearity, "zero | linear | power");
    auto* o_nl_param = semi->add_option("--param", nl_param, "Nonlinearity parameter (p)");
    auto* o_sl_tol = semi->add_option("--tol", sl_tol, "Weighted-L1 increment tolerance");
    auto* o_sl_iter = semi->add_option("--max-iter", sl_max_iter, "Iteration cap");
    auto* large = app.add_subcommand("large", "Boundary blow-up solution for power absorption");
    auto* o_p = large->add_option("--p", lcfg.p, "Absorption exponent in (1+s, 1/(1-s))");
    auto* o_sched = large->add_option("--schedule", schedule_spec, "Comma-separated datum list");
    auto* o_stag = large->add_option("--stagnation-tol", lcfg.stagnation_tol,
                                     "Relative interior stagnation threshold");
    auto* o_core = large->add_option("--core-fraction", lcfg.core_fraction,
                                     "Interior core depth over the diameter");
    auto* o_flo = large->add_option("--fit-lo", lcfg.fit_lo, "Rate-fit window lower edge");
    auto* o_fhi = large->add_option("--fit-hi", lcfg.fit_hi, "Rate-fit window upper edge");
    auto* o_itol = large->add_option("--inner-tol", lcfg.inner_tol, "Inner iteration tolerance");
    auto* o_iiter = large->add_option("--inner-max-iter", lcfg.inner_max_iter,
                                      "Inner iteration cap");
    auto* trace = app.add_subcommand("trace", "Weighted boundary trace of a representation");
    auto* o_measure_t = trace->add_option("--measure", measure_path, "Measure file");
    auto* o_trace_t = trace->add_option("--t", trace_t, "Outer strip width (default diam/16)");
    auto* verify = app.add_subcommand("verify", "Run the conformance suite");

    for (CLI::App* cmd : {basis, kern, pois, h1c, lin, semi, large, trace, verify})
        common.add(cmd);

    CLI11_PARSE(app, argc, argv);

    CLI::App* cmd = app.get_subcommands().front();
    common.bind(cmd);
    if (common.o_config->count() > 0) {
        fc.load(common.config_path);
        common.overlay(fc);
        fc.apply(o_quantity, "kernel.quantity", quantity);
        fc.apply(o_probes_k, "kernel.probes", probes);
        fc.apply(o_probes_p, "poisson.probes", probes);
        fc.apply(o_probes_h, "h1.probes", h1_probes);
        fc.apply(o_measure_l, "measure.file", measure_path);
        fc.apply(o_measure_s, "measure.file", measure_path);
        fc.apply(o_measure_t, "measure.file", measure_path);
        fc.apply(o_nl, "semilinear.nonlinearity", nonlinearity);
        fc.apply(o_nl_param, "semilinear.param", nl_param);
        fc.apply(o_sl_tol, "semilinear.tol", sl_tol);
        fc.apply(o_sl_iter, "semilinear.max_iter", sl_max_iter);
        fc.apply(o_p, "large.p", lcfg.p);
        fc.apply(o_sched, "large.schedule", schedule_spec);
        fc.apply(o_stag, "large.stagnation_tol", lcfg.stagnation_tol);
        fc.apply(o_core, "large.core_fraction", lcfg.core_fraction);
        fc.apply(o_flo, "large.fit_lo", lcfg.fit_lo);
        fc.apply(o_fhi, "large.fit_hi", lcfg.fit_hi);
        fc.apply(o_itol, "large.inner_tol", lcfg.inner_tol);
        fc.apply(o_iiter, "large.inner_max_iter", lcfg.inner_max_iter);
        if (!fc.errors.empty()) return fail_validation(fc.errors);
    }

    try {
        if (cmd == basis) return cmd_basis(common, modes);
        if (cmd == kern) return cmd_kernel(common, quantity, probes);
        if (cmd == pois) return cmd_poisson(common, probes);
        if (cmd == h1c) return cmd_h1(common, h1_probes);
        if (cmd == lin) return cmd_solve_linear(common, measure_path);
        if (cmd == semi)
            return cmd_solve_semilinear(common, measure_path, nonlinearity, nl_param, sl_tol,
                                        sl_max_iter);
        if (cmd == large) return cmd_large(common, lcfg, schedule_spec);
        if (cmd == trace) return cmd_trace(common, measure_path, trace_t);
        if (cmd == verify) return cmd_verify(common);
    } catch (const invalid_configuration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_measure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
