// Experiment runner: method suites over generated or loaded problems, CSV
// traces, a_inf distributions and optional SVG plots.
#include "relaxcd/relaxcd.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(rcd_status status, const char *what) {
    if (status != RCD_OK) {
        throw CliError(std::string(what) + ": " + rcd_status_label(status) + ": " + rcd_last_error());
    }
}

std::string num(double v) {
    if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ext(const rcd_extended &e) {
    switch (e.tag) {
        case RCD_POS_INF: return "inf";
        case RCD_NEG_INF: return "-inf";
        case RCD_FINITE: break;
    }
    return num(e.value);
}

ordered_json ext_json(const rcd_extended &e) {
    if (e.tag == RCD_FINITE) { return e.value; }
    return e.tag == RCD_POS_INF ? "inf" : "-inf";
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) { out.push_back(item); }
    }
    return out;
}

// "123" or "<k>N" (k times the problem order).
std::uint64_t parse_budget(const std::string &text, std::size_t n) {
    if (text.empty()) { throw CliError("empty --budget-calls"); }
    std::size_t pos = 0;
    const bool per_n = text.back() == 'N' || text.back() == 'n';
    const std::string digits = per_n ? text.substr(0, text.size() - 1) : text;
    std::uint64_t value = 0;
    try {
        value = std::stoull(digits.empty() ? "1" : digits, &pos);
    } catch (const std::exception &) {
        throw CliError("invalid --budget-calls '" + text + "'");
    }
    if (!digits.empty() && pos != digits.size()) { throw CliError("invalid --budget-calls '" + text + "'"); }
    if (value == 0) { throw CliError("--budget-calls must be positive"); }
    return per_n ? value * n : value;
}

std::ofstream open_out(const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw CliError("cannot write '" + path.string() + "'"); }
    return out;
}

struct Curve {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (column calls, objective)
};

void write_svg(const fs::path &path, const std::vector<Curve> &curves) {
    const double width = 800, height = 500, left = 80, right = 160, top = 30, bottom = 60;
    double xmax = 1, ymin = INFINITY, ymax = -INFINITY;
    for (const auto &c : curves) {
        for (const auto &[x, y] : c.points) {
            xmax = std::max(xmax, x);
            if (y > 0) {
                ymin = std::min(ymin, std::log10(y));
                ymax = std::max(ymax, std::log10(y));
            }
        }
    }
    if (!std::isfinite(ymin)) { ymin = -1, ymax = 0; }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin) { ymax = ymin + 1; }
    const double pw = width - left - right, ph = height - top - bottom;
    const auto sx = [&](double x) { return left + pw * x / xmax; };
    const auto sy = [&](double ly) { return top + ph * (ymax - ly) / (ymax - ymin); };
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = ymin; e <= ymax; e += std::max(1.0, std::floor((ymax - ymin) / 10))) {
        out << "<text x=\"" << left - 8 << "\" y=\"" << sy(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
        out << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << sy(e) << "\" y2=\"" << sy(e)
            << "\" stroke=\"#ddd\"/>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        const double x = xmax * t / 4;
        out << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(x)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">matrix-column calls</text>\n";
    out << "<text x=\"20\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 20 " << top + ph / 2
        << ")\" text-anchor=\"middle\">objective</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char *color = colors[c % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &[x, y] : curves[c].points) {
            if (y > 0) { out << sx(x) << ',' << sy(std::log10(y)) << ' '; }
        }
        out << "\"/>\n";
        const double ly = top + 20 + 18 * static_cast<double>(c);
        out << "<line x1=\"" << left + pw + 15 << "\" x2=\"" << left + pw + 40 << "\" y1=\"" << ly << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << curves[c].label << "</text>\n";
    }
    out << "</svg>\n";
}

struct Settings {
    std::string example = "Ex1";
    std::string methods = "CG-D,CD-D,SR-D,H-R,BI-R";
    std::string budget = "50N";
    double tol = 0.0;
    double rel_tol = 1e-13;
    std::uint64_t seed = 0;
    std::string out = "out";
    bool plot = false;
    std::size_t replicates = 0;
    std::string matrix;
    unsigned threads = 1;
    bool wall_clock = false;
    bool random_ties = false;
};

ordered_json config_json(const rcd_example_config &c) {
    ordered_json j;
    j["family"] = "Ex" + std::to_string(c.family);
    j["n"] = c.n;
    if (c.family <= 4) {
        j["m"] = c.m;
        j["x_range"] = {c.x_lo, c.x_hi};
    }
    if (c.family <= 3) { j["alpha_range"] = {c.alpha_lo, c.alpha_hi}; }
    if (c.family >= 4) { j["c_range"] = {c.c_lo, c.c_hi}; }
    if (c.family == 3) { j["sparsity"] = c.sparsity; }
    if (c.family == 2 || c.family >= 5) { j["gamma"] = c.gamma; }
    if (c.family == 5) {
        j["beta"] = c.beta;
        j["delta"] = c.delta;
        j["zeta"] = c.zeta;
        j["point_dim"] = c.point_dim;
    }
    if (c.family == 6) { j["path"] = c.path; }
    j["seed"] = c.seed;
    return j;
}

void run_distribution(const Settings &s, const rcd_example_config &cfg, const fs::path &dir) {
    std::vector<rcd_extended> lo(s.replicates), up(s.replicates);
    check(rcd_batch_a_infinity(&cfg, s.replicates, s.threads, lo.data(), up.data()), "a_inf distribution");
    auto out = open_out(dir / "a_infinity.csv");
    out << "seed,a_inf,a_inf_up\n";
    for (std::size_t j = 0; j < s.replicates; ++j) { out << cfg.seed + j << ',' << ext(lo[j]) << ',' << ext(up[j]) << '\n'; }
    std::cout << "wrote " << s.replicates << " rows to " << (dir / "a_infinity.csv").string() << '\n';
}

void run_suite(const Settings &s, const rcd_example_config &cfg, const fs::path &dir) {
    std::vector<rcd_method> methods;
    for (const auto &label : split_list(s.methods)) {
        rcd_method m{};
        check(rcd_method_parse(label.c_str(), &m), "--methods");
        methods.push_back(m);
    }
    if (methods.empty()) { throw CliError("at least one method is required"); }

    rcd_problem *raw = nullptr;
    check(rcd_generate(&cfg, &raw), "problem generation");
    std::unique_ptr<rcd_problem, decltype(&rcd_problem_free)> problem(raw, rcd_problem_free);
    const std::size_t n = rcd_problem_order(problem.get());

    rcd_rate_constants rc{};
    check(rcd_rate_constants_of(problem.get(), &rc), "rate constants");

    rcd_run_options opts;
    rcd_run_options_defaults(&opts);
    opts.max_column_calls = parse_budget(s.budget, n);
    opts.tolerance = s.tol;
    opts.relative_tolerance = s.rel_tol;
    opts.random_ties = s.random_ties ? 1 : 0;
    opts.tie_seed = s.seed;

    ordered_json manifest;
    manifest["config"] = config_json(cfg);
    manifest["seed"] = cfg.seed;
    manifest["N"] = n;
    manifest["const_term"] = rcd_problem_const_term(problem.get());
    manifest["budget_column_calls"] = opts.max_column_calls;
    manifest["tolerance"] = s.tol;
    manifest["relative_tolerance"] = s.rel_tol;
    manifest["rate_constants"] = {{"iota", rc.iota},
                                  {"iota_tilde", rc.iota_tilde},
                                  {"a_inf", ext_json(rc.a_inf)},
                                  {"a_inf_up", ext_json(rc.a_inf_up)},
                                  {"lambda_min_nonzero", rc.lambda_min_nonzero},
                                  {"lambda_max", rc.lambda_max}};
    manifest["runs"] = ordered_json::array();

    std::vector<Curve> curves;
    for (const rcd_method m : methods) {
        rcd_run *rraw = nullptr;
        check(rcd_solve(problem.get(), m, &opts, &rraw), rcd_method_label(m));
        std::unique_ptr<rcd_run, decltype(&rcd_run_free)> run(rraw, rcd_run_free);

        const std::string label = rcd_method_label(m);
        auto out = open_out(dir / (label + ".csv"));
        out << "k,column_calls,coord,step,D,R,s_x,accel" << (s.wall_clock ? ",wall_ns" : "") << '\n';
        Curve curve{label, {}};
        const std::size_t rows = rcd_run_rows(run.get());
        for (std::size_t i = 0; i < rows; ++i) {
            rcd_trace_row r{};
            check(rcd_run_row(run.get(), i, &r), "trace row");
            out << r.k << ',' << r.column_calls << ',' << (r.coord >= 0 ? std::to_string(r.coord) : "") << ','
                << num(r.step) << ',' << num(r.d_value) << ',' << num(r.r_value) << ',' << num(r.s_x) << ','
                << (r.has_accel ? ext(r.accel) : "");
            if (s.wall_clock) { out << ',' << r.wall_ns; }
            out << '\n';
            curve.points.emplace_back(static_cast<double>(r.column_calls), rcd_run_objective(run.get(), i));
        }
        curves.push_back(std::move(curve));

        std::uint64_t steps = 0, iters = 0, calls = 0;
        rcd_run_counts(run.get(), &steps, &iters, &calls);
        const double final_obj = rows > 0 ? rcd_run_objective(run.get(), rows - 1) : 0.0;
        manifest["runs"].push_back({{"method", label},
                                    {"csv", label + ".csv"},
                                    {"termination", rcd_termination_label(rcd_run_termination(run.get()))},
                                    {"cd_steps", steps},
                                    {"cg_iterations", iters},
                                    {"column_calls", calls},
                                    {"final_objective", final_obj}});
        std::cout << label << ": " << rcd_termination_label(rcd_run_termination(run.get())) << " after " << calls
                  << " column calls, objective " << num(final_obj) << '\n';
    }
    open_out(dir / "meta.json") << manifest.dump(2) << '\n';
    if (s.plot) { write_svg(dir / "objective.svg", curves); }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coordinate-descent experiments on quadratic maps and their relaxation"};
    app.set_config("--config", "", "key = value configuration file; flags override it");
    Settings s;
    app.add_option("--example", s.example, "Example family Ex1..Ex6")->capture_default_str();
    app.add_option("--methods", s.methods, "Comma-separated subset of CG-D,CD-D,SR-D,H-R,BI-R")
        ->capture_default_str();
    app.add_option("--budget-calls", s.budget, "Column-call budget, an integer or a multiple of N such as 50N")
        ->capture_default_str();
    app.add_option("--tol", s.tol, "Absolute objective target")->capture_default_str();
    app.add_option("--rel-tol", s.rel_tol, "Objective target relative to its value at k = 0")->capture_default_str();
    app.add_option("--seed", s.seed, "Instance seed")->capture_default_str();
    app.add_option("--out", s.out, "Output directory")->capture_default_str();
    app.add_flag("--plot", s.plot, "Also write objective.svg");
    app.add_option("--replicates", s.replicates, "Distribution mode: number of seeded instances for a_inf");
    app.add_option("--matrix", s.matrix, "Matrix Market file (implies Ex6 unless --example is given)");
    app.add_option("--threads", s.threads, "Workers for distribution mode (0 = all cores)")->capture_default_str();
    app.add_flag("--wall-clock", s.wall_clock, "Append a wall_ns column to traces");
    app.add_flag("--random-ties", s.random_ties, "Break arg-max ties at random (seeded)");

    std::size_t n = 0, m = 0, point_dim = 0;
    double gamma = 0, beta = 0, delta = 0, zeta = 0, sparsity = 0;
    double x_lo = 0, x_hi = 0, alpha_lo = 0, alpha_hi = 0, c_lo = 0, c_hi = 0;
    std::uint64_t budget_bytes = 0;
    auto *o_n = app.add_option("--n", n, "Problem order (Ex1-Ex5)");
    auto *o_m = app.add_option("--m", m, "Columns of X (Ex1-Ex4)");
    auto *o_gamma = app.add_option("--gamma", gamma, "Diagonal shift");
    auto *o_beta = app.add_option("--beta", beta, "Ones-matrix coefficient (Ex5)");
    auto *o_delta = app.add_option("--delta", delta, "Offset added to c (Ex5)");
    auto *o_zeta = app.add_option("--zeta", zeta, "Gaussian kernel bandwidth (Ex5)");
    auto *o_dim = app.add_option("--point-dim", point_dim, "Point dimension (Ex5)");
    auto *o_sparsity = app.add_option("--sparsity", sparsity, "Fraction of zero entries in alpha (Ex3)");
    auto *o_xlo = app.add_option("--x-lo", x_lo, "Lower bound of X entries");
    auto *o_xhi = app.add_option("--x-hi", x_hi, "Upper bound of X entries");
    auto *o_alo = app.add_option("--alpha-lo", alpha_lo, "Lower bound of alpha entries");
    auto *o_ahi = app.add_option("--alpha-hi", alpha_hi, "Upper bound of alpha entries");
    auto *o_clo = app.add_option("--c-lo", c_lo, "Lower bound of c entries");
    auto *o_chi = app.add_option("--c-hi", c_hi, "Upper bound of c entries");
    auto *o_budget = app.add_option("--memory-budget", budget_bytes, "Bytes allowed for densifying Gram matrices");
    auto *o_example = app.get_option("--example");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!s.matrix.empty() && o_example->count() == 0) { s.example = "Ex6"; }
        std::string fam = s.example;
        if (fam.size() >= 2 && (fam[0] == 'E' || fam[0] == 'e') && (fam[1] == 'X' || fam[1] == 'x')) { fam.erase(0, 2); }
        if (fam.size() != 1 || fam[0] < '1' || fam[0] > '6') { throw CliError("unknown --example '" + s.example + "'"); }

        rcd_example_config cfg{};
        check(rcd_example_defaults(fam[0] - '0', &cfg), "--example");
        const auto set = [](CLI::Option *o, auto &dst, auto value) {
            if (o->count() > 0) { dst = value; }
        };
        set(o_n, cfg.n, n);
        set(o_m, cfg.m, m);
        set(o_gamma, cfg.gamma, gamma);
        set(o_beta, cfg.beta, beta);
        set(o_delta, cfg.delta, delta);
        set(o_zeta, cfg.zeta, zeta);
        set(o_dim, cfg.point_dim, point_dim);
        set(o_sparsity, cfg.sparsity, sparsity);
        set(o_xlo, cfg.x_lo, x_lo);
        set(o_xhi, cfg.x_hi, x_hi);
        set(o_alo, cfg.alpha_lo, alpha_lo);
        set(o_ahi, cfg.alpha_hi, alpha_hi);
        set(o_clo, cfg.c_lo, c_lo);
        set(o_chi, cfg.c_hi, c_hi);
        set(o_budget, cfg.memory_budget, budget_bytes);
        cfg.seed = s.seed;
        cfg.path = s.matrix.c_str();

        const fs::path dir(s.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) { throw CliError("cannot create '" + dir.string() + "': " + ec.message()); }

        if (s.replicates > 0) {
            run_distribution(s, cfg, dir);
        } else {
            run_suite(s, cfg, dir);
        }
    } catch (const std::exception &e) {
        std::cerr << "relaxcd: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
