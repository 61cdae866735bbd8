// gll: Lipschitz-space analysis of infinite graphs from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gll/ball.hpp"
#include "gll/errors.hpp"
#include "gll/function.hpp"
#include "gll/io.hpp"
#include "gll/lipschitz.hpp"
#include "gll/mult_op.hpp"
#include "gll/oracle.hpp"

using namespace gll;

namespace {

struct CommonOpts {
    std::string graph;
    std::string root;
    std::string radius_list = "32";
    std::string format = "json";
    std::string out;
};

std::vector<int> parse_radii(const std::string& s) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t c = s.find(',', pos);
        std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        if (tok.empty()) throw InvalidParameter("bad radius list '" + s + "'");
        out.push_back(std::stoi(tok));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

Graph open_graph(const CommonOpts& o) {
    return make_graph(o.graph, o.root.empty() ? std::nullopt
                                              : std::optional<std::string>(o.root));
}

// DSL text, `witness:<name>[:<arg>]`, or `table:<path>` / `@<path>`
GraphFunction open_function(const std::string& spec) {
    if (spec.rfind("witness:", 0) == 0) return named_witness(spec);
    if (spec.rfind("table:", 0) == 0) return load_table_file(spec.substr(6));
    if (!spec.empty() && spec[0] == '@') return load_table_file(spec.substr(1));
    return parse_expression(spec);
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error("cannot open output file '" + o.out + "'");
    f.write(text.data(), std::streamsize(text.size()));
}

std::string csv_estimate_rows(int radius, const std::string& name, const Estimate& e) {
    std::string v = io::fmt17(e.value);
    if (!v.empty() && v.front() == '"') v = v.substr(1, v.size() - 2);
    return std::to_string(radius) + "," + name + "," + v + "," + to_string(e.kind) +
           "," + (e.certified ? "true" : "false") + "\n";
}

std::string csv_verdict_row(int radius, const std::string& name, const Verdict& v) {
    return std::to_string(radius) + "," + name + "," + to_string(v.status) + ",," +
           "\n";
}

int cmd_analyze(const CommonOpts& o, const std::string& symbol, double grid_eps) {
    Graph g = open_graph(o);
    GraphFunction psi = open_function(symbol);
    std::string text;
    bool refuted = false;
    if (o.format == "csv")
        text += "radius,quantity,value_or_status,kind,certified\n";
    for (int r : parse_radii(o.radius_list)) {
        op::SymbolAnalysis a = op::analyze(psi, g, r, grid_eps);
        refuted = refuted || a.bounded.status == Status::Refuted;
        if (o.format == "json") {
            text += op::to_json(a);
            text += '\n';
        } else {
            text += csv_estimate_rows(r, "sup_norm", a.sup_norm);
            text += csv_estimate_rows(r, "lip_norm", a.lip_norm);
            text += csv_estimate_rows(r, "sigma", a.sigma);
            if (a.A) text += csv_estimate_rows(r, "A", *a.A);
            if (a.B) text += csv_estimate_rows(r, "B", *a.B);
            if (a.op_norm) {
                text += csv_estimate_rows(r, "op_norm_lo", a.op_norm->lo);
                text += csv_estimate_rows(r, "op_norm_hi", a.op_norm->hi);
            }
            if (a.ess_norm) {
                text += csv_estimate_rows(r, "ess_norm_lo", a.ess_norm->lo);
                text += csv_estimate_rows(r, "ess_norm_hi", a.ess_norm->hi);
            }
            text += csv_verdict_row(r, "bounded", a.bounded);
            text += csv_verdict_row(r, "compact", a.compact);
            text += csv_verdict_row(r, "isometry", a.isometry);
        }
    }
    emit(o, text);
    return refuted ? 2 : 0;
}

int cmd_norm(const CommonOpts& o, const std::string& fn) {
    Graph g = open_graph(o);
    GraphFunction f = open_function(fn);
    std::string text;
    if (o.format == "csv") text += "radius,quantity,value_or_status,kind,certified\n";
    for (int r : parse_radii(o.radius_list)) {
        Estimate e = lip::norm(f, g, r);
        if (o.format == "json") {
            text += io::to_json(e);
            text += '\n';
        } else {
            text += csv_estimate_rows(r, "norm", e);
        }
    }
    emit(o, text);
    return 0;
}

int cmd_approx(const CommonOpts& o, const std::string& fn, double eps) {
    Graph g = open_graph(o);
    GraphFunction f = open_function(fn);
    lip::ApproximationResult res = lip::finite_support_approximation(f, g, eps);
    const auto& table = res.approximant.finite_support()->table;
    std::string text;
    if (o.format == "json") {
        io::JsonWriter w;
        w.begin_object();
        w.key("N").value(int64_t(res.N));
        w.key("achieved");
        io::append_estimate(w, res.achieved, true);
        w.key("support_size").value(int64_t(table.size()));
        w.key("table").begin_array();
        for (const auto& [v, z] : table) {
            w.begin_array();
            w.value(v.enc);
            w.value(z.real());
            w.value(z.imag());
            w.end_array();
        }
        w.end_array();
        w.end_object();
        text = w.str();
        text += '\n';
    } else {
        text += "vertex,re,im\n";
        for (const auto& [v, z] : table) {
            std::string re = io::fmt17(z.real()), im = io::fmt17(z.imag());
            text += v.enc + "," + re + "," + im + "\n";
        }
    }
    emit(o, text);
    return 0;
}

int cmd_spectrum(const CommonOpts& o, const std::string& symbol, double grid_eps) {
    Graph g = open_graph(o);
    GraphFunction psi = open_function(symbol);
    std::string text;
    if (o.format == "csv") text += "radius,kind,re,im\n";
    for (int r : parse_radii(o.radius_list)) {
        op::SpectrumReport rep = op::spectrum(psi, g, r, grid_eps);
        if (o.format == "json") {
            io::JsonWriter w;
            w.begin_object();
            w.key("radius").value(r);
            w.key("sample").begin_array();
            for (const Complex& z : rep.sample) w.value(z);
            w.end_array();
            w.key("extras").begin_array();
            for (const Complex& z : rep.closure_extras) w.value(z);
            w.end_array();
            w.key("eigencheck");
            io::append_verdict(w, rep.eigencheck);
            w.end_object();
            text += w.str();
            text += '\n';
        } else {
            for (const Complex& z : rep.sample)
                text += std::to_string(r) + ",sample," + io::fmt17(z.real()) + "," +
                        io::fmt17(z.imag()) + "\n";
            for (const Complex& z : rep.closure_extras)
                text += std::to_string(r) + ",extra," + io::fmt17(z.real()) + "," +
                        io::fmt17(z.imag()) + "\n";
        }
    }
    emit(o, text);
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& symbol, uint64_t seed,
               int budget) {
    oracle::TestCase tc;
    tc.family = o.graph;
    tc.symbol = open_function(symbol);
    tc.radius = parse_radii(o.radius_list).back();
    tc.seed = seed;
    (void)budget;
    oracle::SweepReport rep = oracle::inequality_sweep(tc);
    emit(o, rep.to_jsonl());
    return rep.all_pass() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gll: Lipschitz space of an infinite graph - norms, multiplication "
        "operators, spectra, and brute-force verification.\n"
        "Graph families: ray | tree:<q> | lattice:<1|2> | ladder | "
        "random:<seed>:<maxdeg>.\n"
        "Symbols/functions: a DSL expression over d (and x,y on lattices), "
        "witness:<distance|harmonic|tent:<m>|ramp:<m>|chi:<vertex>>, or "
        "table:<file> with lines '<vertex> <re>[+<im>i]'.\n"
        "GLL_VERTEX_BUDGET overrides the ball vertex budget (default 10^7)."};
    app.require_subcommand(1);

    CommonOpts o;
    std::string symbol, function;
    double eps = 0.1, grid_eps = 1e-9;
    uint64_t seed = 0;
    int budget = 200;

    auto add_common = [&](CLI::App* c, bool radius = true) {
        c->add_option("--graph", o.graph, "graph family descriptor")->required();
        c->add_option("--root", o.root, "root vertex override (family encoding)");
        if (radius)
            c->add_option("--radius", o.radius_list,
                          "ball radius or comma schedule, e.g. 16,32,64 "
                          "(one output record per radius)");
        c->add_option("--format", o.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        c->add_option("--out", o.out, "write output to a file instead of stdout");
    };

    CLI::App* an = app.add_subcommand(
        "analyze",
        "Full multiplication-operator report for a symbol.\n"
        "CSV columns: radius,quantity,value_or_status,kind,certified.\n"
        "Exit code 2 when boundedness is Refuted (report still emitted).");
    add_common(an);
    an->add_option("--symbol", symbol, "symbol psi")->required();
    an->add_option("--grid-eps", grid_eps, "spectrum deduplication tolerance");

    CLI::App* no = app.add_subcommand(
        "norm", "Lipschitz norm of a function on B_R.\n"
                "CSV columns: radius,quantity,value_or_status,kind,certified.");
    add_common(no);
    no->add_option("--function", function, "function f")->required();

    CLI::App* ap = app.add_subcommand(
        "approx",
        "Finite-support approximation within eps (needs tail certificates).\n"
        "CSV columns: vertex,re,im (the support table).");
    add_common(ap, /*radius=*/false);
    ap->add_option("--function", function, "certified little-Lipschitz function")
        ->required();
    ap->add_option("--eps", eps, "target norm distance")->required();

    CLI::App* sp = app.add_subcommand(
        "spectrum", "Point spectrum sample and certified limit points.\n"
                    "CSV columns: radius,kind,re,im with kind in {sample, extra}.");
    add_common(sp);
    sp->add_option("--symbol", symbol, "symbol psi")->required();
    sp->add_option("--grid-eps", grid_eps, "deduplication tolerance");

    CLI::App* ve = app.add_subcommand(
        "verify",
        "Brute-force inequality sweep; emits one JSON line per check\n"
        "({check, family, symbol, radius, status, lhs, rhs, witness}).\n"
        "Exit code 2 when a check fails.");
    add_common(ve);
    ve->add_option("--symbol", symbol, "sweep symbol (default 1/(d+1))");
    ve->add_option("--seed", seed, "seed for the random corpus");
    ve->add_option("--budget", budget, "search budget (reserved for ratio search)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed()) return cmd_analyze(o, symbol, grid_eps);
        if (no->parsed()) return cmd_norm(o, function);
        if (ap->parsed()) return cmd_approx(o, function, eps);
        if (sp->parsed()) return cmd_spectrum(o, symbol, grid_eps);
        if (ve->parsed())
            return cmd_verify(o, symbol.empty() ? "1/(d+1)" : symbol, seed, budget);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
