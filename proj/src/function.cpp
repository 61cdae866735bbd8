#include "gll/function.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gll/ball.hpp"
#include "gll/errors.hpp"

namespace gll {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double harmonic_number(int64_t n) {
    double h = 0.0;
    for (int64_t k = 1; k <= n; ++k) h += 1.0 / double(k);
    return h;
}

double basel_partial(int64_t terms) { // sum_{k=1}^{terms} 1/k^2
    double s = 0.0;
    for (int64_t k = 1; k <= terms; ++k) s += 1.0 / double(k * k);
    return s;
}

} // namespace

bool GraphFunction::is_radial() const {
    if (std::holds_alternative<RadialProfile>(body)) return true;
    if (const auto* e = std::get_if<ExprBody>(&body)) return !e->vars.x && !e->vars.y;
    if (const auto* m = std::get_if<MappedBody>(&body)) return m->base->is_radial();
    return false;
}

Complex GraphFunction::eval_radial(int64_t n) const {
    if (const auto* r = std::get_if<RadialProfile>(&body)) return r->at(n);
    if (const auto* e = std::get_if<ExprBody>(&body)) {
        expr::EvalEnv env;
        env.d = n;
        return expr::evaluate(*e->ast, env);
    }
    if (const auto* m = std::get_if<MappedBody>(&body))
        return m->op(m->base->eval_radial(n));
    throw Error("eval_radial on a non-radial function '" + name + "'");
}

Complex GraphFunction::eval(const Graph& g, const VertexId& v,
                            std::optional<int64_t> dist) const {
    if (const auto* t = std::get_if<FiniteSupport>(&body)) {
        auto it = t->table.find(v);
        return it == t->table.end() ? Complex(0.0, 0.0) : it->second;
    }
    if (const auto* m = std::get_if<MappedBody>(&body))
        return m->op(m->base->eval(g, v, dist));
    if (const auto* r = std::get_if<RadialProfile>(&body))
        return r->at(dist ? *dist : distance(g, v));
    const auto& e = std::get<ExprBody>(body);
    expr::EvalEnv env;
    env.vertex = &v.enc;
    if (e.vars.d) env.d = dist ? *dist : distance(g, v);
    if (e.vars.x || e.vars.y) {
        auto xy = g.family->coordinates(v);
        if (!xy)
            throw EvaluationError("symbol uses coordinates but family '" +
                                      g.family->name() + "' has none",
                                  v.enc);
        env.x = xy->first;
        env.y = xy->second;
    }
    return expr::evaluate(*e.ast, env);
}

std::optional<int64_t> GraphFunction::support_radius(const Graph& g) const {
    if (const auto* r = std::get_if<RadialProfile>(&body)) return r->support_radius;
    if (const auto* t = std::get_if<FiniteSupport>(&body)) {
        std::vector<VertexId> keys;
        for (const auto& [v, z] : t->table)
            if (z != Complex(0.0, 0.0)) keys.push_back(v);
        if (keys.empty()) return -1;
        auto ds = distances_of(g, keys);
        int64_t m = -1;
        for (int64_t d : ds) m = std::max(m, d);
        return m;
    }
    if (const auto* m = std::get_if<MappedBody>(&body)) {
        // a transform fixing 0 preserves the support
        if (m->op(Complex(0.0, 0.0)) == Complex(0.0, 0.0))
            return m->base->support_radius(g);
        return std::nullopt;
    }
    return std::nullopt;
}

GraphFunction make_constant(Complex c) {
    GraphFunction f;
    double a = std::abs(c);
    f.body = RadialProfile{[c](int64_t) { return c; },
                           a == 0.0 ? std::optional<int64_t>(-1) : std::nullopt};
    f.name = format_complex(c);
    f.constant_value = c;
    TailCertificate t;
    t.sup_abs_tail = [a](int64_t) { return a; };
    t.sup_diff_tail = [](int64_t) { return 0.0; };
    t.sup_weighted_diff_tail = [](int64_t) { return 0.0; };
    t.sup_growth_tail = [a](int64_t n) { return n >= 1 ? a / double(n) : kInf; };
    t.abs_limit = a;
    t.weighted_diff_limit = 0.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = c;
    f.tail = t;
    return f;
}

GraphFunction make_radial(std::function<Complex(int64_t)> at,
                          std::optional<int64_t> support_radius, std::string name) {
    GraphFunction f;
    f.body = RadialProfile{std::move(at), support_radius};
    f.name = std::move(name);
    return f;
}

GraphFunction make_table(std::map<VertexId, Complex> table, std::string name) {
    GraphFunction f;
    f.body = FiniteSupport{std::move(table)};
    f.name = std::move(name);
    return f;
}

GraphFunction scaled(const GraphFunction& f, Complex c) {
    GraphFunction out;
    auto base = std::make_shared<GraphFunction>(f);
    out.body = MappedBody{base, [c](Complex z) { return c * z; },
                          "scale " + format_complex(c)};
    out.name = format_complex(c) + " * (" + f.name + ")";
    if (f.constant_value) out.constant_value = c * *f.constant_value;
    if (f.tail) {
        double a = std::abs(c);
        const TailCertificate& t = *f.tail;
        TailCertificate s;
        s.valid_from = t.valid_from;
        auto scale_fn = [a](const std::function<double(int64_t)>& fn)
            -> std::function<double(int64_t)> {
            if (!fn) return nullptr;
            return [a, fn](int64_t n) { return a * fn(n); };
        };
        s.sup_abs_tail = scale_fn(t.sup_abs_tail);
        s.sup_diff_tail = scale_fn(t.sup_diff_tail);
        s.sup_weighted_diff_tail = scale_fn(t.sup_weighted_diff_tail);
        s.sup_growth_tail = scale_fn(t.sup_growth_tail);
        if (t.abs_limit) s.abs_limit = a * *t.abs_limit;
        if (t.weighted_diff_limit) s.weighted_diff_limit = a * *t.weighted_diff_limit;
        if (t.diff_limit) s.diff_limit = a * *t.diff_limit;
        if (t.growth_limit) s.growth_limit = a * *t.growth_limit;
        if (t.value_limit) s.value_limit = c * *t.value_limit;
        out.tail = s;
    }
    return out;
}

// --- witnesses ---

GraphFunction witness_distance() {
    GraphFunction f = make_radial([](int64_t n) { return Complex(double(n), 0.0); },
                                  std::nullopt, "witness:distance");
    TailCertificate t;
    t.sup_abs_tail = [](int64_t) { return kInf; };
    t.sup_diff_tail = [](int64_t) { return 1.0; };
    t.sup_weighted_diff_tail = [](int64_t) { return kInf; };
    t.sup_growth_tail = [](int64_t) { return 1.0; };
    t.abs_limit = kInf;
    t.weighted_diff_limit = kInf;
    t.diff_limit = 1.0;
    t.growth_limit = 1.0;
    f.tail = t;
    return f;
}

GraphFunction witness_tent(int64_t m) {
    if (m < 1) throw InvalidParameter("witness_tent requires m >= 1");
    auto profile = [m](int64_t n) {
        if (n <= m) return Complex(double(n), 0.0);
        if (n <= 2 * m) return Complex(double(2 * m - n), 0.0);
        return Complex(0.0, 0.0);
    };
    GraphFunction f = make_radial(profile, 2 * m - 1, "witness:tent:" + std::to_string(m));
    TailCertificate t;
    t.sup_abs_tail = [m](int64_t n) {
        if (n <= m) return double(m);
        if (n <= 2 * m) return double(2 * m - n);
        return 0.0;
    };
    t.sup_diff_tail = [m](int64_t n) { return n <= 2 * m - 1 ? 1.0 : 0.0; };
    t.sup_weighted_diff_tail = [m](int64_t n) {
        return n <= 2 * m - 1 ? double(2 * m) : 0.0;
    };
    t.sup_growth_tail = [m](int64_t n) {
        if (n <= m) return 1.0;
        if (n <= 2 * m) return double(2 * m - n) / double(n);
        return 0.0;
    };
    t.abs_limit = 0.0;
    t.weighted_diff_limit = 0.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = Complex(0.0, 0.0);
    f.tail = t;
    return f;
}

GraphFunction witness_ramp(int64_t m) {
    if (m < 2) throw InvalidParameter("witness_ramp requires m >= 2");
    int64_t fm = m / 2;
    auto profile = [m, fm](int64_t n) {
        if (n < fm) return Complex(0.0, 0.0);
        if (n < m) return Complex(double(2 * n - m + 2), 0.0);
        return Complex(double(m), 0.0);
    };
    GraphFunction f = make_radial(profile, std::nullopt, "witness:ramp:" + std::to_string(m));
    TailCertificate t;
    t.sup_abs_tail = [m](int64_t) { return double(m); };
    t.sup_diff_tail = [m](int64_t n) { return n <= m - 2 ? 2.0 : 0.0; };
    t.sup_weighted_diff_tail = [m](int64_t n) {
        return n <= m - 2 ? 2.0 * double(m - 1) : 0.0;
    };
    t.sup_growth_tail = [m](int64_t n) {
        if (n <= m - 1) return double(m) / double(m - 1);
        return double(m) / double(n);
    };
    t.abs_limit = double(m);
    t.weighted_diff_limit = 0.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = Complex(double(m), 0.0);
    f.tail = t;
    return f;
}

GraphFunction witness_characteristic(VertexId v) {
    std::map<VertexId, Complex> t;
    std::string enc = v.enc;
    t.emplace(std::move(v), Complex(1.0, 0.0));
    return make_table(std::move(t), "witness:chi:" + enc);
}

GraphFunction witness_harmonic() {
    GraphFunction f = make_radial(
        [](int64_t n) { return Complex(harmonic_number(n), 0.0); }, std::nullopt,
        "witness:harmonic");
    TailCertificate t;
    t.valid_from = 0;
    t.sup_abs_tail = [](int64_t) { return kInf; };
    t.sup_diff_tail = [](int64_t n) { return 1.0 / double(n + 1); };
    t.sup_weighted_diff_tail = [](int64_t) { return 1.0; };
    t.sup_growth_tail = [](int64_t n) {
        return n >= 1 ? harmonic_number(n) / double(n) : kInf;
    };
    t.abs_limit = kInf;
    t.weighted_diff_limit = 1.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    f.tail = t;
    return f;
}

GraphFunction named_witness(const std::string& spec) {
    auto next = [&spec](size_t from) {
        size_t c = spec.find(':', from);
        return c == std::string::npos ? spec.size() : c;
    };
    if (spec.rfind("witness:", 0) != 0)
        throw InvalidParameter("witness spec must start with 'witness:'");
    size_t p = 8;
    size_t q = next(p);
    std::string kind = spec.substr(p, q - p);
    std::string arg = q < spec.size() ? spec.substr(q + 1) : "";
    if (kind == "distance") return witness_distance();
    if (kind == "harmonic") return witness_harmonic();
    if (kind == "tent") return witness_tent(std::strtoll(arg.c_str(), nullptr, 10));
    if (kind == "ramp") return witness_ramp(std::strtoll(arg.c_str(), nullptr, 10));
    if (kind == "chi") {
        if (arg.empty()) throw InvalidParameter("witness:chi:<vertex> needs a vertex");
        return witness_characteristic(VertexId(arg));
    }
    throw InvalidParameter("unknown witness '" + spec + "'");
}

// --- canonical example symbols with hand-derived certificates ---

namespace {

// sup_{m >= n} term(m), valid when term(m) <= bound(m) with bound
// nonincreasing and -> 0: scan until the bound falls below the best seen.
double scan_sup(int64_t n, const std::function<double(int64_t)>& term,
                const std::function<double(int64_t)>& bound) {
    double best = 0.0;
    for (int64_t m = n;; ++m) {
        best = std::max(best, term(m));
        if (bound(m + 1) <= best) return best;
        if (m > n + 100'000'000)
            throw Error("scan_sup failed to converge"); // unreachable for our symbols
    }
}

TailCertificate recip_certificate() {
    TailCertificate t;
    t.valid_from = 0;
    t.sup_abs_tail = [](int64_t n) { return 1.0 / double(n + 1); };
    t.sup_diff_tail = [](int64_t n) { return 1.0 / (double(n + 1) * double(n + 2)); };
    t.sup_weighted_diff_tail = [](int64_t n) { return 1.0 / double(n + 2); };
    t.sup_growth_tail = [](int64_t n) {
        return n >= 1 ? 1.0 / (double(n) * double(n + 1)) : kInf;
    };
    t.abs_limit = 0.0;
    t.weighted_diff_limit = 0.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = Complex(0.0, 0.0);
    return t;
}

TailCertificate sinc_certificate() {
    auto val = [](int64_t m) {
        return m == 0 ? 1.0 : std::sin(double(m)) / double(m);
    };
    auto mag = [val](int64_t m) { return std::abs(val(m)); };
    TailCertificate t;
    t.valid_from = 0;
    t.sup_abs_tail = [mag](int64_t n) {
        if (n <= 0) return 1.0;
        return scan_sup(n, mag, [](int64_t m) { return 1.0 / double(m); });
    };
    t.sup_diff_tail = [val](int64_t n) {
        auto delta = [val](int64_t m) { return std::abs(val(m + 1) - val(m)); };
        return scan_sup(std::max<int64_t>(n, 0), delta,
                        [](int64_t m) { return 2.0 / double(std::max<int64_t>(m, 1)); });
    };
    t.sup_weighted_diff_tail = nullptr; // tail sup not finitely attained
    t.sup_growth_tail = [mag](int64_t n) {
        auto g = [mag](int64_t m) { return m == 0 ? kInf : mag(m) / double(m); };
        if (n < 1) return kInf;
        return scan_sup(n, g, [](int64_t m) { return 1.0 / double(m * m); });
    };
    t.abs_limit = 0.0;
    // (m+1)|psi(m+1)-psi(m)| = |2 sin(1/2) cos(m+1/2) - sin(m)/m|; the limsup
    // is 2 sin(1/2) because {m mod 2pi} is equidistributed.
    t.weighted_diff_limit = 2.0 * std::sin(0.5);
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = Complex(0.0, 0.0);
    return t;
}

TailCertificate basel_certificate() {
    const double pi2_6 = M_PI * M_PI / 6.0;
    TailCertificate t;
    t.valid_from = 0;
    t.sup_abs_tail = [pi2_6](int64_t) { return pi2_6; }; // increasing profile: sup = limit
    t.sup_diff_tail = [](int64_t n) { return 1.0 / (double(n + 2) * double(n + 2)); };
    t.sup_weighted_diff_tail = [](int64_t n) {
        return double(n + 1) / (double(n + 2) * double(n + 2));
    };
    t.sup_growth_tail = [](int64_t n) {
        return n >= 1 ? basel_partial(n + 1) / double(n) : kInf;
    };
    t.abs_limit = pi2_6;
    t.weighted_diff_limit = 0.0;
    t.diff_limit = 0.0;
    t.growth_limit = 0.0;
    t.value_limit = Complex(pi2_6, 0.0);
    return t;
}

std::optional<TailCertificate> known_certificate(const std::string& canonical) {
    if (canonical == "1 / (d + 1)") return recip_certificate();
    if (canonical == "if d == 0 then 1 else sin(d) / d") return sinc_certificate();
    if (canonical == "sum(1 / k^2, k, 1, d + 1)") return basel_certificate();
    return std::nullopt;
}

} // namespace

GraphFunction parse_expression(const std::string& src) {
    expr::NodePtr ast = expr::parse(src);
    std::string canonical = expr::print(*ast);
    expr::VarUse vars = expr::free_variables(*ast);

    GraphFunction f;
    f.name = canonical;
    if (!vars.d && !vars.x && !vars.y) {
        // variable-free: certified constant (unless evaluation itself fails,
        // e.g. "1/0"; then keep the AST and let evaluation report it)
        try {
            expr::EvalEnv env;
            Complex c = expr::evaluate(*ast, env);
            f = make_constant(c);
            f.name = canonical;
            return f;
        } catch (const EvaluationError&) {
            f.body = ExprBody{std::move(ast), canonical, vars};
            return f;
        }
    }
    if (!vars.x && !vars.y) {
        f.body = RadialProfile{[ast](int64_t n) {
                                   expr::EvalEnv env;
                                   env.d = n;
                                   return expr::evaluate(*ast, env);
                               },
                               std::nullopt};
        f.tail = known_certificate(canonical);
        return f;
    }
    f.body = ExprBody{std::move(ast), canonical, vars};
    return f;
}

GraphFunction resolvent_symbol(const GraphFunction& psi, Complex lambda, double c,
                               const Graph& g, int radius) {
    if (c <= 0.0) throw InvalidParameter("resolvent requires c > 0");
    Ball ball = make_ball(g, radius);
    for (size_t i = 0; i < ball.verts.size(); ++i) {
        Complex z = psi.eval(g, ball.verts[i], ball.dist[i]);
        if (std::abs(z - lambda) < c)
            throw ResolventUndefined("|psi(v) - lambda| >= " + std::to_string(c) +
                                     " fails at vertex '" + ball.verts[i].enc +
                                     "' (value " + format_complex(z) + ")");
    }

    GraphFunction out;
    auto base = std::make_shared<GraphFunction>(psi);
    out.body = MappedBody{base,
                          [lambda](Complex z) {
                              Complex den = z - lambda;
                              if (den == Complex(0.0, 0.0))
                                  throw EvaluationError("resolvent pole", "");
                              return Complex(1.0, 0.0) / den;
                          },
                          "resolvent"};
    out.name = "1/((" + psi.name + ") - " + format_complex(lambda) + ")";
    if (psi.constant_value) out.constant_value = 1.0 / (*psi.constant_value - lambda);

    // derived certificate: |phi| <= 1/c and differences shrink by c^2
    TailCertificate t;
    const TailCertificate* bt = psi.tail ? &*psi.tail : nullptr;
    t.valid_from = bt ? bt->valid_from : 0;
    double inv_c = 1.0 / c;
    t.sup_abs_tail = [inv_c](int64_t) { return inv_c; };
    if (bt && bt->sup_diff_tail) {
        auto fn = bt->sup_diff_tail;
        double c2 = c * c;
        t.sup_diff_tail = [fn, c2](int64_t n) { return fn(n) / c2; };
    }
    if (bt && bt->sup_weighted_diff_tail) {
        auto fn = bt->sup_weighted_diff_tail;
        double c2 = c * c;
        t.sup_weighted_diff_tail = [fn, c2](int64_t n) { return fn(n) / c2; };
    }
    t.sup_growth_tail = [inv_c](int64_t n) { return n >= 1 ? inv_c / double(n) : kInf; };
    if (bt && bt->value_limit && std::abs(*bt->value_limit - lambda) >= c) {
        Complex L = 1.0 / (*bt->value_limit - lambda);
        t.value_limit = L;
        t.abs_limit = std::abs(L);
    }
    if (bt && bt->diff_limit && *bt->diff_limit == 0.0) t.diff_limit = 0.0;
    if (bt && bt->weighted_diff_limit && *bt->weighted_diff_limit == 0.0)
        t.weighted_diff_limit = 0.0;
    t.growth_limit = 0.0;
    out.tail = t;
    return out;
}

// --- table text format ---

namespace {

bool parse_complex_token(const std::string& tok, Complex& out) {
    //  <re> | <re>+<im>i | <re>-<im>i
    const char* s = tok.c_str();
    char* end = nullptr;
    double re = std::strtod(s, &end);
    if (end == s) return false;
    if (*end == '\0') {
        out = Complex(re, 0.0);
        return true;
    }
    if (*end != '+' && *end != '-') return false;
    const char* imstart = end;
    double im = std::strtod(imstart, &end);
    if (end == imstart) return false;
    if (*end != 'i' || *(end + 1) != '\0') return false;
    out = Complex(re, im);
    return true;
}

} // namespace

GraphFunction load_table(std::istream& in, std::string name) {
    std::map<VertexId, Complex> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string enc, val;
        if (!(ls >> enc)) continue;
        if (enc[0] == '#') continue;
        if (!(ls >> val))
            throw Error("table line " + std::to_string(lineno) + ": missing value");
        Complex z;
        if (!parse_complex_token(val, z))
            throw Error("table line " + std::to_string(lineno) + ": bad value '" + val +
                        "'");
        table[VertexId(enc)] = z;
    }
    return make_table(std::move(table), std::move(name));
}

GraphFunction load_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open table file '" + path + "'");
    return load_table(in, path);
}

std::string save_table(const GraphFunction& f) {
    const auto* t = f.finite_support();
    if (!t) throw Error("save_table requires a finite-support function");
    std::string out;
    char buf[96];
    for (const auto& [v, z] : t->table) {
        if (z.imag() == 0.0)
            std::snprintf(buf, sizeof buf, "%s %.17g\n", v.enc.c_str(), z.real());
        else
            std::snprintf(buf, sizeof buf, "%s %.17g%+.17gi\n", v.enc.c_str(), z.real(),
                          z.imag());
        out += buf;
    }
    return out;
}

std::string format_complex(Complex z) {
    char buf[80];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%g", z.real());
        return buf;
    }
    if (z.real() == 0.0) {
        std::snprintf(buf, sizeof buf, "%gi", z.imag());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%g%+gi", z.real(), z.imag());
    return buf;
}

} // namespace gll
