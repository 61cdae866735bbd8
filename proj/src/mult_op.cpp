#include "gll/mult_op.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gll/errors.hpp"
#include "gll/io.hpp"
#include "gll/kernels.hpp"

namespace gll::op {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex at(const lip::BallField& f, size_t i) { return {f.re[i], f.im[i]}; }

double vabs(const lip::BallField& f, size_t i) {
    return std::sqrt(f.re[i] * f.re[i] + f.im[i] * f.im[i]);
}

std::string trend_note(const char* label, const std::vector<double>& prefix_max,
                       int radius) {
    std::string s = label;
    for (int r : {radius / 4, radius / 2, radius}) {
        if (r < 1 || size_t(r) > prefix_max.size()) continue;
        s += " R=" + std::to_string(r) + ":" + std::to_string(prefix_max[size_t(r) - 1]);
    }
    return s;
}

} // namespace

ShellProfile weighted_diff_profile(const lip::BallField& field) {
    const Ball& ball = *field.ball;
    ShellProfile p;
    p.quantity = "d_weighted_diff";
    if (ball.radius == 0) return p;
    p.values.assign(size_t(ball.radius), 0.0);
    for (int n = 0; n < ball.radius; ++n) {
        auto [lo, hi] = ball.edge_shell(n);
        p.values[size_t(n)] = std::sqrt(kernels::max_weighted_diff_abs2(
            field.ew.data() + lo, field.esre.data() + lo, field.esim.data() + lo,
            field.edre.data() + lo, field.edim.data() + lo, size_t(hi - lo)));
    }
    return p;
}

Estimate sigma_psi(const GraphFunction& psi, const Graph& g, const Ball& ball,
                   const lip::BallField& field) {
    size_t m = field.esre.size();
    double observed =
        m == 0 ? 0.0
               : std::sqrt(kernels::max_weighted_diff_abs2(
                     field.ew.data(), field.esre.data(), field.esim.data(),
                     field.edre.data(), field.edim.data(), m));

    // unseen ordered pairs have source distance >= R, hence both endpoint
    // distances >= R-1: close the gap with the weighted tail at R-1
    if (auto sr = psi.support_radius(g); sr && *sr <= int64_t(ball.radius) - 2)
        return Estimate::exact(observed, ball.radius, true, "finite support");
    if (psi.tail && psi.tail->sup_weighted_diff_tail &&
        int64_t(ball.radius) - 1 >= psi.tail->valid_from) {
        double tv = psi.tail->sup_weighted_diff_tail(int64_t(ball.radius) - 1);
        if (std::isinf(tv))
            return {kInf, Kind::Exact, ball.radius, true, "certified divergent tail"};
        if (tv <= observed)
            return Estimate::exact(observed, ball.radius, true, "tail certificate");
    }
    return Estimate::lower(observed, ball.radius);
}

Estimate sigma_psi(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    return sigma_psi(psi, g, ball, field);
}

Verdict boundedness(const GraphFunction& psi, const Graph& g, const Ball& ball,
                    const lip::BallField& field) {
    Estimate sup = lip::sup_norm(psi, g, ball, field);
    Estimate sig = sigma_psi(psi, g, ball, field);

    Verdict v;
    v.radius = ball.radius;
    bool sup_inf = std::isinf(sup.value) && sup.certified;
    bool sig_inf = std::isinf(sig.value) && sig.certified;
    if (sup_inf || sig_inf) {
        v.status = Status::Refuted;
        v.note = sup_inf && sig_inf ? "||psi||_inf and sigma_psi certified divergent"
                 : sup_inf          ? "||psi||_inf certified divergent"
                                    : "sigma_psi certified divergent";
        return v;
    }
    if (sup.certified && sig.certified) {
        v.status = Status::Proven;
        v.note = "||psi||_inf = " + std::to_string(sup.value) +
                 " and sigma_psi = " + std::to_string(sig.value) + " certified finite";
        return v;
    }
    v.status = Status::NumericalEvidence;
    ShellProfile abs = lip::shell_abs_profile(field);
    ShellProfile wd = weighted_diff_profile(field);
    std::vector<double> abs_pref(abs.values.size());
    double run = 0.0;
    for (size_t i = 0; i < abs.values.size(); ++i) {
        run = std::max(run, abs.values[i]);
        abs_pref[i] = run;
    }
    std::vector<double> wd_pref(wd.values.size());
    run = 0.0;
    for (size_t i = 0; i < wd.values.size(); ++i) {
        run = std::max(run, wd.values[i]);
        wd_pref[i] = run;
    }
    v.note = trend_note("sup|psi| by radius:", abs_pref, ball.radius) + "; " +
             trend_note("sigma by radius:", wd_pref, ball.radius);
    return v;
}

Verdict boundedness(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    return boundedness(psi, g, ball, field);
}

namespace {

void require_bounded(const GraphFunction& psi, const Graph& g, const Ball& ball,
                     const lip::BallField& field) {
    if (boundedness(psi, g, ball, field).status == Status::Refuted)
        throw UnboundedSymbol("M_psi is not bounded for symbol '" + psi.name + "'");
}

} // namespace

Interval operator_norm_interval(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    require_bounded(psi, g, ball, field);

    Estimate lipn = lip::norm(psi, g, ball, field);
    Estimate sup = lip::sup_norm(psi, g, ball, field);
    Estimate sig = sigma_psi(psi, g, ball, field);

    Interval iv;
    iv.lo = Estimate{std::max(lipn.value, sup.value),
                     (lipn.kind == Kind::Exact && sup.kind == Kind::Exact)
                         ? Kind::Exact
                         : Kind::LowerBound,
                     radius, lipn.certified && sup.certified,
                     "max(lip_norm, sup_norm)"};
    iv.hi = Estimate{sup.value + sig.value,
                     (sup.kind == Kind::Exact && sig.kind == Kind::Exact)
                         ? Kind::Exact
                         : Kind::LowerBound,
                     radius, sup.certified && sig.certified, "sup_norm + sigma"};
    return iv;
}

Estimate tail_A(const GraphFunction& psi, const Graph& g, const Ball& ball,
                const lip::BallField& field) {
    if (auto sr = psi.support_radius(g); sr)
        return Estimate::limit(0.0, ball.radius, "finite support");
    if (psi.tail && psi.tail->abs_limit) {
        double a = *psi.tail->abs_limit;
        Estimate e = Estimate::limit(a, ball.radius, "certified limit");
        if (std::isinf(a)) e.certified = true;
        return e;
    }
    ShellProfile abs = lip::shell_abs_profile(field);
    double reading = abs.values.empty() ? 0.0 : abs.values.back();
    return Estimate::upper(reading, ball.radius, "in-ball tail reading; not certified");
}

Estimate tail_B(const GraphFunction& psi, const Graph& g, const Ball& ball,
                const lip::BallField& field) {
    if (auto sr = psi.support_radius(g); sr)
        return Estimate::limit(0.0, ball.radius, "finite support");
    if (psi.tail && psi.tail->weighted_diff_limit)
        return Estimate::limit(*psi.tail->weighted_diff_limit, ball.radius,
                               "certified limit");
    // in-ball reading: deepest complete inner shell of d(src)*|diff| over
    // edges with both endpoints at distance >= R-1
    double reading = 0.0;
    for (size_t e = 0; e < field.esre.size(); ++e) {
        int32_t ds = ball.dist[size_t(ball.esrc[e])];
        int32_t dd = ball.dist[size_t(ball.edst[e])];
        if (std::min(ds, dd) < ball.radius - 1) continue;
        double dr = field.esre[e] - field.edre[e];
        double di = field.esim[e] - field.edim[e];
        reading = std::max(reading, double(ds) * std::sqrt(dr * dr + di * di));
    }
    return Estimate::upper(reading, ball.radius, "in-ball tail reading; not certified");
}

CompactnessDetail compactness_detail(const GraphFunction& psi, const Graph& g,
                                     const Ball& ball, const lip::BallField& field) {
    require_bounded(psi, g, ball, field);
    CompactnessDetail d;
    d.abs_profile = lip::shell_abs_profile(field);
    d.weighted_profile = weighted_diff_profile(field);

    Estimate A = tail_A(psi, g, ball, field);
    Estimate B = tail_B(psi, g, ball, field);

    auto condition = [&](const Estimate& e, const char* what,
                         const std::vector<double>& profile) {
        Verdict v;
        v.radius = ball.radius;
        if (e.certified) {
            if (essentially_zero(e.value)) {
                v.status = Status::Proven;
                v.note = std::string(what) + " = 0 certified";
            } else {
                v.status = Status::Refuted;
                v.witness_value = e.value;
                v.note = std::string(what) + " = " + std::to_string(e.value) +
                         " certified nonzero";
            }
            return v;
        }
        v.status = Status::NumericalEvidence;
        std::string s = std::string(what) + " profile tail:";
        for (size_t i = profile.size() >= 3 ? profile.size() - 3 : 0; i < profile.size();
             ++i)
            s += " " + std::to_string(profile[i]);
        v.note = s;
        return v;
    };

    d.condition_value = condition(A, "lim |psi|", d.abs_profile.values);
    d.condition_diff = condition(B, "lim d*maxdiff", d.weighted_profile.values);

    Verdict& o = d.overall;
    o.radius = ball.radius;
    bool r1 = d.condition_value.status == Status::Refuted;
    bool r2 = d.condition_diff.status == Status::Refuted;
    if (r1 || r2) {
        o.status = Status::Refuted;
        o.note = r1 && r2  ? "both conditions fail"
                 : r1      ? "condition 1 (lim psi = 0) fails; condition 2 holds"
                           : "condition 2 (lim d*maxdiff = 0) fails; condition 1 holds";
        o.witness_value = r1 ? d.condition_value.witness_value
                             : d.condition_diff.witness_value;
    } else if (d.condition_value.status == Status::Proven &&
               d.condition_diff.status == Status::Proven) {
        o.status = Status::Proven;
        o.note = "both vanishing conditions certified";
    } else {
        o.status = Status::NumericalEvidence;
        o.note = d.condition_value.note + "; " + d.condition_diff.note;
    }
    return d;
}

Verdict compactness(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    return compactness_detail(psi, g, ball, field).overall;
}

Interval essential_norm_interval(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    require_bounded(psi, g, ball, field);
    Estimate A = tail_A(psi, g, ball, field);
    Estimate B = tail_B(psi, g, ball, field);
    Interval iv;
    iv.lo = A;
    iv.lo.note = "A(psi); " + A.note;
    bool cert = A.certified && B.certified;
    iv.hi = Estimate{4.0 * A.value + B.value, cert ? Kind::Limit : Kind::UpperBound,
                     radius, cert, "4A + B"};
    return iv;
}

SpectrumReport spectrum(const GraphFunction& psi, const Graph& g, int radius,
                        double grid_eps) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);
    require_bounded(psi, g, ball, field);

    SpectrumReport rep;
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        Complex z = at(field, i);
        bool dup = false;
        for (const Complex& s : rep.sample)
            if (std::abs(z - s) <= grid_eps) {
                dup = true;
                break;
            }
        if (!dup) {
            rep.sample.push_back(z);
            rep.witnesses.push_back(ball.verts[i]);
        }
    }

    if (psi.tail && psi.tail->value_limit) {
        Complex L = *psi.tail->value_limit;
        bool dup = false;
        for (const Complex& s : rep.sample)
            if (std::abs(L - s) <= grid_eps) {
                dup = true;
                break;
            }
        if (!dup) rep.closure_extras.push_back(L);
    }

    // every sampled value is an eigenvalue: M_psi chi_v = psi(v) chi_v,
    // and the residual is exactly zero at the witness vertex
    Verdict& ev = rep.eigencheck;
    ev.radius = radius;
    ev.status = Status::Proven;
    double worst = 0.0;
    for (size_t k = 0; k < rep.sample.size(); ++k) {
        int32_t vi = ball.index_of(rep.witnesses[k]);
        double resid = std::abs(at(field, size_t(vi)) - rep.sample[k]);
        worst = std::max(worst, resid);
        if (resid != 0.0) {
            ev.status = Status::Refuted;
            ev.witness_vertex = rep.witnesses[k];
        }
    }
    ev.witness_value = worst;
    ev.note = "max eigenvector residual " + std::to_string(worst);
    return rep;
}

ResolventReport resolvent_check(const GraphFunction& psi, Complex lambda, double c,
                                const Graph& g, int radius) {
    ResolventReport rep;
    rep.c = c;
    rep.phi = resolvent_symbol(psi, lambda, c, g, radius);

    Ball ball = make_ball(g, radius);
    lip::BallField psif = lip::evaluate_field(psi, g, ball);
    lip::BallField phif = lip::evaluate_field(rep.phi, g, ball);

    rep.sup_phi = std::sqrt(
        kernels::max_abs2(phif.re.data(), phif.im.data(), phif.re.size()));
    rep.sigma_phi = sigma_psi(rep.phi, g, ball, phif);
    rep.sigma_psi = sigma_psi(psi, g, ball, psif);
    rep.sup_bound_ok = rep.sup_phi <= 1.0 / c + kAbsTol;
    rep.sigma_bound_ok = rep.sigma_phi.value <= rep.sigma_psi.value / (c * c) + kAbsTol;
    return rep;
}

Verdict isometry_test(const GraphFunction& psi, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);

    double probe1 = lip::norm(psi, g, ball, field).value; // ||M_psi 1|| = ||psi||
    double probe2 = vabs(field, 0);                       // ||M_psi (chi_a/2)|| = |psi(a)|

    Verdict v;
    v.radius = ball.radius;

    auto refute = [&](int probe, double got) {
        v.status = Status::Refuted;
        v.witness_value = got;
        v.note = probe == 1
                     ? "probe 1 (constant function 1): ||M_psi 1|| = " +
                           std::to_string(got) + " != 1"
                     : "probe 2 (g = chi_a/2, ||g|| = 1): ||M_psi g|| = |psi(a)| = " +
                           std::to_string(got) + " != 1";
    };

    if (psi.constant_value) {
        if (close(std::abs(*psi.constant_value), 1.0)) {
            v.status = Status::Proven;
            v.note = "certified constant of modulus one";
        } else if (!close(probe1, 1.0)) {
            refute(1, probe1);
        } else {
            refute(2, probe2);
        }
        return v;
    }

    size_t m = field.esre.size();
    double maxdiff =
        m == 0 ? 0.0
               : std::sqrt(kernels::max_diff_abs2(field.esre.data(), field.esim.data(),
                                                  field.edre.data(), field.edim.data(), m));
    if (maxdiff > kAbsTol) {
        // non-constant on the ball
        if (!close(probe1, 1.0)) {
            refute(1, probe1);
        } else {
            refute(2, probe2);
        }
        // witness edge showing non-constancy
        for (size_t e = 0; e < m; ++e) {
            double dr = field.esre[e] - field.edre[e];
            double di = field.esim[e] - field.edim[e];
            if (std::sqrt(dr * dr + di * di) == maxdiff) {
                v.witness_edge = EdgeWitness{ball.verts[size_t(ball.esrc[e])],
                                             ball.verts[size_t(ball.edst[e])]};
                break;
            }
        }
        return v;
    }
    if (!close(probe2, 1.0)) {
        refute(2, probe2);
        return v;
    }
    v.status = Status::NumericalEvidence;
    v.note = "constant of modulus one on the ball, but not certified constant";
    return v;
}

GraphFunction apply(const GraphFunction& psi, const GraphFunction& f, const Graph& g,
                    int radius) {
    std::string name =
        "(" + psi.name + ")*(" + f.name + ")|B_" + std::to_string(radius);
    // psi*f vanishes wherever f does, so a finite-support f never needs the
    // full ball
    if (const auto* t = f.finite_support()) {
        std::vector<VertexId> keys;
        for (const auto& [v, z] : t->table)
            if (z != Complex(0.0, 0.0)) keys.push_back(v);
        auto ds = distances_of(g, keys);
        std::map<VertexId, Complex> table;
        for (size_t i = 0; i < keys.size(); ++i) {
            if (ds[i] > radius) continue; // truncation to B_R
            Complex z = psi.eval(g, keys[i], ds[i]) * t->table.at(keys[i]);
            if (z != Complex(0.0, 0.0)) table.emplace(keys[i], z);
        }
        return make_table(std::move(table), std::move(name));
    }
    Ball ball = make_ball(g, radius);
    lip::BallField pf = lip::evaluate_field(psi, g, ball);
    lip::BallField ff = lip::evaluate_field(f, g, ball);
    std::map<VertexId, Complex> table;
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        Complex z = at(pf, i) * at(ff, i);
        if (z != Complex(0.0, 0.0)) table.emplace(ball.verts[i], z);
    }
    return make_table(std::move(table), std::move(name));
}

GraphFunction apply_Kn(int64_t n, const GraphFunction& f, const Graph&,
                       const Ball& ball) {
    if (n < 1) throw InvalidParameter("K_n requires n >= 1");
    if (ball.radius < 2 * n + 1)
        throw PreconditionViolated("apply_Kn requires radius >= 2n+1");
    const auto* t = f.finite_support();
    if (!t)
        throw PreconditionViolated("ball-reusing apply_Kn needs a finite-support f");
    std::map<VertexId, Complex> table;
    for (const auto& [v, z0] : t->table) {
        if (z0 == Complex(0.0, 0.0)) continue;
        int32_t i = ball.index_of(v);
        if (i < 0)
            throw PreconditionViolated("support vertex '" + v.enc +
                                       "' outside the working ball");
        int64_t d = ball.dist[size_t(i)];
        if (d >= 2 * n) continue;
        Complex z = z0;
        if (d > n) z *= double(2 * n - d) / double(d);
        if (z != Complex(0.0, 0.0)) table.emplace(v, z);
    }
    return make_table(std::move(table), "K_" + std::to_string(n) + "(" + f.name + ")");
}

GraphFunction apply_Kn(int64_t n, const GraphFunction& f, const Graph& g, int radius) {
    if (n < 1) throw InvalidParameter("K_n requires n >= 1");
    if (radius < 2 * n + 1)
        throw PreconditionViolated("apply_Kn requires radius >= 2n+1");
    std::string name = "K_" + std::to_string(n) + "(" + f.name + ")";
    // (K_n f)(v) = factor(d(a,v)) f(v): supported inside supp(f)
    if (const auto* t = f.finite_support()) {
        std::vector<VertexId> keys;
        for (const auto& [v, z] : t->table)
            if (z != Complex(0.0, 0.0)) keys.push_back(v);
        auto ds = distances_of(g, keys);
        std::map<VertexId, Complex> table;
        for (size_t i = 0; i < keys.size(); ++i) {
            int64_t d = ds[i];
            if (d >= 2 * n) continue;
            Complex z = t->table.at(keys[i]);
            if (d > n) z *= double(2 * n - d) / double(d);
            if (z != Complex(0.0, 0.0)) table.emplace(keys[i], z);
        }
        return make_table(std::move(table), std::move(name));
    }
    Ball ball = make_ball(g, radius);
    lip::BallField ff = lip::evaluate_field(f, g, ball);
    std::map<VertexId, Complex> table;
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        int64_t d = ball.dist[i];
        if (d >= 2 * n) continue;
        Complex z = at(ff, i);
        if (d > n) z *= double(2 * n - d) / double(d);
        if (z != Complex(0.0, 0.0)) table.emplace(ball.verts[i], z);
    }
    return make_table(std::move(table), std::move(name));
}

SymbolAnalysis analyze(const GraphFunction& psi, const Graph& g, int radius,
                       double grid_eps) {
    Ball ball = make_ball(g, radius);
    lip::BallField field = lip::evaluate_field(psi, g, ball);

    SymbolAnalysis a;
    a.symbol = psi.name;
    a.family = g.descriptor;
    a.radius = radius;
    a.sup_norm = lip::sup_norm(psi, g, ball, field);
    a.lip_norm = lip::norm(psi, g, ball, field);
    a.sigma = sigma_psi(psi, g, ball, field);
    a.bounded = boundedness(psi, g, ball, field);
    a.isometry = isometry_test(psi, g, radius);

    if (a.bounded.status != Status::Refuted) {
        a.A = tail_A(psi, g, ball, field);
        a.B = tail_B(psi, g, ball, field);
        Interval op;
        op.lo = Estimate{std::max(a.lip_norm.value, a.sup_norm.value),
                         (a.lip_norm.kind == Kind::Exact && a.sup_norm.kind == Kind::Exact)
                             ? Kind::Exact
                             : Kind::LowerBound,
                         radius, a.lip_norm.certified && a.sup_norm.certified,
                         "max(lip_norm, sup_norm)"};
        op.hi = Estimate{a.sup_norm.value + a.sigma.value,
                         (a.sup_norm.kind == Kind::Exact && a.sigma.kind == Kind::Exact)
                             ? Kind::Exact
                             : Kind::LowerBound,
                         radius, a.sup_norm.certified && a.sigma.certified,
                         "sup_norm + sigma"};
        a.op_norm = op;

        Interval ess;
        ess.lo = *a.A;
        bool cert = a.A->certified && a.B->certified;
        ess.hi = Estimate{4.0 * a.A->value + a.B->value,
                          cert ? Kind::Limit : Kind::UpperBound, radius, cert, "4A + B"};
        a.ess_norm = ess;

        a.compact_detail = compactness_detail(psi, g, ball, field);
        a.compact = a.compact_detail->overall;
        a.spec = spectrum(psi, g, radius, grid_eps);
    } else {
        a.compact.status = Status::Inconclusive;
        a.compact.radius = radius;
        a.compact.note = "M_psi is not bounded";
    }
    return a;
}

std::string to_json(const SymbolAnalysis& a) {
    io::JsonWriter w;
    w.begin_object();
    w.key("symbol").value(a.symbol);
    w.key("family").value(a.family);
    w.key("radius").value(a.radius);
    w.key("sup_norm");
    io::append_estimate(w, a.sup_norm, false);
    w.key("lip_norm");
    io::append_estimate(w, a.lip_norm, false);
    w.key("sigma");
    io::append_estimate(w, a.sigma, false);
    w.key("A");
    if (a.A) io::append_estimate(w, *a.A, false); else w.null();
    w.key("B");
    if (a.B) io::append_estimate(w, *a.B, false); else w.null();
    w.key("bounded");
    io::append_verdict(w, a.bounded);
    w.key("compact");
    io::append_verdict(w, a.compact);
    w.key("isometry");
    io::append_verdict(w, a.isometry);
    w.key("op_norm");
    if (a.op_norm) {
        w.begin_array();
        io::append_estimate(w, a.op_norm->lo, false);
        io::append_estimate(w, a.op_norm->hi, false);
        w.end_array();
    } else {
        w.null();
    }
    w.key("ess_norm");
    if (a.ess_norm) {
        w.begin_array();
        io::append_estimate(w, a.ess_norm->lo, false);
        io::append_estimate(w, a.ess_norm->hi, false);
        w.end_array();
    } else {
        w.null();
    }
    w.key("spectrum");
    if (a.spec) {
        w.begin_object();
        w.key("sample").begin_array();
        for (const Complex& z : a.spec->sample) w.value(z);
        w.end_array();
        w.key("extras").begin_array();
        for (const Complex& z : a.spec->closure_extras) w.value(z);
        w.end_array();
        w.end_object();
    } else {
        w.null();
    }
    w.end_object();
    return w.str();
}

} // namespace gll::op
