#include "gll/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gll/errors.hpp"
#include "gll/kernels.hpp"

namespace gll::lip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double vabs(const BallField& f, size_t i) {
    return std::sqrt(f.re[i] * f.re[i] + f.im[i] * f.im[i]);
}

} // namespace

BallField evaluate_field(const GraphFunction& f, const Graph& g, const Ball& ball) {
    BallField out;
    out.ball = &ball;
    size_t n = ball.vertex_count();
    out.re.assign(n, 0.0);
    out.im.assign(n, 0.0);

    if (const auto* t = f.finite_support()) {
        for (const auto& [v, z] : t->table) {
            int32_t i = ball.index_of(v);
            if (i >= 0) {
                out.re[size_t(i)] = z.real();
                out.im[size_t(i)] = z.imag();
            }
        }
    } else if (f.is_radial()) {
        // one evaluation per shell
        for (int s = 0; s <= ball.radius; ++s) {
            auto [lo, hi] = ball.shell(s);
            if (lo == hi) continue;
            Complex z = f.eval_radial(s);
            for (int32_t i = lo; i < hi; ++i) {
                out.re[size_t(i)] = z.real();
                out.im[size_t(i)] = z.imag();
            }
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            Complex z = f.eval(g, ball.verts[i], ball.dist[i]);
            out.re[i] = z.real();
            out.im[i] = z.imag();
        }
    }

    size_t m = ball.edge_count();
    out.esre.resize(m);
    out.esim.resize(m);
    out.edre.resize(m);
    out.edim.resize(m);
    out.ew.resize(m);
    for (size_t e = 0; e < m; ++e) {
        size_t s = size_t(ball.esrc[e]);
        size_t d = size_t(ball.edst[e]);
        out.esre[e] = out.re[s];
        out.esim[e] = out.im[s];
        out.edre[e] = out.re[d];
        out.edim[e] = out.im[d];
        out.ew[e] = double(ball.dist[s]);
    }
    return out;
}

namespace {

struct ArgmaxEdge {
    double value = 0.0;
    int64_t edge = -1;
};

ArgmaxEdge argmax_edge_diff(const BallField& f) {
    ArgmaxEdge best;
    size_t m = f.esre.size();
    if (m == 0) return best;
    double target = kernels::max_diff_abs2(f.esre.data(), f.esim.data(), f.edre.data(),
                                           f.edim.data(), m);
    best.value = std::sqrt(target);
    for (size_t e = 0; e < m; ++e) {
        double dr = f.esre[e] - f.edre[e];
        double di = f.esim[e] - f.edim[e];
        if (dr * dr + di * di == target) {
            best.edge = int64_t(e);
            break;
        }
    }
    return best;
}

// Promotion of a ball supremum per the exactness rule. `support_slack` is
// how far inside the ball the support must sit (R-1 for unweighted sups).
struct Promotion {
    bool exact = false;
    bool cert_divergent = false;
    std::string note;
};

Promotion promote(const GraphFunction& f, const Graph& g, double observed,
                  const std::function<double(int64_t)>& tail, int64_t tail_at,
                  int64_t support_slack) {
    Promotion p;
    if (auto sr = f.support_radius(g); sr && *sr <= support_slack) {
        p.exact = true;
        p.note = "finite support";
        return p;
    }
    if (f.tail && tail && tail_at >= f.tail->valid_from) {
        double tv = tail(tail_at);
        if (std::isinf(tv)) {
            p.cert_divergent = true;
            p.note = "certified divergent tail";
            return p;
        }
        if (tv <= observed) {
            p.exact = true;
            p.note = "tail certificate";
        }
    }
    return p;
}

} // namespace

Estimate lip_seminorm(const GraphFunction& f, const Graph& g, const Ball& ball,
                      const BallField& field) {
    double observed = argmax_edge_diff(field).value;
    const auto* tail = f.tail && f.tail->sup_diff_tail ? &f.tail->sup_diff_tail : nullptr;
    Promotion p = promote(f, g, observed,
                          tail ? *tail : std::function<double(int64_t)>(), ball.radius,
                          int64_t(ball.radius) - 1);
    if (p.cert_divergent)
        return {kInf, Kind::Exact, ball.radius, true, p.note};
    if (p.exact) return Estimate::exact(observed, ball.radius, true, p.note);
    return Estimate::lower(observed, ball.radius);
}

Estimate lip_seminorm(const GraphFunction& f, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    return lip_seminorm(f, g, ball, field);
}

Estimate norm(const GraphFunction& f, const Graph& g, const Ball& ball,
              const BallField& field) {
    Estimate sem = lip_seminorm(f, g, ball, field);
    sem.value += vabs(field, 0); // root is vertex 0
    return sem;
}

Estimate norm(const GraphFunction& f, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    return norm(f, g, ball, field);
}

Estimate norm_rebased(const GraphFunction& f, const Graph& g, const VertexId& b,
                      const Ball& ball, const BallField& field) {
    int32_t bi = ball.index_of(b);
    if (bi < 0)
        throw InvalidVertex("rebase vertex '" + b.enc + "' is outside the ball");
    Estimate sem = lip_seminorm(f, g, ball, field);
    sem.value += vabs(field, size_t(bi));
    return sem;
}

Estimate norm_rebased(const GraphFunction& f, const Graph& g, const VertexId& b,
                      int radius) {
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    return norm_rebased(f, g, b, ball, field);
}

Estimate sup_norm(const GraphFunction& f, const Graph& g, const Ball& ball,
                  const BallField& field) {
    double observed =
        std::sqrt(kernels::max_abs2(field.re.data(), field.im.data(), field.re.size()));
    if (auto sr = f.support_radius(g); sr && *sr <= ball.radius)
        return Estimate::exact(observed, ball.radius, true, "finite support");
    if (f.tail && f.tail->sup_abs_tail &&
        int64_t(ball.radius) + 1 >= f.tail->valid_from) {
        double tv = f.tail->sup_abs_tail(int64_t(ball.radius) + 1);
        if (std::isinf(tv))
            return {kInf, Kind::Exact, ball.radius, true, "certified divergent tail"};
        return Estimate::exact(std::max(observed, tv), ball.radius, true,
                               "tail certificate");
    }
    return Estimate::lower(observed, ball.radius);
}

Verdict pointwise_bound_check(const GraphFunction& f, const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    Estimate sem = lip_seminorm(f, g, ball, field);
    double fa = vabs(field, 0);

    Verdict v;
    v.radius = radius;
    if (std::isinf(sem.value)) {
        v.status = Status::Proven;
        v.note = "seminorm certified divergent; bound trivial";
        return v;
    }
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        double lhs = vabs(field, i);
        double rhs = fa + double(ball.dist[i]) * sem.value;
        double tol = std::max(kAbsTol, kRelTol * std::max(std::abs(lhs), std::abs(rhs)));
        if (lhs > rhs + tol) {
            v.status = sem.kind == Kind::Exact ? Status::Refuted : Status::Inconclusive;
            v.witness_vertex = ball.verts[i];
            v.witness_value = lhs - rhs;
            v.note = sem.kind == Kind::Exact
                         ? "bound violated with exact seminorm"
                         : "violation against a lower-bound seminorm is not conclusive";
            return v;
        }
    }
    v.status = Status::Proven;
    v.note = "|f(z)| <= |f(a)| + d(a,z) * seminorm on the ball";
    return v;
}

std::pair<int64_t, GraphFunction> omega(const Graph& g, const VertexId& v) {
    int64_t d = distance(g, v);
    if (d == 0) return {0, make_constant(Complex(0.0, 0.0))};
    return {d, witness_tent(d)};
}

ShellProfile edge_diff_profile(const BallField& field) {
    const Ball& ball = *field.ball;
    ShellProfile p;
    p.quantity = "max_edge_diff";
    if (ball.radius == 0) return p;
    p.values.assign(size_t(ball.radius), 0.0);
    // group each edge by the inner endpoint shell
    for (size_t e = 0; e < field.esre.size(); ++e) {
        int32_t n = std::min(ball.dist[size_t(ball.esrc[e])],
                             ball.dist[size_t(ball.edst[e])]);
        double dr = field.esre[e] - field.edre[e];
        double di = field.esim[e] - field.edim[e];
        double m = std::sqrt(dr * dr + di * di);
        if (m > p.values[size_t(n)]) p.values[size_t(n)] = m;
    }
    return p;
}

ShellProfile shell_abs_profile(const BallField& field) {
    const Ball& ball = *field.ball;
    ShellProfile p;
    p.quantity = "sup_abs";
    p.values.assign(size_t(ball.radius) + 1, 0.0);
    for (int s = 0; s <= ball.radius; ++s) {
        auto [lo, hi] = ball.shell(s);
        p.values[size_t(s)] = std::sqrt(kernels::max_abs2(
            field.re.data() + lo, field.im.data() + lo, size_t(hi - lo)));
    }
    return p;
}

ShellProfile growth_ratio_profile(const GraphFunction& f, const Graph& g, int radius) {
    if (radius < 1) throw InvalidParameter("growth profile needs radius >= 1");
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    ShellProfile abs = shell_abs_profile(field);
    ShellProfile p;
    p.quantity = "growth_ratio";
    p.first_shell = 1;
    for (int n = 1; n <= radius; ++n)
        p.values.push_back(abs.values[size_t(n)] / double(n));
    return p;
}

LittleLipschitzReport little_lipschitz_diagnostic(const GraphFunction& f, const Graph& g,
                                                  const std::vector<int>& radius_schedule) {
    if (radius_schedule.empty())
        throw PreconditionViolated("radius schedule must be nonempty");
    for (size_t i = 1; i < radius_schedule.size(); ++i)
        if (radius_schedule[i] <= radius_schedule[i - 1])
            throw PreconditionViolated("radius schedule must be increasing");

    int radius = radius_schedule.back();
    Ball ball = make_ball(g, radius);
    BallField field = evaluate_field(f, g, ball);
    LittleLipschitzReport rep;
    rep.profile = edge_diff_profile(field);

    Verdict& v = rep.verdict;
    v.radius = radius;

    if (f.tail && f.tail->diff_limit) {
        if (essentially_zero(*f.tail->diff_limit)) {
            v.status = Status::Proven;
            v.note = "certified: edge differences tend to 0";
        } else {
            v.status = Status::Refuted;
            v.witness_value = *f.tail->diff_limit;
            v.note = "certified: edge differences do not vanish (limit " +
                     std::to_string(*f.tail->diff_limit) + ")";
            // witness edge from the deepest profiled shell
            if (!rep.profile.values.empty()) {
                for (size_t e = field.esre.size(); e-- > 0;) {
                    int32_t n = std::min(ball.dist[size_t(ball.esrc[e])],
                                         ball.dist[size_t(ball.edst[e])]);
                    if (n == radius - 1) {
                        v.witness_edge = EdgeWitness{ball.verts[size_t(ball.esrc[e])],
                                                     ball.verts[size_t(ball.edst[e])]};
                        break;
                    }
                }
            }
        }
        return rep;
    }
    if (auto sr = f.support_radius(g); sr && *sr + 1 < int64_t(radius)) {
        v.status = Status::Proven;
        v.note = "finite support: differences vanish beyond the support";
        return rep;
    }
    v.status = Status::NumericalEvidence;
    std::string trend = "M_n at schedule radii:";
    for (int r : radius_schedule) {
        size_t idx = size_t(std::max(0, r - 1));
        if (idx < rep.profile.values.size())
            trend += " " + std::to_string(rep.profile.values[idx]);
    }
    v.note = trend;
    return rep;
}

ApproximationResult finite_support_approximation(const GraphFunction& gfun, const Graph& g,
                                                 double eps,
                                                 std::optional<int64_t> forced_N) {
    if (eps <= 0) throw InvalidParameter("eps must be positive");

    // already finitely supported: nothing to do
    if (auto sr = gfun.support_radius(g); sr && !forced_N) {
        ApproximationResult res{gfun, Estimate::exact(0.0, 0, true, "input already finitely supported"),
                                std::max<int64_t>(*sr, 0)};
        return res;
    }

    int64_t N;
    if (forced_N) {
        N = *forced_N;
        if (N < 1) throw InvalidParameter("forced N must be >= 1");
    } else {
        const TailCertificate* t = gfun.tail ? &*gfun.tail : nullptr;
        if (!t || !t->sup_diff_tail || !t->sup_growth_tail)
            throw NoCertificate(
                "finite_support_approximation needs little-Lipschitz and growth "
                "certificates (or a forced N)");
        double quarter = eps / 4.0;
        int64_t n = std::max<int64_t>(std::max<int64_t>(t->valid_from, 1), 1);
        for (;; ++n) {
            if (t->sup_diff_tail(n) < quarter && t->sup_growth_tail(n) < quarter) break;
            if (n > 100'000'000)
                throw NoCertificate("certified tails do not reach eps/4");
        }
        N = n;
    }

    int radius = int(2 * N + 2);
    Ball ball = make_ball(g, radius);
    BallField gf = evaluate_field(gfun, g, ball);

    // f = g inside B_N, ((2N-d)/d) g on N..2N, 0 beyond
    std::map<VertexId, Complex> table;
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        int64_t d = ball.dist[i];
        if (d >= 2 * N) continue;
        Complex z(gf.re[i], gf.im[i]);
        if (d > N) z *= double(2 * N - d) / double(d);
        if (z != Complex(0.0, 0.0)) table.emplace(ball.verts[i], z);
    }
    GraphFunction f = make_table(std::move(table),
                                 "approx(" + gfun.name + ", N=" + std::to_string(N) + ")");

    // h = g - f, evaluated exactly on the same ball
    BallField ff = evaluate_field(f, g, ball);
    BallField hf;
    hf.ball = &ball;
    size_t nv = ball.vertex_count();
    hf.re.resize(nv);
    hf.im.resize(nv);
    for (size_t i = 0; i < nv; ++i) {
        hf.re[i] = gf.re[i] - ff.re[i];
        hf.im[i] = gf.im[i] - ff.im[i];
    }
    size_t ne = ball.edge_count();
    hf.esre.resize(ne);
    hf.esim.resize(ne);
    hf.edre.resize(ne);
    hf.edim.resize(ne);
    hf.ew.resize(ne);
    for (size_t e = 0; e < ne; ++e) {
        size_t s = size_t(ball.esrc[e]);
        size_t d = size_t(ball.edst[e]);
        hf.esre[e] = hf.re[s];
        hf.esim[e] = hf.im[s];
        hf.edre[e] = hf.re[d];
        hf.edim[e] = hf.im[d];
        hf.ew[e] = double(ball.dist[s]);
    }

    double observed = argmax_edge_diff(hf).value + vabs(hf, 0); // h(a) = 0
    Estimate achieved = Estimate::lower(observed, radius);
    // beyond 2N the difference equals g; its certified tail closes the sup
    if (gfun.tail && gfun.tail->sup_diff_tail &&
        2 * N + 1 >= gfun.tail->valid_from &&
        gfun.tail->sup_diff_tail(2 * N + 1) <= observed) {
        achieved = Estimate::exact(observed, radius, true, "tail certificate");
    }
    achieved.note += (achieved.note.empty() ? "" : "; ") + std::string("N=") +
                     std::to_string(N);
    return ApproximationResult{std::move(f), achieved, N};
}

StrongNullReport strong_null_diagnostic(const std::vector<GraphFunction>& seq,
                                        const Graph& g, int radius,
                                        const std::vector<double>& eps_grid) {
    if (seq.empty()) throw PreconditionViolated("sequence prefix must be nonempty");
    Ball ball = make_ball(g, radius);

    StrongNullReport rep;
    // pointwise convergence is observed at a fixed finite vertex set
    size_t samples = ball.vertex_count();
    {
        int cap = std::min(ball.radius, 4);
        samples = std::min<size_t>(
            std::min<size_t>(64, ball.vertex_count()),
            size_t(ball.shell_begin[size_t(cap) + 1]));
    }

    std::vector<std::vector<double>> profiles;
    for (const auto& f : seq) {
        BallField field = evaluate_field(f, g, ball);
        Estimate nm = norm(f, g, ball, field);
        rep.norms.push_back(nm.value);
        double pw = 0.0;
        for (size_t i = 0; i < samples; ++i) pw = std::max(pw, vabs(field, i));
        rep.pointwise.push_back(pw);
        profiles.push_back(edge_diff_profile(field).values);
    }

    auto smallest_N = [&](const std::vector<double>& combined,
                          double eps) -> std::optional<int> {
        std::vector<double> suffix = combined;
        for (size_t n = suffix.size(); n-- > 1;)
            suffix[n - 1] = std::max(suffix[n - 1], suffix[n]);
        for (size_t n = 0; n < suffix.size(); ++n)
            if (suffix[n] < eps) return int(n);
        return std::nullopt;
    };

    rep.eps_prefix_N.resize(eps_grid.size());
    std::vector<double> combined(size_t(std::max(ball.radius, 1)), 0.0);
    for (size_t k = 0; k < profiles.size(); ++k) {
        for (size_t n = 0; n < profiles[k].size(); ++n)
            combined[n] = std::max(combined[n], profiles[k][n]);
        for (size_t e = 0; e < eps_grid.size(); ++e)
            rep.eps_prefix_N[e].push_back(smallest_N(combined, eps_grid[e]));
    }
    for (size_t e = 0; e < eps_grid.size(); ++e)
        rep.eps_to_N.emplace_back(eps_grid[e], rep.eps_prefix_N[e].back());

    Verdict& v = rep.verdict;
    v.radius = radius;
    v.status = Status::NumericalEvidence;
    std::string note = "norms:";
    for (double x : rep.norms) note += " " + std::to_string(x);
    note += "; pointwise:";
    for (double x : rep.pointwise) note += " " + std::to_string(x);
    note += "; N_eps:";
    for (auto& [eps, N] : rep.eps_to_N)
        note += " (" + std::to_string(eps) + " -> " +
                (N ? std::to_string(*N) : std::string("none")) + ")";
    v.note = note;
    return rep;
}

Verdict separation_witness_check(const GraphFunction& f, const GraphFunction& h,
                                 const Graph& g, int radius) {
    Ball ball = make_ball(g, radius);
    BallField ff = evaluate_field(f, g, ball);
    BallField hh = evaluate_field(h, g, ball);

    auto is01 = [](double re, double im) {
        return im == 0.0 && (re == 0.0 || re == 1.0);
    };
    for (size_t i = 0; i < ball.vertex_count(); ++i) {
        if (!is01(ff.re[i], ff.im[i]) || !is01(hh.re[i], hh.im[i]))
            throw PreconditionViolated("functions must be {0,1}-valued on the ball");
    }
    if (ff.re[0] != 0.0 || hh.re[0] != 0.0)
        throw PreconditionViolated("f(a) and h(a) must both be 0");

    bool differs = false;
    for (size_t i = 0; i < ball.vertex_count() && !differs; ++i)
        if (ball.dist[i] <= radius - 1 && ff.re[i] != hh.re[i]) differs = true;
    if (!differs)
        throw PreconditionViolated("f and h agree on B_{R-1}");

    Verdict v;
    v.radius = radius;
    for (size_t e = 0; e < ball.esrc.size(); ++e) {
        size_t s = size_t(ball.esrc[e]);
        size_t d = size_t(ball.edst[e]);
        double us = ff.re[s] - hh.re[s];
        double ud = ff.re[d] - hh.re[d];
        if (std::abs(us - ud) >= 1.0) {
            v.status = Status::Proven;
            v.witness_edge = EdgeWitness{ball.verts[s], ball.verts[d]};
            v.witness_value = std::abs(us - ud);
            v.note = "|(f-h)(v) - (f-h)(w)| >= 1 at the witness edge";
            return v;
        }
    }
    v.status = Status::Inconclusive;
    v.note = "no separating edge found (unreachable for valid inputs)";
    return v;
}

} // namespace gll::lip
