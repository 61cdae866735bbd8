#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gll/errors.hpp"
#include "gll/lipschitz.hpp"
#include "gll/io.hpp"
#include "gll/oracle.hpp"
#include "gll/rng.hpp"

using namespace gll;

namespace {

GraphFunction add_tables(const GraphFunction& a, const GraphFunction& b) {
    std::map<VertexId, Complex> t = a.finite_support()->table;
    for (const auto& [v, z] : b.finite_support()->table) t[v] += z;
    return make_table(std::move(t), "sum");
}

GraphFunction scale_table(const GraphFunction& a, Complex c) {
    std::map<VertexId, Complex> t = a.finite_support()->table;
    for (auto& [v, z] : t) z *= c;
    return make_table(std::move(t), "scaled");
}

} // namespace

TEST_CASE("seminorm and norm on the worked examples") {
    for (const char* fam : {"ray", "tree:3", "lattice:2", "ladder"}) {
        CAPTURE(fam);
        Graph g = make_graph(fam);
        Estimate s = lip::lip_seminorm(witness_distance(), g, 10);
        CHECK(s.value == 1.0);
        CHECK(s.kind == Kind::Exact);
        CHECK(s.certified);
    }
    Graph ray = make_graph("ray");

    Estimate c = lip::lip_seminorm(make_constant(Complex(5, 2)), ray, 10);
    CHECK(c.value == 0.0);
    CHECK(c.kind == Kind::Exact);

    // harmonic: max difference 1 at the root edge, certificate closes the tail
    Estimate h = lip::lip_seminorm(witness_harmonic(), ray, 10);
    CHECK(h.value == 1.0);
    CHECK(h.kind == Kind::Exact);

    Estimate n1 = lip::norm(witness_distance(), ray, 10);
    CHECK(n1.value == 1.0);
    Estimate n2 = lip::norm(witness_characteristic(ray.root), ray, 10);
    CHECK(n2.value == 2.0);
    CHECK(n2.kind == Kind::Exact);
    Estimate n3 = lip::norm(make_constant(Complex(0, 0)), ray, 10);
    CHECK(n3.value == 0.0);
    CHECK(n3.kind == Kind::Exact);
}

TEST_CASE("uncertified radial symbols stay LowerBound") {
    Graph ray = make_graph("ray");
    Estimate e = lip::lip_seminorm(parse_expression("sqrt(d)"), ray, 16);
    CHECK(e.kind == Kind::LowerBound);
    CHECK_FALSE(e.certified);
    CHECK(e.value == doctest::Approx(1.0)); // sqrt(1)-sqrt(0) dominates
}

TEST_CASE("rebased norm") {
    Graph ray = make_graph("ray");
    // ||f||^b = |f(b)| + seminorm = 3 + 1 = 4 = (n+1) ||f||^a at d(a,b)=3
    Estimate r = lip::norm_rebased(witness_distance(), ray, VertexId("3"), 10);
    CHECK(r.value == 4.0);
    CHECK(r.kind == Kind::Exact);

    Estimate rc = lip::norm_rebased(make_constant(Complex(0, -2.5)), ray, VertexId("7"), 10);
    CHECK(rc.value == 2.5);

    CHECK_THROWS_AS(lip::norm_rebased(witness_distance(), ray, VertexId("99"), 10),
                    InvalidVertex);

    // bracket on 100 random functions over the tree, b at distance 2
    Graph t3 = make_graph("tree:3");
    Ball ball = make_ball(t3, 8);
    SplitMix64 rng(5);
    VertexId b = ball.verts[size_t(ball.shell(2).first)];
    for (int i = 0; i < 100; ++i) {
        GraphFunction f = oracle::random_finite_support(t3, 8, rng);
        lip::BallField field = lip::evaluate_field(f, t3, ball);
        double na = lip::norm(f, t3, ball, field).value;
        double nb = lip::norm_rebased(f, t3, b, ball, field).value;
        CHECK(nb >= na / 3.0 - 1e-12);
        CHECK(nb <= 3.0 * na + 1e-12);
    }
}

TEST_CASE("pointwise bound holds") {
    Graph ray = make_graph("ray");
    CHECK(lip::pointwise_bound_check(witness_distance(), ray, 12).status ==
          Status::Proven);
    CHECK(lip::pointwise_bound_check(make_constant(Complex(3, 1)), ray, 12).status ==
          Status::Proven);

    Graph ladder = make_graph("ladder");
    SplitMix64 rng(7);
    for (int i = 0; i < 50; ++i) {
        GraphFunction f = oracle::random_finite_support(ladder, 20, rng);
        CHECK(lip::pointwise_bound_check(f, ladder, 20).status == Status::Proven);
    }

    // point-evaluation bound |f(z)| <= max{1, d} ||f||
    Ball ball = make_ball(ladder, 20);
    for (int i = 0; i < 50; ++i) {
        GraphFunction f = oracle::random_finite_support(ladder, 20, rng);
        lip::BallField field = lip::evaluate_field(f, ladder, ball);
        double nf = lip::norm(f, ladder, ball, field).value;
        for (size_t j = 0; j < ball.vertex_count(); ++j) {
            double fz = std::abs(f.eval(ladder, ball.verts[j], ball.dist[j]));
            CHECK(fz <= std::max(1.0, double(ball.dist[j])) * nf + 1e-12);
        }
    }
}

TEST_CASE("omega witness attains the distance") {
    Graph ray = make_graph("ray");
    auto [v0, w0] = lip::omega(ray, VertexId("0"));
    CHECK(v0 == 0);
    CHECK(*w0.constant_value == Complex(0, 0));

    auto [v5, w5] = lip::omega(ray, VertexId("5"));
    CHECK(v5 == 5);
    CHECK(std::abs(w5.eval(ray, VertexId("5"))) == 5.0);
    CHECK(lip::norm(w5, ray, 12).value == 1.0);

    Graph t3 = make_graph("tree:3");
    VertexId deep("0.1.0.1");
    auto [vd, wd] = lip::omega(t3, deep);
    CHECK(vd == 4);
    CHECK(std::abs(wd.eval(t3, deep)) == 4.0);
    CHECK(lip::norm(wd, t3, 10).value == 1.0);
}

TEST_CASE("little Lipschitz diagnostic") {
    Graph ray = make_graph("ray");

    auto harm = lip::little_lipschitz_diagnostic(witness_harmonic(), ray, {8, 16, 32});
    CHECK(harm.verdict.status == Status::Proven);
    for (size_t n = 0; n < harm.profile.values.size(); ++n)
        CHECK(harm.profile.values[n] <= 1.0 / double(n + 1) + 1e-15);

    auto dist = lip::little_lipschitz_diagnostic(witness_distance(), ray, {16, 32});
    CHECK(dist.verdict.status == Status::Refuted);

    auto sq = lip::little_lipschitz_diagnostic(parse_expression("sqrt(d)"), ray,
                                               {8, 16, 32});
    CHECK(sq.verdict.status == Status::NumericalEvidence);
    // profile does trend to zero
    CHECK(sq.profile.values[30] < sq.profile.values[1]);

    auto chi = lip::little_lipschitz_diagnostic(witness_characteristic(VertexId("3")),
                                                ray, {16});
    CHECK(chi.verdict.status == Status::Proven);

    CHECK_THROWS_AS(lip::little_lipschitz_diagnostic(witness_harmonic(), ray, {}),
                    PreconditionViolated);
    CHECK_THROWS_AS(lip::little_lipschitz_diagnostic(witness_harmonic(), ray, {8, 8}),
                    PreconditionViolated);
}

TEST_CASE("growth ratio profile") {
    Graph ray = make_graph("ray");
    ShellProfile p = lip::growth_ratio_profile(witness_harmonic(), ray, 32);
    double h30 = 0;
    for (int k = 1; k <= 30; ++k) h30 += 1.0 / k;
    CHECK(p.first_shell == 1);
    CHECK(p.values[29] == doctest::Approx(h30 / 30).epsilon(1e-14)); // ~0.13317
    ShellProfile q = lip::growth_ratio_profile(witness_distance(), ray, 16);
    for (double v : q.values) CHECK(v == 1.0);
    ShellProfile t = lip::growth_ratio_profile(witness_tent(5), ray, 14);
    CHECK(t.values[11] == 0.0); // shell 12: support ended
}

TEST_CASE("density construction on the harmonic witness") {
    Graph ray = make_graph("ray");
    GraphFunction h = witness_harmonic();

    auto r1 = lip::finite_support_approximation(h, ray, 0.5);
    CHECK(r1.N == 33); // smallest n with 1/(n+1) < 1/8 and H_n/n < 1/8
    CHECK(*r1.approximant.support_radius(ray) <= 2 * r1.N);
    CHECK(r1.achieved.value < 0.5);
    CHECK(r1.achieved.kind == Kind::Exact);

    auto r2 = lip::finite_support_approximation(h, ray, 0.1);
    CHECK(r2.achieved.value < 0.1);
    CHECK(r2.N > r1.N);

    // already finitely supported
    auto r3 = lip::finite_support_approximation(witness_tent(8), ray, 0.05);
    CHECK(r3.achieved.value == 0.0);
    auto r4 = lip::finite_support_approximation(witness_characteristic(VertexId("2")),
                                                ray, 0.1);
    CHECK(r4.achieved.value == 0.0);

    // no certificate: sqrt(d) must be rejected without a forced N
    CHECK_THROWS_AS(lip::finite_support_approximation(parse_expression("sqrt(d)"), ray,
                                                      0.5),
                    NoCertificate);
    auto forced = lip::finite_support_approximation(parse_expression("sqrt(d)"), ray,
                                                    0.5, 16);
    CHECK(forced.N == 16);

    // works on other families too
    Graph ladder = make_graph("ladder");
    auto r5 = lip::finite_support_approximation(h, ladder, 0.5);
    CHECK(r5.achieved.value < 0.5);
}

TEST_CASE("strong null diagnostic on the three sequences") {
    Graph ray = make_graph("ray");
    std::vector<double> grid{0.5, 0.1};

    // (1/n) tent(3): norms 1/n -> 0, both conditions hold
    std::vector<GraphFunction> a;
    for (int n = 1; n <= 6; ++n)
        a.push_back(scaled(witness_tent(3), Complex(1.0 / n, 0)));
    auto ra = lip::strong_null_diagnostic(a, ray, 16, grid);
    CHECK(ra.norms.front() == doctest::Approx(1.0));
    CHECK(ra.norms.back() == doctest::Approx(1.0 / 6));
    for (auto& [eps, N] : ra.eps_to_N) CHECK(N.has_value());
    // the support stays fixed: N_eps stabilizes across the prefix
    CHECK(*ra.eps_prefix_N[0].back() == *ra.eps_prefix_N[0].front());

    // chi at escaping vertices: pointwise -> 0 but norms stay 1 and the
    // jump of size 1 moves outward, so N_eps grows with the prefix
    std::vector<GraphFunction> b;
    for (int n = 6; n <= 11; ++n)
        b.push_back(witness_characteristic(VertexId(std::to_string(n))));
    auto rb = lip::strong_null_diagnostic(b, ray, 16, {0.5});
    for (double nm : rb.norms) CHECK(nm == 1.0);
    for (double pw : rb.pointwise) CHECK(pw == 0.0); // vanish on the fixed sample
    REQUIRE(rb.eps_prefix_N.size() == 1);
    REQUIRE(rb.eps_prefix_N[0].size() == b.size());
    CHECK(*rb.eps_prefix_N[0].back() > *rb.eps_prefix_N[0].front());

    // tent(n)/n: norms exactly 1/n, slopes 1/n everywhere
    std::vector<GraphFunction> c;
    for (int n = 1; n <= 5; ++n)
        c.push_back(scaled(witness_tent(n), Complex(1.0 / n, 0)));
    auto rc = lip::strong_null_diagnostic(c, ray, 16, grid);
    for (size_t i = 0; i < rc.norms.size(); ++i)
        CHECK(rc.norms[i] == doctest::Approx(1.0 / double(i + 1)));
}

TEST_CASE("separation witness") {
    Graph ray = make_graph("ray");
    GraphFunction zero = make_table({}, "0");

    Verdict v = lip::separation_witness_check(witness_characteristic(VertexId("4")),
                                              zero, ray, 10);
    CHECK(v.status == Status::Proven);
    REQUIRE(v.witness_edge.has_value());
    CHECK((v.witness_edge->v.enc == "4" || v.witness_edge->w.enc == "4"));

    CHECK_THROWS_AS(lip::separation_witness_check(zero, zero, ray, 10),
                    PreconditionViolated);
    CHECK_THROWS_AS(
        lip::separation_witness_check(make_constant(Complex(0.5, 0)), zero, ray, 10),
        PreconditionViolated);

    // random 0/1 labelings on the tree differing at one vertex
    Graph t3 = make_graph("tree:3");
    Ball ball = make_ball(t3, 10);
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<VertexId, Complex> ta, tb;
        for (size_t i = 1; i < ball.vertex_count(); ++i) {
            if (ball.dist[i] > 8) break;
            double bit = double(rng.next_u64() & 1);
            if (bit != 0.0) {
                ta.emplace(ball.verts[i], Complex(1, 0));
                tb.emplace(ball.verts[i], Complex(1, 0));
            }
        }
        size_t flip = 1 + rng.next_below(size_t(ball.shell(8).second) - 1);
        VertexId fv = ball.verts[flip];
        if (tb.count(fv)) tb.erase(fv);
        else tb.emplace(fv, Complex(1, 0));
        Verdict w = lip::separation_witness_check(make_table(std::move(ta)),
                                                  make_table(std::move(tb)), t3, 10);
        CHECK(w.status == Status::Proven);
    }
}

TEST_CASE("norm axioms on exact finite-support cases") {
    Graph t3 = make_graph("tree:3");
    SplitMix64 rng(21);
    for (int i = 0; i < 60; ++i) {
        GraphFunction f = oracle::random_finite_support(t3, 8, rng);
        GraphFunction h = oracle::random_finite_support(t3, 8, rng);
        double nf = lip::norm(f, t3, 8).value;
        double nh = lip::norm(h, t3, 8).value;
        Complex lambda(1.25, -0.5);
        CHECK(lip::norm(scale_table(f, lambda), t3, 8).value ==
              doctest::Approx(std::abs(lambda) * nf).epsilon(1e-12));
        CHECK(lip::norm(add_tables(f, h), t3, 8).value <= nf + nh + 1e-12);
    }
}

TEST_CASE("profiles, estimates and verdicts serialize per the interface") {
    Graph ray = make_graph("ray");
    ShellProfile p = lip::growth_ratio_profile(witness_distance(), ray, 3);
    std::string csv = io::to_csv(p);
    CHECK(csv == "shell,n,value\ngrowth_ratio,1,1\ngrowth_ratio,2,1\ngrowth_ratio,3,1\n");

    Estimate e = lip::norm(witness_distance(), ray, 8);
    std::string j = io::to_json(e);
    CHECK(j ==
          "{\"value\":1,\"kind\":\"Exact\",\"radius\":8,\"certified\":true,"
          "\"note\":\"tail certificate\"}");

    Verdict v = lip::pointwise_bound_check(witness_distance(), ray, 8);
    std::string vj = io::to_json(v);
    CHECK(vj.find("\"status\":\"Proven\"") != std::string::npos);
    CHECK(vj.find("\"radius\":8") != std::string::npos);
    CHECK(vj.find("\"witness\":null") != std::string::npos);
}

TEST_CASE("seminorm is monotone in the radius") {
    Graph ray = make_graph("ray");
    for (const auto& f : {parse_expression("sqrt(d)"), witness_harmonic()}) {
        double prev = 0;
        for (int r : {4, 8, 16, 32}) {
            double v = lip::lip_seminorm(f, ray, r).value;
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
}
