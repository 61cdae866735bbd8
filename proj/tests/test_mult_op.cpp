#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gll/errors.hpp"
#include "gll/mult_op.hpp"
#include "gll/oracle.hpp"
#include "gll/rng.hpp"

using namespace gll;

namespace {

// independent sigma enumeration on the ray, for frozen expected values
double ray_sigma_direct(const GraphFunction& psi, int R) {
    Graph ray = make_graph("ray");
    double best = 0;
    for (int n = 0; n + 1 <= R; ++n) {
        double diff = std::abs(psi.eval_radial(n) - psi.eval_radial(n + 1));
        best = std::max(best, double(n) * diff);     // source n, target n+1
        if (n + 1 <= R - 1) best = std::max(best, double(n + 1) * diff);
    }
    return best;
}

} // namespace

TEST_CASE("sigma_psi on the worked examples") {
    Graph ray = make_graph("ray");
    GraphFunction recip = parse_expression("1/(d+1)");

    Estimate s = op::sigma_psi(recip, ray, 64);
    CHECK(s.value == doctest::Approx(0.5).epsilon(1e-15)); // pair (v at 1, root)
    CHECK(s.kind == Kind::Exact);
    CHECK(s.value == doctest::Approx(ray_sigma_direct(recip, 64)));

    Estimate c = op::sigma_psi(make_constant(Complex(4, -1)), ray, 16);
    CHECK(c.value == 0.0);
    CHECK(c.kind == Kind::Exact);

    Estimate chi = op::sigma_psi(witness_characteristic(ray.root), ray, 16);
    CHECK(chi.value == 1.0); // ordered pair (neighbor of a, a)
    CHECK(chi.kind == Kind::Exact);

    // sqrt(d): LowerBound growing without bound
    GraphFunction sq = parse_expression("sqrt(d)");
    double prev = 0;
    for (int R : {16, 32, 64}) {
        Estimate e = op::sigma_psi(sq, ray, R);
        CHECK(e.kind == Kind::LowerBound);
        CHECK(e.value > prev);
        prev = e.value;
    }
    CHECK(prev > 3.9); // ~ sqrt(R)/2 at R=64
}

TEST_CASE("boundedness trichotomy") {
    Graph ray = make_graph("ray");
    CHECK(op::boundedness(parse_expression("1/(d+1)"), ray, 32).status ==
          Status::Proven);
    CHECK(op::boundedness(make_constant(Complex(3, 0)), ray, 16).status ==
          Status::Proven);
    CHECK(op::boundedness(witness_distance(), ray, 32).status == Status::Refuted);
    CHECK(op::boundedness(witness_harmonic(), ray, 32).status == Status::Refuted);
    CHECK(op::boundedness(parse_expression("sqrt(d)"), ray, 32).status ==
          Status::NumericalEvidence);
    CHECK(op::boundedness(witness_tent(4), ray, 16).status == Status::Proven);
}

TEST_CASE("operator norm interval collapses on the three sharp cases") {
    Graph ray = make_graph("ray");

    op::Interval r = op::operator_norm_interval(parse_expression("1/(d+1)"), ray, 64);
    CHECK(r.lo.value == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.hi.value == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.lo.kind == Kind::Exact);
    CHECK(r.hi.kind == Kind::Exact);

    op::Interval chi = op::operator_norm_interval(witness_characteristic(ray.root), ray, 16);
    CHECK(chi.lo.value == 2.0);
    CHECK(chi.hi.value == 2.0);

    op::Interval c = op::operator_norm_interval(make_constant(Complex(0, -2.5)), ray, 16);
    CHECK(c.lo.value == 2.5);
    CHECK(c.hi.value == 2.5);

    CHECK_THROWS_AS(op::operator_norm_interval(witness_distance(), ray, 16),
                    UnboundedSymbol);
}

TEST_CASE("interval consistency for certified bounded symbols") {
    Graph ray = make_graph("ray");
    for (const auto& psi :
         {parse_expression("1/(d+1)"), make_constant(Complex(2, 1)),
          witness_tent(5), witness_characteristic(VertexId("3")),
          parse_expression("sum(1/k^2,k,1,d+1)")}) {
        op::Interval iv = op::operator_norm_interval(psi, ray, 32);
        CAPTURE(psi.name);
        CHECK(iv.lo.value <= iv.hi.value + 1e-12);
    }
}

TEST_CASE("compactness classifier reproduces the three verdicts") {
    Graph ray = make_graph("ray");

    // finite support: compact
    CHECK(op::compactness(witness_tent(3), ray, 16).status == Status::Proven);
    CHECK(op::compactness(witness_characteristic(VertexId("2")), ray, 16).status ==
          Status::Proven);

    // sin(d)/d with 1 at the root: value condition holds, diff condition fails
    Ball ball = make_ball(ray, 64);
    GraphFunction sinc = parse_expression("if d==0 then 1 else sin(d)/d");
    lip::BallField sf = lip::evaluate_field(sinc, ray, ball);
    op::CompactnessDetail ds = op::compactness_detail(sinc, ray, ball, sf);
    CHECK(ds.overall.status == Status::Refuted);
    CHECK(ds.condition_value.status == Status::Proven);
    CHECK(ds.condition_diff.status == Status::Refuted);
    CHECK(ds.overall.note.find("condition 2") != std::string::npos);

    // sum 1/k^2: diff condition holds, value condition fails (limit pi^2/6)
    GraphFunction basel = parse_expression("sum(1/k^2,k,1,d+1)");
    lip::BallField bf = lip::evaluate_field(basel, ray, ball);
    op::CompactnessDetail db = op::compactness_detail(basel, ray, ball, bf);
    CHECK(db.overall.status == Status::Refuted);
    CHECK(db.condition_value.status == Status::Refuted);
    CHECK(db.condition_diff.status == Status::Proven);
    CHECK(db.condition_value.witness_value ==
          doctest::Approx(M_PI * M_PI / 6).epsilon(1e-12));

    // nonzero constant: not compact; the zero symbol: compact
    CHECK(op::compactness(make_constant(Complex(2, 0)), ray, 16).status ==
          Status::Refuted);
    CHECK(op::compactness(make_constant(Complex(0, 0)), ray, 16).status ==
          Status::Proven);

    // certified compact: 1/(d+1)
    CHECK(op::compactness(parse_expression("1/(d+1)"), ray, 32).status ==
          Status::Proven);
}

TEST_CASE("essential norm interval") {
    Graph ray = make_graph("ray");

    op::Interval r = op::essential_norm_interval(parse_expression("1/(d+1)"), ray, 32);
    CHECK(r.lo.value == 0.0);
    CHECK(r.hi.value == 0.0);
    CHECK(r.lo.certified);
    CHECK(r.hi.certified);

    op::Interval c = op::essential_norm_interval(make_constant(Complex(-2, 0)), ray, 16);
    CHECK(c.lo.value == 2.0);
    CHECK(c.hi.value == 8.0);
    CHECK(c.lo.kind == Kind::Limit);

    op::Interval b =
        op::essential_norm_interval(parse_expression("sum(1/k^2,k,1,d+1)"), ray, 64);
    CHECK(b.lo.value == doctest::Approx(1.6449340668).epsilon(1e-9));
    CHECK(b.hi.value == doctest::Approx(4 * M_PI * M_PI / 6).epsilon(1e-12));
    CHECK(b.lo.certified);

    // A <= 4A + B always
    for (const auto& psi : {witness_tent(4), make_constant(Complex(1, 1)),
                            parse_expression("if d==0 then 1 else sin(d)/d")}) {
        op::Interval iv = op::essential_norm_interval(psi, ray, 32);
        CHECK(iv.lo.value <= iv.hi.value + 1e-15);
    }
}

TEST_CASE("spectrum of 1/(d+1) on the ray") {
    Graph ray = make_graph("ray");
    GraphFunction recip = parse_expression("1/(d+1)");
    op::SpectrumReport rep = op::spectrum(recip, ray, 64, 1e-9);

    REQUIRE(rep.sample.size() == 65); // {1, 1/2, ..., 1/65}
    for (int n = 0; n <= 64; ++n)
        CHECK(rep.sample[size_t(n)].real() == doctest::Approx(1.0 / (n + 1)));
    REQUIRE(rep.closure_extras.size() == 1);
    CHECK(rep.closure_extras[0] == Complex(0, 0));
    CHECK(rep.eigencheck.status == Status::Proven);
    CHECK(rep.eigencheck.witness_value == 0.0); // exact residual

    // constants: sample {c}, no extras (the limit equals the sample point)
    op::SpectrumReport cr = op::spectrum(make_constant(Complex(2, 1)), ray, 16, 1e-9);
    REQUIRE(cr.sample.size() == 1);
    CHECK(cr.sample[0] == Complex(2, 1));
    CHECK(cr.closure_extras.empty());
}

TEST_CASE("eigenvector identity holds exactly for sampled values") {
    Graph t3 = make_graph("tree:3");
    GraphFunction psi = parse_expression("1/(d+1) + sin(d)");
    op::SpectrumReport rep = op::spectrum(psi, t3, 8, 1e-9);
    Ball ball = make_ball(t3, 8);
    for (size_t k = 0; k < rep.sample.size(); ++k) {
        GraphFunction chi = witness_characteristic(rep.witnesses[k]);
        GraphFunction img = op::apply(psi, chi, t3, 8);
        // (psi chi_v)(w) == lambda chi_v(w) for every ball vertex
        for (size_t i = 0; i < ball.vertex_count(); ++i) {
            Complex lhs = img.eval(t3, ball.verts[i], ball.dist[i]);
            Complex rhs = rep.sample[k] * chi.eval(t3, ball.verts[i], ball.dist[i]);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("resolvent bounds") {
    Graph ray = make_graph("ray");
    GraphFunction recip = parse_expression("1/(d+1)");

    op::ResolventReport rep = op::resolvent_check(recip, Complex(2, 0), 1.0, ray, 64);
    CHECK(rep.phi.eval(ray, ray.root, 0) == Complex(-1, 0));
    CHECK(rep.sup_bound_ok);   // sup |phi| <= 1/c = 1
    CHECK(rep.sigma_bound_ok); // sigma_phi <= sigma_psi / c^2
    CHECK(rep.sigma_phi.value <= rep.sigma_psi.value + 1e-12);

    CHECK_THROWS_AS(op::resolvent_check(recip, Complex(1.0 / 3, 0), 1.0, ray, 64),
                    ResolventUndefined);
}

TEST_CASE("resolvent inverts M_psi - lambda on finite-support functions") {
    // (M_psi - lambda) M_{phi_lambda} f = f pointwise
    Graph ray = make_graph("ray");
    GraphFunction psi = parse_expression("1/(d+1)");
    Complex lambda(2, 0);
    GraphFunction phi = resolvent_symbol(psi, lambda, 1.0, ray, 32);
    Ball ball = make_ball(ray, 16);
    SplitMix64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        GraphFunction f = oracle::random_finite_support(ray, 16, rng);
        GraphFunction phif = op::apply(phi, f, ray, 16);
        for (size_t i = 0; i < ball.vertex_count(); ++i) {
            Complex pv = psi.eval(ray, ball.verts[i], ball.dist[i]);
            Complex lhs = (pv - lambda) * phif.eval(ray, ball.verts[i], ball.dist[i]);
            Complex rhs = f.eval(ray, ball.verts[i], ball.dist[i]);
            CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("isometry classification") {
    Graph ray = make_graph("ray");

    CHECK(op::isometry_test(make_constant(Complex(0, 1)), ray, 16).status ==
          Status::Proven);
    CHECK(op::isometry_test(parse_expression("i"), ray, 16).status == Status::Proven);

    Verdict two = op::isometry_test(make_constant(Complex(2, 0)), ray, 16);
    CHECK(two.status == Status::Refuted);
    CHECK(two.note.find("probe 1") != std::string::npos);
    CHECK(two.witness_value == 2.0);

    Verdict chi = op::isometry_test(witness_characteristic(ray.root), ray, 16);
    CHECK(chi.status == Status::Refuted);
    CHECK(chi.note.find("probe 1") != std::string::npos); // ||chi_a|| = 2

    Verdict recip = op::isometry_test(parse_expression("1/(d+1)"), ray, 16);
    CHECK(recip.status == Status::Refuted);
    CHECK(recip.note.find("probe 1") != std::string::npos); // ||psi|| = 3/2
    REQUIRE(recip.witness_edge.has_value()); // non-constancy witness at distance <= 1
    CHECK((recip.witness_edge->v.enc == "0" || recip.witness_edge->v.enc == "1"));

    // ||psi|| = 1 but |psi(a)| != 1: only probe 2 catches it
    GraphFunction sneaky = make_radial(
        [](int64_t n) { return Complex(n == 0 ? 0.5 : 1.0, 0.0); }, std::nullopt,
        "halfstep");
    TailCertificate t;
    t.sup_diff_tail = [](int64_t n) { return n == 0 ? 0.5 : 0.0; };
    t.sup_abs_tail = [](int64_t) { return 1.0; };
    sneaky.tail = t;
    Verdict sv = op::isometry_test(sneaky, ray, 16);
    CHECK(sv.status == Status::Refuted);
    CHECK(sv.note.find("probe 2") != std::string::npos);
}

TEST_CASE("apply is the pointwise product") {
    Graph ray = make_graph("ray");

    // chi_a * (chi_a / 2) = chi_a / 2, norm 1
    GraphFunction half_chi = scaled(witness_characteristic(ray.root), Complex(0.5, 0));
    GraphFunction g1 = op::apply(witness_characteristic(ray.root), half_chi, ray, 8);
    CHECK(oracle::brute_norm(g1, ray, 8) == 1.0);

    // identity symbol
    SplitMix64 rng(3);
    GraphFunction f = oracle::random_finite_support(ray, 10, rng);
    GraphFunction g2 = op::apply(make_constant(Complex(1, 0)), f, ray, 10);
    CHECK(g2.finite_support()->table == f.finite_support()->table);

    // 1/(d+1) * d on the ray: values n/(n+1); on B_64 the max edge
    // difference is 1/2 at the root edge. The result is a truncation, so
    // measuring on a larger ball would see the cutoff jump.
    GraphFunction g3 = op::apply(parse_expression("1/(d+1)"), witness_distance(), ray, 64);
    CHECK(g3.finite_support() != nullptr);
    CHECK(lip::norm(g3, ray, 64).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g3.name.find("|B_64") != std::string::npos);
}

TEST_CASE("K_n approximant") {
    Graph ray = make_graph("ray");

    // K_2 applied to the distance function: profile 0,1,2,1,0,...
    GraphFunction kd = op::apply_Kn(2, witness_distance(), ray, 8);
    double want[] = {0, 1, 2, 1, 0, 0};
    for (int n = 0; n < 6; ++n)
        CHECK(kd.eval(ray, VertexId(std::to_string(n))).real() == want[n]);
    CHECK(oracle::brute_norm(kd, ray, 8) == 1.0); // <= 3 ||f|| trivially

    // vertices with d <= n unchanged; tent(n) scaled outside, norm <= 3
    GraphFunction tent = witness_tent(3);
    GraphFunction kt = op::apply_Kn(3, tent, ray, 8);
    for (int n = 0; n <= 3; ++n)
        CHECK(kt.eval(ray, VertexId(std::to_string(n))) == tent.eval_radial(n));
    CHECK(oracle::brute_norm(kt, ray, 10) <= 3.0 * lip::norm(tent, ray, 10).value);

    CHECK_THROWS_AS(op::apply_Kn(4, tent, ray, 8), PreconditionViolated);
    CHECK_THROWS_AS(op::apply_Kn(0, tent, ray, 8), InvalidParameter);
}

TEST_CASE("K_n bound over random functions and families") {
    SplitMix64 rng(17);
    for (const char* fam : {"ray", "ladder", "tree:3"}) {
        Graph g = make_graph(fam);
        oracle::DistMap dm = oracle::make_dist_map(g);
        oracle::extend_dist_map(dm, g, 17, default_vertex_budget());
        int reps = std::string(fam) == "tree:3" ? 6 : 25; // tree BFS dominates
        for (int64_t n = 1; n <= 8; ++n) {
            for (int i = 0; i < reps; ++i) {
                GraphFunction f = oracle::random_finite_support(g, 17, rng, dm);
                GraphFunction kf = op::apply_Kn(n, f, g, 17);
                double lhs = oracle::brute_norm(kf, g, 17, dm);
                double rhs = 3.0 * oracle::brute_norm(f, g, 17, dm);
                CAPTURE(fam);
                CAPTURE(n);
                CHECK(lhs <= rhs + 1e-12);
            }
        }
    }
}

TEST_CASE("full analysis JSON is deterministic and complete") {
    Graph ray = make_graph("ray");
    op::SymbolAnalysis a = op::analyze(parse_expression("1/(d+1)"), ray, 32);
    std::string j1 = op::to_json(a);
    std::string j2 = op::to_json(op::analyze(parse_expression("1/(d+1)"), ray, 32));
    CHECK(j1 == j2);
    for (const char* key : {"\"symbol\"", "\"family\"", "\"radius\"", "\"sup_norm\"",
                            "\"lip_norm\"", "\"sigma\"", "\"A\"", "\"B\"", "\"bounded\"",
                            "\"compact\"", "\"isometry\"", "\"op_norm\"", "\"ess_norm\"",
                            "\"spectrum\""})
        CHECK(j1.find(key) != std::string::npos);

    // unbounded symbol: analysis still emitted with null intervals
    op::SymbolAnalysis u = op::analyze(witness_distance(), ray, 16);
    CHECK(u.bounded.status == Status::Refuted);
    std::string ju = op::to_json(u);
    CHECK(ju.find("\"op_norm\":null") != std::string::npos);
}
