#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <thread>

#include "gll/ball.hpp"
#include "gll/errors.hpp"
#include "gll/graph.hpp"

using namespace gll;

namespace {

std::vector<std::string> encs(const std::vector<VertexId>& vs) {
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(v.enc);
    return out;
}

// test fixture: adjacency that is deliberately not symmetric
class BrokenFamily final : public GraphFamily {
public:
    std::string name() const override { return "broken"; }
    VertexId origin() const override { return VertexId("0"); }
    std::optional<int> degree_bound() const override { return 3; }
    bool contains(const VertexId&) const override { return true; }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        long n = std::strtol(v.enc.c_str(), nullptr, 10);
        if (n == 0) return {VertexId("1"), VertexId("2")};
        // vertex 2 refuses to acknowledge the root
        if (n == 2) return {VertexId("3")};
        return {VertexId(std::to_string(n - 1)), VertexId(std::to_string(n + 1))};
    }
};

} // namespace

TEST_CASE("ray neighbors") {
    Graph g = make_graph("ray");
    CHECK(encs(neighbors(g, VertexId("0"))) == std::vector<std::string>{"1"});
    CHECK(encs(neighbors(g, VertexId("5"))) == std::vector<std::string>{"4", "6"});
    CHECK_THROWS_AS(neighbors(g, VertexId("-3")), InvalidVertex);
    CHECK_THROWS_AS(neighbors(g, VertexId("x")), InvalidVertex);
}

TEST_CASE("homogeneous tree has constant degree q") {
    Graph g = make_graph("tree:3");
    CHECK(neighbors(g, VertexId("e")).size() == 3);
    CHECK(neighbors(g, VertexId("0")).size() == 3);
    CHECK(neighbors(g, VertexId("2.1.0")).size() == 3);
    // parent comes first
    CHECK(neighbors(g, VertexId("2.1"))[0].enc == "2");
    CHECK_THROWS_AS(neighbors(g, VertexId("3")), InvalidVertex); // root labels 0..2
    CHECK_THROWS_AS(neighbors(g, VertexId("0.2")), InvalidVertex); // child labels 0..1
}

TEST_CASE("distances") {
    Graph ray = make_graph("ray");
    CHECK(distance(ray, VertexId("0")) == 0);
    CHECK(distance(ray, VertexId("7")) == 7);

    // L1 distance on the lattice, confirmed against the BFS oracle
    Graph z2 = make_graph("lattice:2");
    CHECK(distance(z2, VertexId("3,-4")) == 7);
    CHECK(distance(z2, VertexId("0,0")) == 0);
    CHECK(distance(z2, VertexId("-2,5")) == 7);

    Graph ladder = make_graph("ladder");
    CHECK(distance(ladder, VertexId("4,1")) == 5);

    auto many = distances_of(z2, {VertexId("3,-4"), VertexId("0,0"), VertexId("1,1")});
    CHECK(many == std::vector<int64_t>{7, 0, 2});
}

TEST_CASE("ray ball R=3 enumerates the path with ordered edges") {
    Graph g = make_graph("ray");
    Ball b = make_ball(g, 3);
    CHECK(encs(b.verts) == std::vector<std::string>{"0", "1", "2", "3"});
    std::set<std::pair<std::string, std::string>> edges;
    for (size_t e = 0; e < b.esrc.size(); ++e)
        edges.insert({b.verts[size_t(b.esrc[e])].enc, b.verts[size_t(b.edst[e])].enc});
    std::set<std::pair<std::string, std::string>> want{
        {"0", "1"}, {"1", "0"}, {"1", "2"}, {"2", "1"}, {"2", "3"}};
    CHECK(edges == want);
    CHECK(b.esrc.size() == 5);
}

TEST_CASE("tree ball sizes follow q(q-1)^{n-1} shells") {
    Graph g = make_graph("tree:3");
    Ball b = make_ball(g, 2);
    CHECK(b.vertex_count() == 10); // 1 + 3 + 6
    auto [l0, h0] = b.shell(0);
    auto [l1, h1] = b.shell(1);
    auto [l2, h2] = b.shell(2);
    CHECK(h0 - l0 == 1);
    CHECK(h1 - l1 == 3);
    CHECK(h2 - l2 == 6);
}

TEST_CASE("radius zero ball") {
    Graph g = make_graph("lattice:2");
    Ball b = make_ball(g, 0);
    CHECK(b.vertex_count() == 1);
    CHECK(b.edge_count() == 0);
    CHECK(b.verts[0] == g.root);
}

TEST_CASE("budget exceeded reports the largest feasible radius") {
    Graph g = make_graph("tree:3");
    try {
        make_ball(g, 30, 100);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.feasible_radius >= 3);
        CHECK(e.feasible_radius < 30);
        Ball ok = make_ball(g, e.feasible_radius, 100);
        CHECK(ok.radius == e.feasible_radius);
    }
}

TEST_CASE("ball invariants: layered BFS, edge distance bound, determinism") {
    for (const char* fam : {"ray", "tree:3", "lattice:1", "lattice:2", "ladder",
                            "random:11:5"}) {
        CAPTURE(fam);
        Graph g = make_graph(fam);
        Ball a = make_ball(g, 8);
        Ball b = make_ball(g, 8);
        CHECK(a.verts == b.verts);
        CHECK(a.esrc == b.esrc);
        CHECK(a.edst == b.edst);

        // every edge spans at most one shell
        for (size_t e = 0; e < a.esrc.size(); ++e) {
            int dd = a.dist[size_t(a.esrc[e])] - a.dist[size_t(a.edst[e])];
            CHECK(dd >= -1);
            CHECK(dd <= 1);
        }
        // every vertex below the frontier has a parent and no short edge
        std::vector<int> parent_ok(a.vertex_count(), 0);
        parent_ok[0] = 1;
        for (size_t e = 0; e < a.esrc.size(); ++e)
            if (a.dist[size_t(a.esrc[e])] == a.dist[size_t(a.edst[e])] + 1)
                parent_ok[size_t(a.esrc[e])] = 1;
        for (size_t i = 0; i < a.vertex_count(); ++i) {
            CAPTURE(a.verts[i].enc);
            if (a.dist[i] <= a.radius - 1) CHECK(parent_ok[i] == 1);
        }
        // monotone shells
        for (int n = 0; n <= a.radius; ++n) {
            auto [lo, hi] = a.shell(n);
            CHECK(hi > lo);
        }
    }
}

TEST_CASE("verify_graph passes on the built-in families") {
    CHECK(verify_graph(make_graph("ray"), 50).all_pass());
    CHECK(verify_graph(make_graph("ladder"), 20).all_pass());
    CHECK(verify_graph(make_graph("tree:4"), 6).all_pass());
    CHECK(verify_graph(make_graph("lattice:2"), 10).all_pass());
}

TEST_CASE("verify_graph flags an asymmetric fixture") {
    Graph g{std::make_shared<BrokenFamily>(), VertexId("0"), "broken"};
    GraphDiagnostics d = verify_graph(g, 5);
    CHECK_FALSE(d.all_pass());
    bool sym_failed = false;
    for (const auto& item : d.items)
        if (item.property == "symmetry" && !item.pass) {
            sym_failed = true;
            CHECK(item.witness.find("2") != std::string::npos);
        }
    CHECK(sym_failed);
}

TEST_CASE("seeded random family: deterministic, bounded degree, connected") {
    Graph g = make_graph("random:7:5");
    GraphDiagnostics d = verify_graph(g, 10);
    CHECK(d.all_pass());
    Ball b = make_ball(g, 10);
    for (size_t i = 0; i < b.vertex_count(); ++i)
        CHECK(neighbors(g, b.verts[i]).size() <= 5);

    // a different seed gives a different graph
    Graph g2 = make_graph("random:8:5");
    Ball b2 = make_ball(g2, 6);
    Ball b1 = make_ball(g, 6);
    CHECK(b1.verts.size() > 1);
    bool same = b1.vertex_count() == b2.vertex_count() && b1.verts == b2.verts &&
                b1.esrc == b2.esrc && b1.edst == b2.edst;
    CHECK_FALSE(same);

    CHECK_THROWS_AS(make_graph("random:7:3"), InvalidFamily);
}

TEST_CASE("oracles are safe to query concurrently") {
    Graph g = make_graph("random:5:6");
    Ball serial = make_ball(g, 9);
    std::vector<std::thread> workers;
    std::vector<int> ok(4, 0);
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t] {
            Graph mine = make_graph("random:5:6"); // fresh family instance
            Ball b = make_ball(mine, 9);
            ok[size_t(t)] = (b.verts == serial.verts && b.esrc == serial.esrc) ? 1 : 0;
        });
    }
    for (auto& w : workers) w.join();
    for (int o : ok) CHECK(o == 1);

    // concurrent queries against one shared family instance agree with the
    // serial answers regardless of query order
    std::vector<std::vector<VertexId>> serial_adj(300);
    for (int i = 0; i < 300; ++i)
        serial_adj[size_t(i)] = neighbors(g, VertexId(std::to_string(i)));
    Graph shared = make_graph("random:5:6");
    std::vector<int> match(4, 1);
    workers.clear();
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t] {
            for (int k = 0; k < 300; ++k) {
                int i = (k * (t + 3) + 101 * t) % 300; // different orders per thread
                if (neighbors(shared, VertexId(std::to_string(i))) != serial_adj[size_t(i)])
                    match[size_t(t)] = 0;
            }
        });
    }
    for (auto& w : workers) w.join();
    for (int m : match) CHECK(m == 1);
}

TEST_CASE("root override") {
    Graph g = make_graph("ray", std::string("5"));
    CHECK(g.root.enc == "5");
    CHECK(distance(g, VertexId("0")) == 5);
    CHECK(distance(g, VertexId("9")) == 4);
    CHECK_THROWS_AS(make_graph("ray", std::string("-1")), InvalidVertex);
}

TEST_CASE("unknown family descriptors") {
    CHECK_THROWS_AS(make_graph("torus"), InvalidFamily);
    CHECK_THROWS_AS(make_graph("tree:1"), InvalidFamily);
    CHECK_THROWS_AS(make_graph("lattice:3"), InvalidFamily);
}
