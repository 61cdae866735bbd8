#include "gll/ball.hpp"

#include <cstdlib>

#include "gll/errors.hpp"

namespace gll {

uint64_t default_vertex_budget() {
    if (const char* env = std::getenv("GLL_VERTEX_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 10'000'000ULL;
}

Ball make_ball(const Graph& g, int radius, uint64_t budget) {
    if (radius < 0) throw InvalidParameter("ball radius must be nonnegative");

    Ball b;
    b.radius = radius;
    b.shell_begin.assign(size_t(radius) + 2, 0);

    b.verts.push_back(g.root);
    b.dist.push_back(0);
    b.index.emplace(g.root.enc, 0);
    b.shell_begin[0] = 0;
    b.shell_begin[1] = 1;

    // Layered BFS; shell n+1 is discovered entirely from shell n.
    for (int n = 0; n < radius; ++n) {
        int32_t lo = b.shell_begin[size_t(n)];
        int32_t hi = b.shell_begin[size_t(n) + 1];
        for (int32_t i = lo; i < hi; ++i) {
            VertexId v = b.verts[size_t(i)]; // copy: verts reallocates below
            for (auto& w : g.family->neighbors(v)) {
                if (b.index.find(w.enc) != b.index.end()) continue;
                if (b.verts.size() >= budget)
                    throw BudgetExceeded(
                        "ball(" + g.descriptor + ", R=" + std::to_string(radius) +
                            ") exceeds vertex budget " + std::to_string(budget) +
                            "; largest feasible radius is " + std::to_string(n),
                        b.verts.size() + 1, n);
                b.index.emplace(w.enc, int32_t(b.verts.size()));
                b.verts.push_back(std::move(w));
                b.dist.push_back(n + 1);
            }
        }
        b.shell_begin[size_t(n) + 2] = int32_t(b.verts.size());
    }

    // Ordered edges with source distance <= R-1, grouped by source shell.
    b.edge_shell_begin.assign(size_t(radius) + 1, 0);
    for (int n = 0; n < radius; ++n) {
        b.edge_shell_begin[size_t(n)] = int64_t(b.esrc.size());
        auto [lo, hi] = b.shell(n);
        for (int32_t i = lo; i < hi; ++i) {
            for (const auto& w : g.family->neighbors(b.verts[size_t(i)])) {
                auto it = b.index.find(w.enc);
                // |dist(v)-dist(w)| <= 1, so w is always in the ball
                b.esrc.push_back(i);
                b.edst.push_back(it->second);
            }
        }
    }
    if (radius >= 0 && !b.edge_shell_begin.empty())
        b.edge_shell_begin[size_t(radius)] = int64_t(b.esrc.size());
    return b;
}

GraphDiagnostics verify_graph(const Graph& g, int radius, uint64_t budget) {
    Ball ball = make_ball(g, radius, budget);
    GraphDiagnostics diag;
    diag.radius = radius;

    bool sym = true, simple = true, det = true, degree = true;
    std::string sym_w, simple_w, det_w, degree_w;
    auto bound = g.degree_bound();

    for (size_t i = 0; i < ball.verts.size(); ++i) {
        if (ball.dist[i] > radius - 1 && radius > 0) continue; // frontier shell: neighbors escape B_R
        if (radius == 0) break;
        const VertexId& v = ball.verts[i];
        auto ns = g.family->neighbors(v);

        if (det) {
            auto again = g.family->neighbors(v);
            if (again != ns) {
                det = false;
                det_w = "neighbors(" + v.enc + ") differs between calls";
            }
        }
        if (degree && bound && ns.size() > size_t(*bound)) {
            degree = false;
            degree_w = "deg(" + v.enc + ") = " + std::to_string(ns.size()) +
                       " exceeds bound " + std::to_string(*bound);
        }
        for (size_t a = 0; a < ns.size(); ++a) {
            if (simple && ns[a] == v) {
                simple = false;
                simple_w = "self-loop at " + v.enc;
            }
            if (simple && a + 1 < ns.size() && ns[a] == ns[a + 1]) {
                simple = false;
                simple_w = "duplicate neighbor " + ns[a].enc + " of " + v.enc;
            }
            if (sym) {
                auto back = g.family->neighbors(ns[a]);
                bool found = false;
                for (const auto& u : back)
                    if (u == v) { found = true; break; }
                if (!found) {
                    sym = false;
                    sym_w = "edge (" + v.enc + ", " + ns[a].enc + ") has no reverse";
                }
            }
        }
    }

    // Layered-BFS soundness doubles as a distance audit.
    bool layered = true;
    std::string layered_w;
    for (size_t e = 0; e < ball.esrc.size() && layered; ++e) {
        int32_t dv = ball.dist[size_t(ball.esrc[e])];
        int32_t dw = ball.dist[size_t(ball.edst[e])];
        if (dw < dv - 1 || dw > dv + 1) {
            layered = false;
            layered_w = "edge (" + ball.verts[size_t(ball.esrc[e])].enc + ", " +
                        ball.verts[size_t(ball.edst[e])].enc + ") spans distances " +
                        std::to_string(dv) + ", " + std::to_string(dw);
        }
    }

    diag.items.push_back({"symmetry", sym, sym_w});
    diag.items.push_back({"simplicity", simple, simple_w});
    diag.items.push_back({"determinism", det, det_w});
    diag.items.push_back({"degree_bound", degree, degree_w});
    diag.items.push_back({"layered_bfs", layered, layered_w});
    return diag;
}

} // namespace gll
