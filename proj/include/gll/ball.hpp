#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gll/graph.hpp"
#include "gll/vertex.hpp"

namespace gll {

// Materialized radius-R neighborhood of the root with exact BFS distances.
// Vertices are grouped by shell in discovery order. The edge list holds
// every ordered adjacent pair (v, w) with dist(v) <= R-1 exactly once,
// grouped by dist(v); targets may lie on shell R. Immutable once built.
struct Ball {
    int radius = 0;
    std::vector<VertexId> verts;       // grouped by shell
    std::vector<int32_t> dist;         // parallel to verts
    std::vector<int32_t> shell_begin;  // size radius+2; shell n = [b[n], b[n+1])
    std::vector<int32_t> esrc, edst;   // vertex indices per ordered edge
    std::vector<int64_t> edge_shell_begin; // size radius+1; src-shell n segment

    std::unordered_map<std::string, int32_t> index;

    size_t vertex_count() const { return verts.size(); }
    size_t edge_count() const { return esrc.size(); }

    // -1 if not in the ball
    int32_t index_of(const VertexId& v) const {
        auto it = index.find(v.enc);
        return it == index.end() ? -1 : it->second;
    }

    std::pair<int32_t, int32_t> shell(int n) const {
        return {shell_begin[size_t(n)], shell_begin[size_t(n) + 1]};
    }
    std::pair<int64_t, int64_t> edge_shell(int n) const {
        return {edge_shell_begin[size_t(n)],
                size_t(n) + 1 < edge_shell_begin.size() ? edge_shell_begin[size_t(n) + 1]
                                                        : int64_t(esrc.size())};
    }
};

uint64_t default_vertex_budget(); // GLL_VERTEX_BUDGET env or 10^7

// Throws BudgetExceeded (reporting the largest feasible radius) when the
// ball would exceed `budget` vertices.
Ball make_ball(const Graph& g, int radius, uint64_t budget = default_vertex_budget());

struct GraphDiagnostics {
    struct Item {
        std::string property;
        bool pass;
        std::string witness; // counterexample description on failure
    };
    std::vector<Item> items;
    int radius = 0;

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

// Checks adjacency symmetry, simplicity, determinism and the degree bound
// on B_R.
GraphDiagnostics verify_graph(const Graph& g, int radius,
                              uint64_t budget = default_vertex_budget());

} // namespace gll
