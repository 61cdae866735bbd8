#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gll/estimate.hpp"
#include "gll/function.hpp"
#include "gll/graph.hpp"
#include "gll/rng.hpp"

namespace gll::oracle {

// BFS distance map grown on demand. Deliberately independent of Ball: the
// oracle re-implements its own traversal and reductions so a shared bug
// cannot self-validate.
struct DistMap {
    std::unordered_map<std::string, int64_t> dist;
    std::vector<VertexId> order; // BFS order
    std::vector<int64_t> order_dist;
    int64_t covered = 0; // shells <= covered are complete
    std::vector<VertexId> frontier;
};

DistMap make_dist_map(const Graph& g);

// Extends coverage to target_radius; false if max_vertices would be
// exceeded (coverage stays at the last complete shell).
bool extend_dist_map(DistMap& dm, const Graph& g, int64_t target_radius,
                     size_t max_vertices);

// Exact ||f||^a for finite-support f by scanning every edge incident to
// the support; throws SupportEscape if the support leaves B_{R-1}.
double brute_norm(const GraphFunction& f, const Graph& g, int radius);
// Same, with distances taken from a shared map covering radius.
double brute_norm(const GraphFunction& f, const Graph& g, int radius,
                  const DistMap& dm);

// Seeded random finite-support function: support uniform in B_{R-2},
// values uniform in the complex unit square, normalized to ||f|| = 1.
GraphFunction random_finite_support(const Graph& g, int radius, SplitMix64& rng,
                                    size_t max_support = 24);
GraphFunction random_finite_support(const Graph& g, int radius, SplitMix64& rng,
                                    const DistMap& dm, size_t max_support = 24);

struct RatioSearchResult {
    double lo = 0.0;        // true lower bound for ||M_psi||
    GraphFunction argmax;
    std::string witness;    // candidate description
};

// Maximizes ||psi f|| / ||f|| over a deterministic pool (characteristics,
// tents, truncated ramps, root cones, distance truncations) plus seeded
// random tables refined by greedy coordinate perturbation. The pool's cone
// supports extend beyond the analysis radius (capped by the vertex budget);
// `budget` counts random/greedy ratio evaluations.
RatioSearchResult best_ratio_search(const GraphFunction& psi, const Graph& g, int radius,
                                    int budget, uint64_t seed);

// ||sum theta_k chi_{v_k}|| <= 3 for random unimodular theta and distinct
// vertices.
Verdict chi_sum_bound_check(const Graph& g, int radius, int count, uint64_t seed);
Verdict chi_sum_bound_check(const Graph& g, int radius, int count, uint64_t seed,
                            const DistMap& dm);

struct TestCase {
    std::string family;
    GraphFunction symbol;
    std::vector<GraphFunction> test_functions; // optional extras
    int radius = 16;
    uint64_t seed = 0;
};

struct CheckLine {
    std::string check;
    std::string family;
    std::string symbol;
    int radius = 0;
    std::string status; // "pass" | "fail" | "error"
    double lhs = 0.0, rhs = 0.0;
    std::string witness;
};

struct SweepReport {
    std::vector<CheckLine> lines;

    bool all_pass() const {
        for (const auto& l : lines)
            if (l.status != "pass") return false;
        return true;
    }
    std::string to_jsonl() const;
};

// Batch runner: pointwise bound, rebase bracket, tent/omega equalities,
// K_n bound, operator-norm sandwich, compactness/essential coherence,
// eigenvector check. Per-check errors become "error" lines.
SweepReport inequality_sweep(const TestCase& tc);

} // namespace gll::oracle
