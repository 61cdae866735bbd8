#pragma once

#include <optional>
#include <vector>

#include "gll/ball.hpp"
#include "gll/estimate.hpp"
#include "gll/function.hpp"
#include "gll/graph.hpp"

namespace gll::lip {

// A function evaluated over a ball, with edge-endpoint values gathered into
// contiguous arrays so suprema run through the SIMD kernels. Immutable.
struct BallField {
    const Ball* ball = nullptr;
    std::vector<double> re, im;                      // per vertex
    std::vector<double> esre, esim, edre, edim, ew;  // per ordered edge; ew = dist(src)
};

BallField evaluate_field(const GraphFunction& f, const Graph& g, const Ball& ball);

// sup |f(v)-f(w)| over the ball's ordered edges; Exact under the exactness
// rule (finite support in B_{R-1} or a diff-tail certificate at R below the
// observed max), else LowerBound.
Estimate lip_seminorm(const GraphFunction& f, const Graph& g, const Ball& ball,
                      const BallField& field);
Estimate lip_seminorm(const GraphFunction& f, const Graph& g, int radius);

// |f(a)| + seminorm
Estimate norm(const GraphFunction& f, const Graph& g, const Ball& ball,
              const BallField& field);
Estimate norm(const GraphFunction& f, const Graph& g, int radius);

// |f(b)| + seminorm (the seminorm is base-independent)
Estimate norm_rebased(const GraphFunction& f, const Graph& g, const VertexId& b,
                      const Ball& ball, const BallField& field);
Estimate norm_rebased(const GraphFunction& f, const Graph& g, const VertexId& b,
                      int radius);

// sup |f| over ball vertices, promoted to Exact by support or abs-tail.
Estimate sup_norm(const GraphFunction& f, const Graph& g, const Ball& ball,
                  const BallField& field);

// |f(z)| <= |f(a)| + d(a,z) * seminorm for every z in the ball
Verdict pointwise_bound_check(const GraphFunction& f, const Graph& g, int radius);

// omega(v) = d(a,v), attained by the tent witness
std::pair<int64_t, GraphFunction> omega(const Graph& g, const VertexId& v);

// Per-shell max edge difference, edges grouped by the inner endpoint shell;
// profile index n holds max{|f(v)-f(w)| : v~w, min(d(v),d(w)) = n}.
ShellProfile edge_diff_profile(const BallField& field);

// Per-shell sup |f| and sup |f|/n (n >= 1).
ShellProfile shell_abs_profile(const BallField& field);
ShellProfile growth_ratio_profile(const GraphFunction& f, const Graph& g, int radius);

struct LittleLipschitzReport {
    Verdict verdict;
    ShellProfile profile; // max edge diff per shell
};

LittleLipschitzReport little_lipschitz_diagnostic(const GraphFunction& f, const Graph& g,
                                                  const std::vector<int>& radius_schedule);

struct ApproximationResult {
    GraphFunction approximant; // finite-support table on B_{2N}
    Estimate achieved;         // exactly computed ||g - f|| on B_{2N+2}
    int64_t N = 0;
};

// The three-piece density construction: identity inside B_N, scaled ramp on
// N..2N, zero beyond. N is the smallest shell where both certified tails
// drop below eps/4, unless forced.
ApproximationResult finite_support_approximation(const GraphFunction& gfun, const Graph& g,
                                                 double eps,
                                                 std::optional<int64_t> forced_N = std::nullopt);

struct StrongNullReport {
    Verdict verdict;
    std::vector<double> norms;     // ||f_i|| on B_R
    std::vector<double> pointwise; // max |f_i| over a fixed small sample ball
    // smallest N with all edge diffs < eps beyond shell N, for the full prefix
    std::vector<std::pair<double, std::optional<int>>> eps_to_N;
    // the same N computed per prefix length; growth signals that the
    // equidiminishing property fails for the infinite sequence
    std::vector<std::vector<std::optional<int>>> eps_prefix_N;
};

StrongNullReport strong_null_diagnostic(const std::vector<GraphFunction>& seq,
                                        const Graph& g, int radius,
                                        const std::vector<double>& eps_grid);

// For {0,1}-valued f, h with f(a)=h(a)=0 and f != h inside B_{R-1}:
// exhibits an edge where f-h jumps, proving ||f-h|| >= 1.
Verdict separation_witness_check(const GraphFunction& f, const GraphFunction& h,
                                 const Graph& g, int radius);

} // namespace gll::lip
