#pragma once

#include <optional>
#include <vector>

#include "gll/estimate.hpp"
#include "gll/function.hpp"
#include "gll/graph.hpp"
#include "gll/lipschitz.hpp"

namespace gll::op {

// sup over ordered adjacent pairs (v, w) of d(a,v)|psi(v)-psi(w)|.
Estimate sigma_psi(const GraphFunction& psi, const Graph& g, const Ball& ball,
                   const lip::BallField& field);
Estimate sigma_psi(const GraphFunction& psi, const Graph& g, int radius);

// Proven iff ||psi||_inf and sigma_psi are certified finite; Refuted iff
// either is certified infinite.
Verdict boundedness(const GraphFunction& psi, const Graph& g, const Ball& ball,
                    const lip::BallField& field);
Verdict boundedness(const GraphFunction& psi, const Graph& g, int radius);

struct Interval {
    Estimate lo, hi;
};

// [max{||psi||, ||psi||_inf}, ||psi||_inf + sigma]; throws UnboundedSymbol
// when boundedness is Refuted.
Interval operator_norm_interval(const GraphFunction& psi, const Graph& g, int radius);

// A(psi) = lim_n sup{|psi(v)| : d >= n}; B(psi) = lim_n sup{d(a,v)|psi(v)-psi(w)|
// : v~w, both distances >= n}. Certified via tails or finite support;
// otherwise uncertified in-ball tail readings.
Estimate tail_A(const GraphFunction& psi, const Graph& g, const Ball& ball,
                const lip::BallField& field);
Estimate tail_B(const GraphFunction& psi, const Graph& g, const Ball& ball,
                const lip::BallField& field);

struct CompactnessDetail {
    Verdict overall;
    Verdict condition_value; // lim psi(v) = 0
    Verdict condition_diff;  // lim d(a,v) max_w |psi(v)-psi(w)| = 0
    ShellProfile abs_profile;
    ShellProfile weighted_profile;
};

CompactnessDetail compactness_detail(const GraphFunction& psi, const Graph& g,
                                     const Ball& ball, const lip::BallField& field);
Verdict compactness(const GraphFunction& psi, const Graph& g, int radius);

Interval essential_norm_interval(const GraphFunction& psi, const Graph& g, int radius);

struct SpectrumReport {
    std::vector<Complex> sample;        // deduplicated psi values, BFS order
    std::vector<VertexId> witnesses;    // attaining vertex per sample value
    std::vector<Complex> closure_extras;
    Verdict eigencheck;                 // chi_v eigenvector residuals
};

SpectrumReport spectrum(const GraphFunction& psi, const Graph& g, int radius,
                        double grid_eps);

struct ResolventReport {
    GraphFunction phi;
    double sup_phi = 0.0;     // observed sup |phi| on the ball
    Estimate sigma_phi, sigma_psi;
    double c = 0.0;
    bool sup_bound_ok = false;   // sup |phi| <= 1/c
    bool sigma_bound_ok = false; // sigma_phi <= sigma_psi / c^2
};

ResolventReport resolvent_check(const GraphFunction& psi, Complex lambda, double c,
                                const Graph& g, int radius);

// Proven iff psi is a certified constant of modulus one; Refuted verdicts
// report which probe (the constant function 1, or chi_a / 2) detects it.
Verdict isometry_test(const GraphFunction& psi, const Graph& g, int radius);

// M_psi f = psi * f, materialized as a finite-support table on B_R.
GraphFunction apply(const GraphFunction& psi, const GraphFunction& f, const Graph& g,
                    int radius);

// The compact approximant: f inside B_n, ((2n-d)/d) f on n..2n, 0 beyond.
// Requires radius >= 2n+1.
GraphFunction apply_Kn(int64_t n, const GraphFunction& f, const Graph& g, int radius);
// Ball-reusing variant for finite-support f with support inside the ball.
GraphFunction apply_Kn(int64_t n, const GraphFunction& f, const Graph& g,
                       const Ball& ball);

struct SymbolAnalysis {
    std::string symbol;
    std::string family;
    int radius = 0;
    Estimate sup_norm, lip_norm, sigma;
    std::optional<Estimate> A, B;
    Verdict bounded, compact, isometry;
    std::optional<Interval> op_norm, ess_norm;
    std::optional<SpectrumReport> spec;
    std::optional<CompactnessDetail> compact_detail;
};

SymbolAnalysis analyze(const GraphFunction& psi, const Graph& g, int radius,
                       double grid_eps = 1e-9);

std::string to_json(const SymbolAnalysis& a);

// d(src)-weighted max diff per source shell (kernel per segment).
ShellProfile weighted_diff_profile(const lip::BallField& field);

} // namespace gll::op
