#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "gll/expr.hpp"
#include "gll/graph.hpp"
#include "gll/vertex.hpp"

namespace gll {

using Complex = std::complex<double>;

// Certified closed-form tail data: each callable returns the supremum of
// its quantity over the region at distance >= n (valid for n >= valid_from,
// +inf allowed), and each limit is the n -> infinity limit of that tail.
// Ball suprema are promoted to Exact when a tail bound closes the gap.
struct TailCertificate {
    int64_t valid_from = 0;
    // sup{|f(v)| : d(a,v) >= n}
    std::function<double(int64_t)> sup_abs_tail;
    // sup{|f(v)-f(w)| : v~w, d(a,v) >= n, d(a,w) >= n}
    std::function<double(int64_t)> sup_diff_tail;
    // sup{d(a,v)|f(v)-f(w)| : v~w, d(a,v) >= n, d(a,w) >= n}
    std::function<double(int64_t)> sup_weighted_diff_tail;
    // sup{|f(v)|/d(a,v) : d(a,v) >= n}, n >= 1
    std::function<double(int64_t)> sup_growth_tail;

    std::optional<double> abs_limit;           // A(f)
    std::optional<double> weighted_diff_limit; // B(f)
    std::optional<double> diff_limit;          // little-Lipschitz limit
    std::optional<double> growth_limit;        // lim sup |f|/d
    std::optional<Complex> value_limit;        // lim f(v), when it exists
};

// Closed form over n = d(a, v).
struct RadialProfile {
    std::function<Complex(int64_t)> at;
    // largest distance with a nonzero value; -1 for the zero function,
    // nullopt for unbounded support
    std::optional<int64_t> support_radius;
};

// Explicit vertex table; zero elsewhere. Ordered map for deterministic
// iteration.
struct FiniteSupport {
    std::map<VertexId, Complex> table;
};

struct ExprBody {
    expr::NodePtr ast;
    std::string canonical;
    expr::VarUse vars;
};

struct GraphFunction;

// Pointwise transform of another function (resolvents, scalar multiples).
struct MappedBody {
    std::shared_ptr<const GraphFunction> base;
    std::function<Complex(Complex)> op;
    std::string desc;
};

struct GraphFunction {
    std::variant<RadialProfile, FiniteSupport, ExprBody, MappedBody> body;
    std::string name;
    std::optional<TailCertificate> tail;
    std::optional<Complex> constant_value; // set only when certified constant

    // Value depends only on d(a, v).
    bool is_radial() const;

    // Pass dist when known to avoid a BFS.
    Complex eval(const Graph& g, const VertexId& v,
                 std::optional<int64_t> dist = std::nullopt) const;

    // Radial bodies only.
    Complex eval_radial(int64_t n) const;

    // Exact support radius w.r.t. g's root when provably finite
    // (-1 = empty support); nullopt when unknown or infinite.
    std::optional<int64_t> support_radius(const Graph& g) const;

    const FiniteSupport* finite_support() const {
        return std::get_if<FiniteSupport>(&body);
    }
};

// --- constructors ---

GraphFunction make_constant(Complex c);
GraphFunction make_radial(std::function<Complex(int64_t)> at,
                          std::optional<int64_t> support_radius, std::string name);
GraphFunction make_table(std::map<VertexId, Complex> table, std::string name = "table");

// Parses the DSL; purely radial sources become RadialProfile bodies,
// variable-free sources become certified constants, and a few canonical
// example symbols receive closed-form tail certificates.
GraphFunction parse_expression(const std::string& src);

GraphFunction scaled(const GraphFunction& f, Complex c);

// --- named witnesses ---

GraphFunction witness_distance();                 // n -> n, norm 1
GraphFunction witness_tent(int64_t m);            // peak m at distance m, norm 1
GraphFunction witness_ramp(int64_t m);            // 0 / 2n-m+2 / m pieces, norm <= 2
GraphFunction witness_characteristic(VertexId v); // {v -> 1}
GraphFunction witness_harmonic();                 // n -> H_n

// `witness:distance`, `witness:tent:<m>`, `witness:ramp:<m>`,
// `witness:chi:<vertex>`, `witness:harmonic`
GraphFunction named_witness(const std::string& spec);

// phi_lambda = 1/(psi - lambda); validates |psi(v) - lambda| >= c on B_R.
GraphFunction resolvent_symbol(const GraphFunction& psi, Complex lambda, double c,
                               const Graph& g, int radius);

// --- finite-support table text format: `<vertex-encoding> <re>[+<im>i]` ---

GraphFunction load_table(std::istream& in, std::string name = "table");
GraphFunction load_table_file(const std::string& path);
std::string save_table(const GraphFunction& f);

std::string format_complex(Complex z);

} // namespace gll
