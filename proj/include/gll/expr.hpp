#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gll::expr {

enum class Cmp { Eq, Lt, Le, Gt, Ge };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := '-' factor | base ('^' ['-'] integer)?
// base := number | 'i' | 'd' | 'x' | 'y' | func '(' args ')' | '(' expr ')'
//       | 'if' expr cmp expr 'then' expr 'else' expr
// funcs: sin cos exp log sqrt abs min max floor, sum(body, var, lo, hi)
struct Node {
    enum class Kind { Number, ImagUnit, Var, Add, Sub, Mul, Div, Pow, Neg, Call, Sum, If };

    Kind kind;
    double number = 0.0;   // Number
    std::string name;      // Var / Call target / Sum variable
    int64_t exponent = 0;  // Pow
    Cmp cmp = Cmp::Eq;     // If
    // Add..Div: {lhs, rhs}; Pow/Neg: {operand}; Call: args;
    // Sum: {body, lo, hi}; If: {lhs, rhs, then, else}
    std::vector<NodePtr> kids;
};

bool structurally_equal(const Node& a, const Node& b);

// Throws SyntaxError / UnknownIdentifier.
NodePtr parse(const std::string& src);

// Canonical form; parses back to a structurally identical tree.
std::string print(const Node& n);

struct EvalEnv {
    int64_t d = 0;
    std::optional<int64_t> x, y;
    const std::string* vertex = nullptr; // for error messages
    std::vector<std::pair<std::string, std::complex<double>>> bound;
};

// Throws EvaluationError on domain errors (division by zero, log 0,
// complex comparison, ...).
std::complex<double> evaluate(const Node& n, const EvalEnv& env);

struct VarUse {
    bool d = false, x = false, y = false;
};
VarUse free_variables(const Node& n);

} // namespace gll::expr
