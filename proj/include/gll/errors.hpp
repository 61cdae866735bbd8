#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gll {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidFamily : Error {
    using Error::Error;
};

struct InvalidVertex : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Ball construction would exceed the vertex budget. Carries the largest
// radius whose shells were fully enumerated before the budget tripped.
struct BudgetExceeded : Error {
    uint64_t estimated_size;
    int feasible_radius;

    BudgetExceeded(const std::string& msg, uint64_t est, int feasible)
        : Error(msg), estimated_size(est), feasible_radius(feasible) {}
};

struct SyntaxError : Error {
    int line;
    int column;
    std::string expected;

    SyntaxError(const std::string& msg, int ln, int col, std::string exp)
        : Error(msg), line(ln), column(col), expected(std::move(exp)) {}
};

struct UnknownIdentifier : Error {
    using Error::Error;
};

struct EvaluationError : Error {
    std::string vertex;

    EvaluationError(const std::string& msg, std::string v)
        : Error(msg), vertex(std::move(v)) {}
};

struct ResolventUndefined : Error {
    using Error::Error;
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct NoCertificate : Error {
    using Error::Error;
};

struct UnboundedSymbol : Error {
    using Error::Error;
};

struct SupportEscape : Error {
    using Error::Error;
};

} // namespace gll
