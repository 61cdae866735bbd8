#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gll/vertex.hpp"

namespace gll {

// Verdict comparisons: relative 1e-9 with absolute floor 1e-12.
constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-12;

inline bool close(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(kAbsTol, kRelTol * scale);
}

inline bool essentially_zero(double a) { return std::abs(a) <= kAbsTol; }

enum class Kind { Exact, LowerBound, UpperBound, Limit };

const char* to_string(Kind k);

// A numeric result of a ball supremum or a certified limit. `certified`
// is set only under the exactness rule: finite support inside the ball, or
// a tail certificate closing the gap.
struct Estimate {
    double value = 0.0;
    Kind kind = Kind::LowerBound;
    int radius = 0;
    bool certified = false;
    std::string note;

    static Estimate exact(double v, int radius, bool certified, std::string note = "") {
        return {v, Kind::Exact, radius, certified, std::move(note)};
    }
    static Estimate lower(double v, int radius, std::string note = "") {
        return {v, Kind::LowerBound, radius, false, std::move(note)};
    }
    static Estimate upper(double v, int radius, std::string note = "") {
        return {v, Kind::UpperBound, radius, false, std::move(note)};
    }
    static Estimate limit(double v, int radius, std::string note = "") {
        return {v, Kind::Limit, radius, true, std::move(note)};
    }
};

enum class Status { Proven, Refuted, NumericalEvidence, Inconclusive };

const char* to_string(Status s);

struct EdgeWitness {
    VertexId v, w;
};

struct Verdict {
    Status status = Status::Inconclusive;
    int radius = 0;
    std::optional<VertexId> witness_vertex;
    std::optional<EdgeWitness> witness_edge;
    double witness_value = 0.0;
    std::string note;
};

// Per-shell reduction of some quantity; index n = shell n.
struct ShellProfile {
    std::string quantity;
    int first_shell = 0;
    std::vector<double> values;
};

} // namespace gll
