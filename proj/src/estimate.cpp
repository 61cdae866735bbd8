#include "gll/estimate.hpp"

namespace gll {

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Exact: return "Exact";
        case Kind::LowerBound: return "LowerBound";
        case Kind::UpperBound: return "UpperBound";
        case Kind::Limit: return "Limit";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Proven: return "Proven";
        case Status::Refuted: return "Refuted";
        case Status::NumericalEvidence: return "NumericalEvidence";
        case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

} // namespace gll
