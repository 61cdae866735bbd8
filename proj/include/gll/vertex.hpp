#pragma once

#include <compare>
#include <functional>
#include <string>

namespace gll {

// Canonical vertex token. The encoding grammar is family-specific (ray
// index, tree path word, lattice coordinates); equality of encodings is
// equality of vertices.
struct VertexId {
    std::string enc;

    VertexId() = default;
    explicit VertexId(std::string e) : enc(std::move(e)) {}

    bool operator==(const VertexId&) const = default;
    auto operator<=>(const VertexId&) const = default;
};

} // namespace gll

template <>
struct std::hash<gll::VertexId> {
    size_t operator()(const gll::VertexId& v) const noexcept {
        return std::hash<std::string>{}(v.enc);
    }
};
