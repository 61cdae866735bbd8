#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gll/vertex.hpp"

namespace gll {

// Lazy adjacency oracle over an infinite, connected, locally-finite simple
// graph. Implementations must be deterministic: the same VertexId always
// yields the same neighbor list, in canonical order, regardless of query
// history or thread.
class GraphFamily {
public:
    virtual ~GraphFamily() = default;

    virtual std::string name() const = 0;
    virtual VertexId origin() const = 0;
    virtual std::optional<int> degree_bound() const = 0;

    // True iff enc denotes a vertex of this family.
    virtual bool contains(const VertexId& v) const = 0;

    // Neighbors in canonical order. Throws InvalidVertex.
    virtual std::vector<VertexId> neighbors(const VertexId& v) const = 0;

    // Integer coordinates for expression variables `x`, `y` where the
    // family has them (lattice); nullopt otherwise.
    virtual std::optional<std::pair<int64_t, int64_t>>
    coordinates(const VertexId&) const {
        return std::nullopt;
    }
};

struct Graph {
    std::shared_ptr<const GraphFamily> family;
    VertexId root;
    std::string descriptor;

    std::optional<int> degree_bound() const { return family->degree_bound(); }
};

// Descriptor grammar: `ray`, `tree:<q>`, `lattice:<d>`, `ladder`,
// `random:<seed>:<maxdeg>`. Root defaults to the family origin.
Graph make_graph(const std::string& descriptor,
                 const std::optional<std::string>& root_override = std::nullopt);

// Adjacency of v, validated against the family universe.
std::vector<VertexId> neighbors(const Graph& g, const VertexId& v);

// Exact d(root, v) by layered BFS, terminating at v's layer.
int64_t distance(const Graph& g, const VertexId& v);

// Distances to several targets with a single BFS sweep.
std::vector<int64_t> distances_of(const Graph& g, const std::vector<VertexId>& targets);

} // namespace gll
