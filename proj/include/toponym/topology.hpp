#pragma once

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "toponym/types.hpp"

namespace toponym {

// Count of incident edges. Throws ValidationError("UnknownNode") if `id` is
// not a node of the graph.
std::size_t degree(const SkeletonGraph& g, NodeId id);
std::size_t degree(const ReducedGraph& g, NodeId id);

struct Topology {
    std::size_t components = 0;
    std::size_t cycle_rank = 0;  // |E| - |V| + components (first Betti number)
};

Topology components_and_cycle_rank(const SkeletonGraph& g);
Topology components_and_cycle_rank(const ReducedGraph& g);
Topology components_and_cycle_rank(const std::vector<NodeId>& nodes,
                                   const std::vector<std::pair<NodeId, NodeId>>& edges);

// Adjacency as indices into the graph's edge vector, keyed by node id.
// Shared plumbing for the traversal-heavy modules.
template <typename Graph>
std::unordered_map<NodeId, std::vector<std::size_t>> incidence_map(const Graph& g) {
    std::unordered_map<NodeId, std::vector<std::size_t>> inc;
    inc.reserve(g.nodes.size());
    for (const auto& n : g.nodes) inc[n.id];
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        inc[g.edges[i].u].push_back(i);
        inc[g.edges[i].v].push_back(i);
    }
    return inc;
}

// Connected component labels keyed by node id, labels are 0-based and
// assigned in ascending order of the smallest node id in the component.
template <typename Graph>
std::unordered_map<NodeId, std::size_t> component_labels(const Graph& g);

}  // namespace toponym
