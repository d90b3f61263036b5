#pragma once

#include <unordered_set>
#include <vector>

#include "toponym/types.hpp"

namespace toponym {

// One maximal skeleton path between key nodes whose interior nodes all have
// degree 2. A cycle through degree-2 nodes comes back with src == trg.
struct SimplePath {
    NodeId src = 0;
    NodeId trg = 0;
    std::vector<NodeId> interior;
    double length = 0.0;
    double thickness = 0.0;
};

struct ReduceConfig {
    double tau = 4.0;
    bool preserve_loops = true;
    bool smooth_degree2 = true;
    // When set, tau is a fraction of the reduced graph's total edge length
    // instead of an absolute length.
    bool tau_relative = false;
};

struct KeyNodes {
    std::unordered_set<NodeId> junctions;  // degree > 2
    std::unordered_set<NodeId> endpoints;  // degree 1, plus isolated nodes
};

KeyNodes classify_key_nodes(const SkeletonGraph& g);

// (radius(u) + radius(v)) / 2. Throws ValidationError("UnknownEdge").
double edge_thickness(const SkeletonGraph& g, const SkeletonEdge& e);

// Every skeleton edge lands on exactly one returned path; each path is
// reported once. Components without key nodes contribute their cycle with
// src == trg anchored at the component's smallest node id.
std::vector<SimplePath> enumerate_simple_paths(const SkeletonGraph& g);

// Algorithm: key nodes become Junction/Endpoint nodes (ids kept); the first
// simple path between a pair becomes a direct edge; each further parallel
// path becomes a Mid node with two half-length edges; a self-loop path
// becomes two Mid nodes with three third-length edges (dropped when
// preserve_loops is off). Key-node-free cycles get an Anchor at the smallest
// node id. Isolated nodes become singleton Endpoints.
ReducedGraph reduce_graph(const SkeletonGraph& g, const ReduceConfig& cfg);

// Iteratively contracts the shortest edge with length < tau (ties by
// (min id, max id)). Merged node: smaller id survives, position is the
// length-weighted midpoint, source_ids the union, role Junction if either
// side was a Junction. Parallel edges produced by a contraction merge into
// one (min length, length-weighted mean thickness); self-loops are deleted
// when shorter than tau, otherwise re-expressed through two Mid nodes.
ReducedGraph contract_short_edges(const ReducedGraph& gs, double tau);

// Removes every degree-2 node that is neither Mid nor Anchor, fusing its two
// edges (lengths summed, thickness length-weighted), to a fixed point. Nodes
// whose removal would create a parallel edge or self-loop are kept and
// re-rolled to Mid (or Anchor when the component would lose its last
// non-Mid node).
ReducedGraph smooth_degree2(const ReducedGraph& gs);

// reduce_graph, then contract_short_edges(tau), then optional smoothing.
ReducedGraph reduce_pipeline(const SkeletonGraph& g, const ReduceConfig& cfg);

double total_edge_length(const ReducedGraph& g);

}  // namespace toponym
