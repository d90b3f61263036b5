#include "toponym/topology.hpp"

#include <algorithm>
#include <map>

#include "toponym/errors.hpp"

namespace toponym {

namespace {

template <typename Graph>
std::size_t degree_impl(const Graph& g, NodeId id) {
    bool known = false;
    for (const auto& n : g.nodes)
        if (n.id == id) { known = true; break; }
    if (!known)
        throw_validation("UnknownNode", "node " + std::to_string(id) + " not in graph");
    std::size_t d = 0;
    for (const auto& e : g.edges) d += (e.u == id) + (e.v == id);
    return d;
}

struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

std::size_t degree(const SkeletonGraph& g, NodeId id) { return degree_impl(g, id); }
std::size_t degree(const ReducedGraph& g, NodeId id) { return degree_impl(g, id); }

Topology components_and_cycle_rank(const std::vector<NodeId>& nodes,
                                   const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::map<NodeId, std::size_t> index;
    for (NodeId id : nodes) index.emplace(id, index.size());
    Dsu dsu(index.size());
    std::size_t merges = 0;
    for (const auto& [u, v] : edges) merges += dsu.unite(index.at(u), index.at(v));
    const std::size_t c = index.size() - merges;
    Topology t;
    t.components = c;
    t.cycle_rank = edges.size() - index.size() + c;
    return t;
}

namespace {

template <typename Graph>
Topology topo_impl(const Graph& g) {
    std::vector<NodeId> ids;
    ids.reserve(g.nodes.size());
    for (const auto& n : g.nodes) ids.push_back(n.id);
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(g.edges.size());
    for (const auto& e : g.edges) es.emplace_back(e.u, e.v);
    return components_and_cycle_rank(ids, es);
}

}  // namespace

Topology components_and_cycle_rank(const SkeletonGraph& g) { return topo_impl(g); }
Topology components_and_cycle_rank(const ReducedGraph& g) { return topo_impl(g); }

template <typename Graph>
std::unordered_map<NodeId, std::size_t> component_labels(const Graph& g) {
    std::vector<NodeId> ids;
    ids.reserve(g.nodes.size());
    for (const auto& n : g.nodes) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());
    std::map<NodeId, std::size_t> index;
    for (NodeId id : ids) index.emplace(id, index.size());
    Dsu dsu(index.size());
    for (const auto& e : g.edges) dsu.unite(index.at(e.u), index.at(e.v));
    std::unordered_map<std::size_t, std::size_t> root_label;
    std::unordered_map<NodeId, std::size_t> labels;
    for (NodeId id : ids) {
        const std::size_t root = dsu.find(index.at(id));
        auto [it, fresh] = root_label.emplace(root, root_label.size());
        labels[id] = it->second;
    }
    return labels;
}

template std::unordered_map<NodeId, std::size_t> component_labels<SkeletonGraph>(
    const SkeletonGraph&);
template std::unordered_map<NodeId, std::size_t> component_labels<ReducedGraph>(
    const ReducedGraph&);

}  // namespace toponym
