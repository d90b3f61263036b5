#include "toponym/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>
#include <utility>

#include "toponym/errors.hpp"

namespace toponym {

std::string to_string(ObjectType t) {
    switch (t) {
        case ObjectType::Mitochondrion: return "mito";
        case ObjectType::PyramidalNeuron: return "pyr";
        case ObjectType::Other: return "other";
    }
    return "other";
}

ObjectType object_type_from_string(const std::string& s) {
    if (s == "mito") return ObjectType::Mitochondrion;
    if (s == "pyr") return ObjectType::PyramidalNeuron;
    if (s == "other") return ObjectType::Other;
    throw_validation("SchemaViolation", "unknown object type '" + s + "'");
}

std::string to_string(Role r) {
    switch (r) {
        case Role::Junction: return "junction";
        case Role::Endpoint: return "endpoint";
        case Role::Mid: return "mid";
        case Role::Anchor: return "anchor";
    }
    return "mid";
}

Role role_from_string(const std::string& s) {
    if (s == "junction") return Role::Junction;
    if (s == "endpoint") return Role::Endpoint;
    if (s == "mid") return Role::Mid;
    if (s == "anchor") return Role::Anchor;
    throw_validation("SchemaViolation", "unknown role '" + s + "'");
}

bool operator==(const SkeletonEdge& a, const SkeletonEdge& b) {
    const bool same = (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u);
    return same && a.length == b.length;
}

namespace {

// Order-insensitive comparison helpers; node and edge containers are sets in
// spirit even though stored as vectors.
template <typename Node>
std::map<NodeId, Node> node_index(const std::vector<Node>& nodes) {
    std::map<NodeId, Node> m;
    for (const auto& n : nodes) m.emplace(n.id, n);
    return m;
}

std::pair<NodeId, NodeId> ekey(NodeId u, NodeId v) {
    return {std::min(u, v), std::max(u, v)};
}

}  // namespace

bool SkeletonGraph::operator==(const SkeletonGraph& o) const {
    if (object_id != o.object_id || type != o.type) return false;
    if (nodes.size() != o.nodes.size() || edges.size() != o.edges.size()) return false;
    auto na = node_index(nodes), nb = node_index(o.nodes);
    for (auto it_a = na.begin(), it_b = nb.begin(); it_a != na.end(); ++it_a, ++it_b) {
        const auto& a = it_a->second;
        const auto& b = it_b->second;
        if (a.id != b.id || !(a.pos == b.pos) || a.radius != b.radius) return false;
    }
    std::map<std::pair<NodeId, NodeId>, double> ea, eb;
    for (const auto& e : edges) ea[ekey(e.u, e.v)] = e.length;
    for (const auto& e : o.edges) eb[ekey(e.u, e.v)] = e.length;
    return ea == eb;
}

bool operator==(const ReducedEdge& a, const ReducedEdge& b) {
    if (a.length != b.length || a.thickness != b.thickness) return false;
    if (a.u == b.u && a.v == b.v) return a.skeleton_path == b.skeleton_path;
    if (a.u == b.v && a.v == b.u) {
        auto rev = b.skeleton_path;
        std::reverse(rev.begin(), rev.end());
        return a.skeleton_path == rev;
    }
    return false;
}

bool ReducedGraph::operator==(const ReducedGraph& o) const {
    if (object_id != o.object_id || type != o.type) return false;
    if (nodes.size() != o.nodes.size() || edges.size() != o.edges.size()) return false;
    auto na = node_index(nodes), nb = node_index(o.nodes);
    for (auto it_a = na.begin(), it_b = nb.begin(); it_a != na.end(); ++it_a, ++it_b) {
        if (!(it_a->second == it_b->second)) return false;
    }
    std::map<std::pair<NodeId, NodeId>, const ReducedEdge*> ea, eb;
    for (const auto& e : edges) ea[ekey(e.u, e.v)] = &e;
    for (const auto& e : o.edges) eb[ekey(e.u, e.v)] = &e;
    if (ea.size() != eb.size()) return false;
    for (auto it_a = ea.begin(), it_b = eb.begin(); it_a != ea.end(); ++it_a, ++it_b) {
        if (it_a->first != it_b->first || !(*it_a->second == *it_b->second)) return false;
    }
    return true;
}

namespace {

void check_finite(const Vec3& p, NodeId id) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw_validation("NonFinitePosition", "node " + std::to_string(id) +
                                                  " has a non-finite coordinate");
}

template <typename Edge>
void check_edges(const std::vector<Edge>& edges,
                 const std::unordered_set<NodeId>& ids) {
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : edges) {
        if (e.u == e.v)
            throw_validation("SelfLoopAtIngest",
                             "self-loop at node " + std::to_string(e.u));
        if (!ids.count(e.u) || !ids.count(e.v))
            throw_validation("DanglingEdge", "edge (" + std::to_string(e.u) + "," +
                                                 std::to_string(e.v) +
                                                 ") references an unknown node");
        if (!seen.insert(ekey(e.u, e.v)).second)
            throw_validation("DuplicateEdge", "edge (" + std::to_string(e.u) + "," +
                                                  std::to_string(e.v) + ") repeats");
        if (!(e.length > 0))
            throw_validation("NonPositiveLength",
                             "edge (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + ") has length <= 0");
    }
}

}  // namespace

void validate(const SkeletonGraph& g) {
    std::unordered_set<NodeId> ids;
    for (const auto& n : g.nodes) {
        if (n.id < 0)
            throw_validation("SchemaViolation",
                             "negative node id " + std::to_string(n.id));
        if (!ids.insert(n.id).second)
            throw_validation("DuplicateNode",
                             "node id " + std::to_string(n.id) + " repeats");
        check_finite(n.pos, n.id);
        if (!(n.radius >= 0))
            throw_validation("NegativeRadius",
                             "node " + std::to_string(n.id) + " has radius < 0");
    }
    check_edges(g.edges, ids);
}

void validate(const ReducedGraph& g) {
    std::unordered_set<NodeId> ids;
    for (const auto& n : g.nodes) {
        if (!ids.insert(n.id).second)
            throw_validation("DuplicateNode",
                             "node id " + std::to_string(n.id) + " repeats");
        check_finite(n.pos, n.id);
        if ((n.role == Role::Junction || n.role == Role::Endpoint) &&
            n.source_ids.empty())
            throw_validation("MissingSource",
                             "key node " + std::to_string(n.id) +
                                 " traces back to no skeleton node");
    }
    check_edges(g.edges, ids);
    for (const auto& e : g.edges)
        if (!(e.thickness >= 0))
            throw_validation("NegativeThickness",
                             "edge (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + ") has thickness < 0");
}

}  // namespace toponym
