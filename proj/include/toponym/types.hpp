#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace toponym {

using NodeId = std::int64_t;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class ObjectType { Mitochondrion, PyramidalNeuron, Other };

std::string to_string(ObjectType t);
ObjectType object_type_from_string(const std::string& s);

// --- raw skeleton ---------------------------------------------------------

struct SkeletonNode {
    NodeId id = 0;
    Vec3 pos;
    double radius = 1.0;  // distance-transform value at the node
    friend bool operator==(const SkeletonNode&, const SkeletonNode&) = default;
};

struct SkeletonEdge {
    NodeId u = 0, v = 0;  // unordered pair, u != v
    double length = 0.0;  // > 0
};

bool operator==(const SkeletonEdge& a, const SkeletonEdge& b);

struct SkeletonGraph {
    std::string object_id;
    ObjectType type = ObjectType::Other;
    std::vector<SkeletonNode> nodes;
    std::vector<SkeletonEdge> edges;

    bool operator==(const SkeletonGraph& other) const;
};

// Throws ValidationError on duplicate ids, dangling/duplicate edges,
// self-loops, non-finite coordinates, non-positive lengths.
void validate(const SkeletonGraph& g);

// --- reduced graph --------------------------------------------------------

enum class Role { Junction, Endpoint, Mid, Anchor };

std::string to_string(Role r);
Role role_from_string(const std::string& s);

struct ReducedNode {
    NodeId id = 0;
    Role role = Role::Endpoint;
    Vec3 pos;
    std::vector<NodeId> source_ids;  // skeleton nodes merged into this node
    friend bool operator==(const ReducedNode&, const ReducedNode&) = default;
};

struct ReducedEdge {
    NodeId u = 0, v = 0;
    double length = 0.0;     // > 0
    double thickness = 0.0;  // >= 0, length-weighted mean of member edges
    std::vector<NodeId> skeleton_path;  // empty for synthesized edges
};

bool operator==(const ReducedEdge& a, const ReducedEdge& b);

struct ReducedGraph {
    std::string object_id;
    ObjectType type = ObjectType::Other;
    std::vector<ReducedNode> nodes;
    std::vector<ReducedEdge> edges;

    bool operator==(const ReducedGraph& other) const;
};

void validate(const ReducedGraph& g);

}  // namespace toponym
