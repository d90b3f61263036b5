#include "toponym/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "toponym/errors.hpp"

namespace toponym {

namespace {

double require_number(const ordered_json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw_validation("SchemaViolation",
                         std::string(ctx) + " is missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

std::int64_t require_int(const ordered_json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        throw_validation("SchemaViolation",
                         std::string(ctx) + " is missing integer field '" + key + "'");
    return j.at(key).get<std::int64_t>();
}

std::string require_string(const ordered_json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw_validation("SchemaViolation",
                         std::string(ctx) + " is missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

const ordered_json& require_array(const ordered_json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw_validation("SchemaViolation",
                         std::string(ctx) + " is missing array field '" + key + "'");
    return j.at(key);
}

double euclidean(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

template <typename Graph>
std::vector<std::size_t> canonical_edge_order(const Graph& g) {
    std::vector<std::size_t> order(g.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = g.edges[a];
        const auto& eb = g.edges[b];
        const auto ka = std::minmax(ea.u, ea.v);
        const auto kb = std::minmax(eb.u, eb.v);
        if (ka != kb) return ka < kb;
        return ea.length < eb.length;
    });
    return order;
}

}  // namespace

SkeletonGraph skeleton_from_json(const ordered_json& j) {
    SkeletonGraph g;
    g.object_id = require_string(j, "id", "document");
    g.type = object_type_from_string(require_string(j, "type", "document"));
    std::unordered_map<NodeId, Vec3> positions;
    for (const auto& jn : require_array(j, "nodes", "document")) {
        SkeletonNode n;
        n.id = require_int(jn, "id", "node");
        n.pos = {require_number(jn, "x", "node"), require_number(jn, "y", "node"),
                 require_number(jn, "z", "node")};
        if (jn.contains("radius")) n.radius = require_number(jn, "radius", "node");
        positions[n.id] = n.pos;
        g.nodes.push_back(n);
    }
    for (const auto& je : require_array(j, "edges", "document")) {
        SkeletonEdge e;
        e.u = require_int(je, "u", "edge");
        e.v = require_int(je, "v", "edge");
        if (je.contains("length")) {
            e.length = require_number(je, "length", "edge");
        } else {
            auto pu = positions.find(e.u), pv = positions.find(e.v);
            if (pu == positions.end() || pv == positions.end())
                throw_validation("DanglingEdge",
                                 "edge (" + std::to_string(e.u) + "," +
                                     std::to_string(e.v) + ") references an unknown node");
            e.length = euclidean(pu->second, pv->second);
        }
        g.edges.push_back(e);
    }
    validate(g);
    return g;
}

ordered_json skeleton_to_json(const SkeletonGraph& g) {
    ordered_json j;
    j["id"] = g.object_id;
    j["type"] = to_string(g.type);
    auto nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    j["nodes"] = ordered_json::array();
    for (const auto& n : nodes) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["x"] = n.pos.x;
        jn["y"] = n.pos.y;
        jn["z"] = n.pos.z;
        jn["radius"] = n.radius;
        j["nodes"].push_back(std::move(jn));
    }
    j["edges"] = ordered_json::array();
    for (std::size_t i : canonical_edge_order(g)) {
        const auto& e = g.edges[i];
        ordered_json je;
        je["u"] = std::min(e.u, e.v);
        je["v"] = std::max(e.u, e.v);
        je["length"] = e.length;
        j["edges"].push_back(std::move(je));
    }
    return j;
}

ReducedGraph reduced_from_json(const ordered_json& j) {
    ReducedGraph g;
    g.object_id = require_string(j, "id", "document");
    g.type = object_type_from_string(require_string(j, "type", "document"));
    for (const auto& jn : require_array(j, "nodes", "document")) {
        ReducedNode n;
        n.id = require_int(jn, "id", "node");
        n.role = role_from_string(require_string(jn, "role", "node"));
        n.pos = {require_number(jn, "x", "node"), require_number(jn, "y", "node"),
                 require_number(jn, "z", "node")};
        if (jn.contains("source_ids")) {
            for (const auto& s : jn.at("source_ids")) n.source_ids.push_back(s.get<NodeId>());
            std::sort(n.source_ids.begin(), n.source_ids.end());
        }
        g.nodes.push_back(std::move(n));
    }
    for (const auto& je : require_array(j, "edges", "document")) {
        ReducedEdge e;
        e.u = require_int(je, "u", "edge");
        e.v = require_int(je, "v", "edge");
        e.length = require_number(je, "length", "edge");
        e.thickness = require_number(je, "thickness", "edge");
        if (je.contains("skeleton_path"))
            for (const auto& s : je.at("skeleton_path"))
                e.skeleton_path.push_back(s.get<NodeId>());
        g.edges.push_back(std::move(e));
    }
    validate(g);
    return g;
}

ordered_json reduced_to_json(const ReducedGraph& g) {
    ordered_json j;
    j["id"] = g.object_id;
    j["type"] = to_string(g.type);
    auto nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    j["nodes"] = ordered_json::array();
    for (const auto& n : nodes) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["role"] = to_string(n.role);
        jn["x"] = n.pos.x;
        jn["y"] = n.pos.y;
        jn["z"] = n.pos.z;
        auto src = n.source_ids;
        std::sort(src.begin(), src.end());
        jn["source_ids"] = src;
        j["nodes"].push_back(std::move(jn));
    }
    j["edges"] = ordered_json::array();
    for (std::size_t i : canonical_edge_order(g)) {
        const auto& e = g.edges[i];
        ordered_json je;
        je["u"] = std::min(e.u, e.v);
        je["v"] = std::max(e.u, e.v);
        je["length"] = e.length;
        je["thickness"] = e.thickness;
        auto path = e.skeleton_path;
        if (e.u > e.v) std::reverse(path.begin(), path.end());
        je["skeleton_path"] = path;
        j["edges"].push_back(std::move(je));
    }
    return j;
}

ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("FileUnreadable", "cannot open " + path.string());
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw_validation("MalformedDocument", "invalid document in " + path.string());
    return j;
}

void write_json_file(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("FileUnwritable", "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("FileUnwritable", "failed writing " + path.string());
}

SkeletonGraph load_skeleton(const std::filesystem::path& path) {
    return skeleton_from_json(read_json_file(path));
}

void save_skeleton(const SkeletonGraph& g, const std::filesystem::path& path) {
    write_json_file(skeleton_to_json(g), path);
}

ReducedGraph load_reduced(const std::filesystem::path& path) {
    return reduced_from_json(read_json_file(path));
}

void save_reduced(const ReducedGraph& g, const std::filesystem::path& path) {
    write_json_file(reduced_to_json(g), path);
}

namespace {

std::string fmt1(double x) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << x;
    return os.str();
}

char role_initial(Role r) {
    switch (r) {
        case Role::Junction: return 'J';
        case Role::Endpoint: return 'E';
        case Role::Mid: return 'M';
        case Role::Anchor: return 'A';
    }
    return '?';
}

}  // namespace

std::string skeleton_to_dot(const SkeletonGraph& g) {
    std::ostringstream os;
    os << "graph \"" << g.object_id << "\" {\n";
    auto nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& n : nodes)
        os << "  n" << n.id << " [label=\"" << n.id << "\"];\n";
    for (std::size_t i : canonical_edge_order(g)) {
        const auto& e = g.edges[i];
        os << "  n" << std::min(e.u, e.v) << " -- n" << std::max(e.u, e.v)
           << " [label=\"" << fmt1(e.length) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string reduced_to_dot(const ReducedGraph& g) {
    std::ostringstream os;
    os << "graph \"" << g.object_id << "\" {\n";
    auto nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& n : nodes)
        os << "  n" << n.id << " [label=\"" << role_initial(n.role) << "\"];\n";
    for (std::size_t i : canonical_edge_order(g)) {
        const auto& e = g.edges[i];
        os << "  n" << std::min(e.u, e.v) << " -- n" << std::max(e.u, e.v)
           << " [label=\"" << fmt1(e.length) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace toponym
