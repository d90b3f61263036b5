#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "toponym/types.hpp"

namespace toponym {

using ordered_json = nlohmann::ordered_json;

// JSON schemas. Skeleton:
//   {"object_id": str, "type": str, "nodes": [{"id", "pos" [x,y,z], "radius"}...],
//    "edges": [{"u", "v", "length"}...]}
// "radius" may be omitted on input (defaults to 1.0); "length" may be omitted
// (defaults to Euclidean distance between endpoints). Reduced adds "role" per
// node, "source_ids" per node, "thickness" and "skeleton_path" per edge.
// Writers emit every field, keys in schema order, nodes sorted by id and edges
// by (min(u,v), max(u,v), length).

SkeletonGraph skeleton_from_json(const ordered_json& j);
ordered_json skeleton_to_json(const SkeletonGraph& g);

ReducedGraph reduced_from_json(const ordered_json& j);
ordered_json reduced_to_json(const ReducedGraph& g);

SkeletonGraph load_skeleton(const std::filesystem::path& path);
void save_skeleton(const SkeletonGraph& g, const std::filesystem::path& path);

ReducedGraph load_reduced(const std::filesystem::path& path);
void save_reduced(const ReducedGraph& g, const std::filesystem::path& path);

// Graphviz export for offline viewing. Reduced nodes are labelled with the
// role initial (J/E/M/A), skeleton nodes with their id; edge label = length
// rounded to 1 decimal.
std::string skeleton_to_dot(const SkeletonGraph& g);
std::string reduced_to_dot(const ReducedGraph& g);

// Utility shared by the CLI: read whole file / parse, with IoError on missing
// or unreadable paths and ValidationError("Json") on malformed JSON.
ordered_json read_json_file(const std::filesystem::path& path);
void write_json_file(const ordered_json& j, const std::filesystem::path& path);

}  // namespace toponym
