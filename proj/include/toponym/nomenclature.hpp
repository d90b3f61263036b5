#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "toponym/types.hpp"

namespace toponym {

// Greek prefix for n: mono, di, ..., icosa for 1..20, "n{n}" beyond.
// Throws ValidationError("NonPositive") for n < 1.
std::string numeral(int n);

enum class CoreKind { Chain, Cyclo, Bicyclo, Spiro, Polycyclo };
enum class Suffix { Ito, Idal, Oid, None };

Suffix suffix_for(ObjectType t);
ObjectType type_for(Suffix s);

// Grammar (renderer emits exactly this; parser additionally accepts commas
// in bicyclo/spiro brackets and an optional hyphen before the core):
//   name     := comp ("+" comp)*
//   comp     := branches? core numeral suffix
//   core     := "" | "cyclo" | "bicyclo[" a "." b "." c "]"
//             | "spiro[" a "." b "]" | "polycyclo[" edgelist "]"
//   edgelist := pair ("," pair)* ;  pair := pos "." pos  (1-based core positions)
//   branches := branch ("-" branch)*
//   branch   := locants "-" mult? desc
//   locants  := int ("," int)*
//   mult     := numeral >= 2, equal to the locant count
//   desc     := "mono" | "(" comp-without-suffix ")"
// The numeral's final 'a' is elided before a suffix ("penta"+"ito" ->
// "pentito"); descriptors inside parentheses keep the bare numeral.
struct NameAst {
    CoreKind core = CoreKind::Chain;
    int n = 1;                                    // core vertex count
    std::array<int, 3> bridge{0, 0, 0};           // bicyclo a,b,c / spiro a,b
    std::vector<std::pair<int, int>> core_edges;  // polycyclo, 1-based
    struct Branch;
    std::vector<Branch> branches;
    Suffix suffix = Suffix::None;
};

struct NameAst::Branch {
    std::vector<int> locants;  // sorted, one entry per copy
    NameAst sub;
};

struct Name {
    std::string text;
    std::vector<NameAst> components;  // one per connected component
};

// Longest path by vertex count in the tree component containing `rep`,
// found with BFS run twice; ties resolved toward smaller node ids.
// Throws ValidationError("HasCycle") on a cyclic component.
std::vector<NodeId> longest_path(const ReducedGraph& t, NodeId rep);

// Canonical name: per component the lexicographically minimal rendering over
// all admissible numberings; components joined with "+" in sorted order.
Name name_graph(const ReducedGraph& gs, ObjectType type);

std::string render(const NameAst& ast);

// Inverse map. Unit edge lengths and thickness; roles assigned by degree;
// object_type from the suffix. Throws NameParseError with the offending
// position on syntax errors, LocantOutOfRange, BracketArithmeticMismatch.
ReducedGraph parse_name(const std::string& s);
Name parse_name_ast(const std::string& s);

// True iff the unlabeled topologies get the same canonical name (suffix
// fixed to -oid so object types do not interfere).
bool canonical_equal(const ReducedGraph& g1, const ReducedGraph& g2);

}  // namespace toponym
