#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "toponym/types.hpp"

namespace toponym {

enum class SynthKind { Tree, Path, Star, Cycle, Theta, Tadpole, Bicyclic, Spiro };

SynthKind synth_kind_from_string(const std::string& s);
std::string to_string(SynthKind k);

struct SynthSpec {
    SynthKind kind = SynthKind::Tree;
    int n = 1;
    std::uint64_t seed = 0;
    std::pair<double, double> length_range{0.5, 2.0};
    std::pair<double, double> radius_range{0.5, 3.0};
};

// Deterministic generator. Trees come from random Pruefer sequences and are
// subdivided with degree-2 chain nodes to resemble raw skeletons. Throws
// ValidationError("InvalidSpec") for impossible combinations (Cycle n < 3,
// Theta n < 5, ...).
SkeletonGraph generate(const SynthSpec& spec);

SkeletonGraph random_tree(int n, std::uint64_t seed);
ReducedGraph random_reduced_tree(int n, std::uint64_t seed);

// Exhaustive oracles for the fast implementations. All throw
// ValidationError("TooLarge") above their stated size caps.
int brute_longest_path(const ReducedGraph& t);                       // n <= 12, trees
double brute_assignment(const Eigen::MatrixXd& c);                   // n <= 7, square
bool brute_isomorphic(const ReducedGraph& g1, const ReducedGraph& g2);  // n <= 8

}  // namespace toponym
