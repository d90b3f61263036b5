#include <doctest.h>

#include "toponym/errors.hpp"
#include "toponym/synth.hpp"
#include "toponym/topology.hpp"

using namespace toponym;

TEST_CASE("generators hit the requested topology class") {
    const auto path = generate({SynthKind::Path, 5, 1});
    CHECK(path.nodes.size() == 5);
    CHECK(path.edges.size() == 4);
    CHECK(components_and_cycle_rank(path).cycle_rank == 0);

    const auto theta = generate({SynthKind::Theta, 10, 2});
    CHECK(theta.nodes.size() == 10);
    CHECK(components_and_cycle_rank(theta).cycle_rank == 2);
    int junctions = 0;
    for (const auto& n : theta.nodes) junctions += degree(theta, n.id) > 2;
    CHECK(junctions == 2);

    CHECK(components_and_cycle_rank(generate({SynthKind::Tree, 30, 7})).cycle_rank == 0);
    CHECK(components_and_cycle_rank(generate({SynthKind::Star, 9, 7})).cycle_rank == 0);
    CHECK(components_and_cycle_rank(generate({SynthKind::Cycle, 8, 7})).cycle_rank == 1);
    CHECK(components_and_cycle_rank(generate({SynthKind::Tadpole, 9, 7})).cycle_rank == 1);
    CHECK(components_and_cycle_rank(generate({SynthKind::Bicyclic, 11, 7})).cycle_rank == 2);
    CHECK(components_and_cycle_rank(generate({SynthKind::Spiro, 9, 7})).cycle_rank == 2);
    for (SynthKind k : {SynthKind::Tree, SynthKind::Path, SynthKind::Star,
                        SynthKind::Cycle, SynthKind::Theta, SynthKind::Tadpole,
                        SynthKind::Bicyclic, SynthKind::Spiro}) {
        const auto g = generate({k, 12, 3});
        CHECK(g.nodes.size() == 12);
        CHECK(components_and_cycle_rank(g).components == 1);
    }
}

TEST_CASE("generation is deterministic") {
    const auto a = generate({SynthKind::Tree, 40, 3});
    const auto b = generate({SynthKind::Tree, 40, 3});
    CHECK(a == b);
    const auto c = generate({SynthKind::Tree, 40, 4});
    CHECK_FALSE(a == c);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(generate({SynthKind::Cycle, 2, 0}), ValidationError);
    CHECK_THROWS_AS(generate({SynthKind::Theta, 4, 0}), ValidationError);
    CHECK_THROWS_AS(generate({SynthKind::Tree, 0, 0}), ValidationError);
    SynthSpec bad;
    bad.length_range = {2.0, 1.0};
    CHECK_THROWS_AS(generate(bad), ValidationError);
    CHECK_THROWS_AS(synth_kind_from_string("blob"), ValidationError);
    CHECK(synth_kind_from_string("theta") == SynthKind::Theta);
    CHECK(to_string(SynthKind::Tadpole) == "tadpole");
}

namespace {
ReducedGraph as_reduced(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    ReducedGraph g;
    g.object_id = "t";
    for (NodeId i = 0; i < n; ++i)
        g.nodes.push_back({i, Role::Endpoint, {double(i), 0, 0}, {i}});
    for (const auto& [u, v] : edges) g.edges.push_back({u, v, 1.0, 1.0, {}});
    return g;
}
}  // namespace

TEST_CASE("brute_longest_path") {
    CHECK(brute_longest_path(as_reduced(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})) == 5);
    CHECK(brute_longest_path(as_reduced(4, {{0, 1}, {0, 2}, {0, 3}})) == 3);
    CHECK(brute_longest_path(as_reduced(1, {})) == 1);
    CHECK_THROWS_AS(brute_longest_path(random_reduced_tree(13, 0)), ValidationError);
    CHECK_THROWS_AS(brute_longest_path(as_reduced(3, {{0, 1}, {1, 2}, {2, 0}})),
                    ValidationError);
}

TEST_CASE("brute_assignment") {
    Eigen::MatrixXd c(2, 2);
    c << 1, 2, 2, 1;
    CHECK(brute_assignment(c) == 2.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(4, 4);
    d.diagonal().setZero();
    CHECK(brute_assignment(d) == 0.0);
    CHECK_THROWS_AS(brute_assignment(Eigen::MatrixXd::Zero(8, 8)), ValidationError);
    CHECK_THROWS_AS(brute_assignment(Eigen::MatrixXd::Zero(2, 3)), ValidationError);
}

TEST_CASE("brute_isomorphic") {
    const auto p4 = as_reduced(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto p4b = as_reduced(4, {{2, 0}, {0, 3}, {3, 1}});  // relabeled path
    const auto star = as_reduced(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(brute_isomorphic(p4, p4b));
    CHECK_FALSE(brute_isomorphic(p4, star));
    CHECK_THROWS_AS(brute_isomorphic(random_reduced_tree(9, 0), random_reduced_tree(9, 1)),
                    ValidationError);
}

TEST_CASE("random trees validate and stay acyclic") {
    for (int n : {1, 2, 5, 9}) {
        const auto s = random_tree(n, 11);
        CHECK(s.nodes.size() == std::size_t(n));
        CHECK(s.edges.size() == std::size_t(n - 1));
        CHECK(components_and_cycle_rank(s).cycle_rank == 0);
        const auto r = random_reduced_tree(n, 11);
        CHECK(r.nodes.size() == std::size_t(n));
        CHECK(components_and_cycle_rank(r).cycle_rank == 0);
        CHECK(random_reduced_tree(n, 11) == r);
    }
}
