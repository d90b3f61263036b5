#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "toponym/embed.hpp"
#include "toponym/errors.hpp"
#include "toponym/match.hpp"
#include "toponym/rng.hpp"
#include "toponym/synth.hpp"

using namespace toponym;

namespace {

ReducedGraph rg(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    ReducedGraph g;
    g.object_id = "t";
    std::map<NodeId, int> deg;
    for (NodeId i = 0; i < n; ++i) deg[i] = 0;
    for (const auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
        g.edges.push_back({u, v, 1.0, 1.0, {}});
    }
    for (NodeId i = 0; i < n; ++i) {
        Role role = deg[i] > 2 ? Role::Junction
                               : (deg[i] <= 1 ? Role::Endpoint : Role::Mid);
        g.nodes.push_back({i, role, {double(i), 0, 0}, {i}});
    }
    return g;
}

ReducedGraph relabel(const ReducedGraph& g, std::uint64_t seed) {
    std::vector<NodeId> to(g.nodes.size());
    for (std::size_t i = 0; i < to.size(); ++i) to[i] = NodeId(i);
    Rng rng(seed);
    for (std::size_t i = to.size(); i > 1; --i)
        std::swap(to[i - 1], to[rng.uniform_index(i)]);
    std::map<NodeId, NodeId> remap;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) remap[g.nodes[i].id] = to[i];

    ReducedGraph out;
    out.object_id = g.object_id + "-relabeled";
    out.type = g.type;
    for (const auto& node : g.nodes) {
        auto copy = node;
        copy.id = remap.at(node.id);
        copy.source_ids = {copy.id};
        out.nodes.push_back(copy);
    }
    std::sort(out.nodes.begin(), out.nodes.end(),
              [](const ReducedNode& a, const ReducedNode& b) { return a.id < b.id; });
    for (const auto& e : g.edges)
        out.edges.push_back({remap.at(e.u), remap.at(e.v), e.length, e.thickness, {}});
    return out;
}

// Minimum assignment cost of the smaller side into the larger, by exhaustive
// selection. Mirrors the pad-with-max semantics of the rectangular solver.
double brute_rect(const Eigen::MatrixXd& c) {
    const bool rows_small = c.rows() <= c.cols();
    const int small = int(rows_small ? c.rows() : c.cols());
    const int large = int(rows_small ? c.cols() : c.rows());
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> used(std::size_t(large), 0);
    std::function<void(int, double)> rec = [&](int i, double sum) {
        if (i == small) {
            best = std::min(best, sum);
            return;
        }
        for (int j = 0; j < large; ++j) {
            if (used[std::size_t(j)]) continue;
            used[std::size_t(j)] = 1;
            rec(i + 1, sum + (rows_small ? c(i, j) : c(j, i)));
            used[std::size_t(j)] = 0;
        }
    };
    rec(0, 0.0);
    return best;
}

}  // namespace

TEST_CASE("hungarian on fixed matrices") {
    Eigen::MatrixXd c(2, 2);
    c << 1, 2, 2, 1;
    const auto asg = hungarian(c);
    CHECK(asg.total == 2.0);
    REQUIRE(asg.pairs.size() == 2);
    CHECK(asg.pairs[0] == std::pair<int, int>{0, 0});
    CHECK(asg.pairs[1] == std::pair<int, int>{1, 1});

    Eigen::MatrixXd one(1, 1);
    one << 7;
    CHECK(hungarian(one).total == 7.0);

    const auto empty = hungarian(Eigen::MatrixXd(0, 0));
    CHECK(empty.total == 0.0);
    CHECK(empty.pairs.empty());
}

TEST_CASE("hungarian equals brute force on random square matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + int(rng.uniform_index(7));
        Eigen::MatrixXd c(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = rng.uniform(0.0, 10.0);
        CHECK(hungarian(c).total == brute_assignment(c));
    }
}

TEST_CASE("hungarian on rectangular matrices") {
    Rng rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        const int r = 1 + int(rng.uniform_index(5));
        const int cl = 1 + int(rng.uniform_index(5));
        Eigen::MatrixXd c(r, cl);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < cl; ++j) c(i, j) = rng.uniform(0.0, 10.0);
        const auto asg = hungarian(c);
        CHECK(asg.pairs.size() == std::size_t(std::min(r, cl)));
        std::set<int> rows_used, cols_used;
        for (const auto& [i, j] : asg.pairs) {
            CHECK(rows_used.insert(i).second);
            CHECK(cols_used.insert(j).second);
        }
        CHECK(asg.total == doctest::Approx(brute_rect(c)).epsilon(1e-12));
    }
}

TEST_CASE("graph similarity") {
    Rng rng(13);
    Eigen::MatrixXd za(4, kLatentDim);
    for (Eigen::Index i = 0; i < za.rows(); ++i)
        for (Eigen::Index j = 0; j < za.cols(); ++j) za(i, j) = rng.normal();
    Eigen::MatrixXd perm(4, kLatentDim);
    const int order[4] = {2, 0, 3, 1};
    for (int i = 0; i < 4; ++i) perm.row(i) = za.row(order[i]);
    CHECK(graph_similarity(za, perm) == 0.0);
    CHECK(graph_similarity(za, za) == 0.0);

    Eigen::MatrixXd p(1, kLatentDim), q(1, kLatentDim);
    p.setZero();
    q.setZero();
    q(0, 0) = 3.0;
    CHECK(graph_similarity(p, q) == 3.0);

    for (int trial = 0; trial < 50; ++trial) {
        const int na = 1 + int(rng.uniform_index(6));
        const int nb = 1 + int(rng.uniform_index(6));
        Eigen::MatrixXd a(na, kLatentDim), b(nb, kLatentDim);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = rng.normal();
        CHECK(graph_similarity(a, b) == graph_similarity(b, a));
    }

    CHECK_THROWS_AS(graph_similarity(Eigen::MatrixXd(0, 16), za), ValidationError);
}

TEST_CASE("retrieve ranks a planted isomorphic copy first") {
    std::vector<ReducedGraph> corpus;
    for (int n = 5; n <= 24; ++n) {
        auto g = random_reduced_tree(n, std::uint64_t(n));
        g.object_id = "tree-" + std::to_string(n);
        corpus.push_back(g);
    }
    auto copy = relabel(corpus[7], 99);
    corpus.push_back(copy);

    EmbedHyper hyper;
    hyper.seed = 5;
    const auto model = init_model(hyper);
    const auto hits = retrieve(corpus[7], corpus, model, 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].object_id == copy.object_id);
    CHECK(hits[0].score < 1e-6);
    CHECK(hits[1].score > hits[0].score);

    // The query's own id is excluded even when present in the corpus.
    for (const auto& h : retrieve(corpus[7], corpus, model, 25))
        CHECK(h.object_id != corpus[7].object_id);

    CHECK_THROWS_AS(retrieve(corpus[7], {}, model, 2), ValidationError);
    CHECK_THROWS_AS(retrieve(corpus[7], corpus, model, 0), ValidationError);
}

TEST_CASE("retrieve breaks score ties by object id") {
    auto a = random_reduced_tree(6, 4);
    auto b = a;
    auto c = a;
    a.object_id = "query";
    b.object_id = "bbb";
    c.object_id = "aaa";
    EmbedHyper hyper;
    const auto model = init_model(hyper);
    const auto hits = retrieve(a, {b, c}, model, 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].object_id == "aaa");
    CHECK(hits[1].object_id == "bbb");
    CHECK(hits[0].score == hits[1].score);
}

TEST_CASE("kmeans basics") {
    Rng rng(21);
    Eigen::MatrixXd pts(8, 3);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = rng.uniform(0.0, 1.0);

    const auto full = kmeans(pts, 8, 1);
    CHECK(full.inertia == doctest::Approx(0.0));

    CHECK_THROWS_AS(kmeans(pts, 9, 1), ValidationError);
    CHECK_THROWS_AS(kmeans(pts, 0, 1), ValidationError);

    const auto r1 = kmeans(pts, 3, 7);
    const auto r2 = kmeans(pts, 3, 7);
    CHECK(r1.labels == r2.labels);
    CHECK(r1.centroids == r2.centroids);
    CHECK(r1.inertia == r2.inertia);
}

TEST_CASE("kmeans separates well-separated blobs") {
    Rng rng(22);
    Eigen::MatrixXd pts(40, kLatentDim);
    for (Eigen::Index i = 0; i < 40; ++i)
        for (Eigen::Index j = 0; j < kLatentDim; ++j)
            pts(i, j) = (i < 20 ? 5.0 : -5.0) + 0.1 * rng.normal();
    const auto res = kmeans(pts, 2, 3);
    for (int i = 1; i < 20; ++i) CHECK(res.labels[std::size_t(i)] == res.labels[0]);
    for (int i = 21; i < 40; ++i) CHECK(res.labels[std::size_t(i)] == res.labels[20]);
    CHECK(res.labels[0] != res.labels[20]);
}

TEST_CASE("kmeans inertia is non-increasing across iterations") {
    Rng rng(23);
    for (int run = 0; run < 20; ++run) {
        Eigen::MatrixXd pts(30, 4);
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = rng.normal();
        double prev = std::numeric_limits<double>::infinity();
        for (int iters = 0; iters <= 6; ++iters) {
            const double cur = kmeans(pts, 4, std::uint64_t(run), iters).inertia;
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("dictionary construction") {
    EmbedHyper hyper;
    hyper.seed = 6;
    const auto model = init_model(hyper);

    // Paths have no junctions.
    std::vector<ReducedGraph> paths;
    for (int n = 3; n <= 6; ++n) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
        paths.push_back(rg(n, edges));
    }
    CHECK_THROWS_AS(build_dictionary(paths, model, 1, 1), ValidationError);

    std::vector<ReducedGraph> corpus;
    std::size_t junctions = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto g = random_reduced_tree(40, s);
        g.type = ObjectType::Mitochondrion;
        for (const auto& node : g.nodes)
            if (node.role == Role::Junction) ++junctions;
        corpus.push_back(g);
    }
    REQUIRE(junctions >= 100);

    // k=1 converges to the mean of all junction embeddings.
    const auto d1 = build_dictionary(corpus, model, 1, 1);
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(kLatentDim);
    for (const auto& g : corpus) {
        const auto emb = embed_nodes(model, g);
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].role == Role::Junction) mean += emb.row(Eigen::Index(i));
    }
    mean /= double(junctions);
    CHECK((d1.centroids.row(0) - mean).cwiseAbs().maxCoeff() < 1e-12);

    // k <= 0 resolves the default from the corpus object type.
    const auto dm = build_dictionary(corpus, model, 0, 1);
    CHECK(dm.k == 100);
    CHECK(dm.centroids.rows() == 100);
}

TEST_CASE("decompose fixtures") {
    EmbedHyper hyper;
    hyper.seed = 7;
    const auto model = init_model(hyper);
    Dictionary dict;
    dict.k = 3;
    dict.source = "fixture";
    Rng rng(31);
    dict.centroids.resize(3, kLatentDim);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < kLatentDim; ++j) dict.centroids(i, j) = rng.normal();

    // Path: nothing to decompose.
    const auto path = rg(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(decompose(path, dict, model).parts.empty());

    // 3-star: one part with every node.
    const auto star = rg(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto ds = decompose(star, dict, model);
    REQUIRE(ds.parts.size() == 1);
    CHECK(ds.parts[0].junction_id == 0);
    CHECK(ds.parts[0].removed_node_ids == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(ds.parts[0].word_index >= 0);
    CHECK(ds.parts[0].word_index < 3);

    // Double-Y: junctions 1 and 3 joined by an edge; each keeps its leaves,
    // neither removes the other.
    const auto dy = rg(6, {{0, 1}, {2, 1}, {1, 3}, {3, 4}, {3, 5}});
    const auto dd = decompose(dy, dict, model);
    REQUIRE(dd.parts.size() == 2);
    std::set<NodeId> seen;
    std::set<NodeId> junctions_covered;
    for (const auto& part : dd.parts) {
        junctions_covered.insert(part.junction_id);
        for (NodeId id : part.removed_node_ids) CHECK(seen.insert(id).second);
    }
    CHECK(junctions_covered == std::set<NodeId>{1, 3});
}

TEST_CASE("decompose covers all junctions disjointly on random trees") {
    EmbedHyper hyper;
    hyper.seed = 8;
    const auto model = init_model(hyper);
    Dictionary dict;
    dict.k = 4;
    Rng rng(32);
    dict.centroids.resize(4, kLatentDim);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < kLatentDim; ++j) dict.centroids(i, j) = rng.normal();

    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto g = random_reduced_tree(5 + int(s % 11), s);
        const auto dec = decompose(g, dict, model);
        std::set<NodeId> removed;
        for (const auto& part : dec.parts) {
            CHECK(part.word_index >= 0);
            CHECK(part.word_index < 4);
            bool junction_inside = false;
            for (NodeId id : part.removed_node_ids) {
                CHECK(removed.insert(id).second);  // disjoint
                if (id == part.junction_id) junction_inside = true;
            }
            CHECK(junction_inside);
        }
        for (const auto& node : g.nodes)
            if (node.role == Role::Junction) CHECK(removed.count(node.id) == 1);
    }
}

TEST_CASE("dictionary serialization round-trips") {
    Dictionary d;
    d.k = 2;
    d.source = "corpus-a";
    Rng rng(33);
    d.centroids.resize(2, kLatentDim);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < kLatentDim; ++j) d.centroids(i, j) = rng.normal();
    const auto j = dictionary_to_json(d);
    const auto back = dictionary_from_json(j);
    CHECK(back.k == 2);
    CHECK(back.source == "corpus-a");
    CHECK(back.centroids == d.centroids);

    CHECK_THROWS_AS(dictionary_from_json(nlohmann::ordered_json::object()),
                    ValidationError);
    auto bad = j;
    bad["k"] = 5;
    CHECK_THROWS_AS(dictionary_from_json(bad), ValidationError);
}
