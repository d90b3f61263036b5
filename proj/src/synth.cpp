#include "toponym/synth.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "toponym/errors.hpp"
#include "toponym/rng.hpp"
#include "toponym/topology.hpp"

namespace toponym {

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "tree") return SynthKind::Tree;
    if (s == "path") return SynthKind::Path;
    if (s == "star") return SynthKind::Star;
    if (s == "cycle") return SynthKind::Cycle;
    if (s == "theta") return SynthKind::Theta;
    if (s == "tadpole") return SynthKind::Tadpole;
    if (s == "bicyclic") return SynthKind::Bicyclic;
    if (s == "spiro") return SynthKind::Spiro;
    throw_validation("InvalidSpec", "unknown synth kind '" + s + "'");
}

std::string to_string(SynthKind k) {
    switch (k) {
        case SynthKind::Tree: return "tree";
        case SynthKind::Path: return "path";
        case SynthKind::Star: return "star";
        case SynthKind::Cycle: return "cycle";
        case SynthKind::Theta: return "theta";
        case SynthKind::Tadpole: return "tadpole";
        case SynthKind::Bicyclic: return "bicyclic";
        case SynthKind::Spiro: return "spiro";
    }
    return "tree";
}

namespace {

// Decode a Pruefer sequence over nodes 0..k-1 into tree edges.
std::vector<std::pair<NodeId, NodeId>> pruefer_decode(const std::vector<int>& seq) {
    const int k = int(seq.size()) + 2;
    std::vector<int> degree(k, 1);
    for (int s : seq) ++degree[s];
    std::set<int> leaves;
    for (int i = 0; i < k; ++i)
        if (degree[i] == 1) leaves.insert(i);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int s : seq) {
        const int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.push_back({leaf, s});
        if (--degree[s] == 1) leaves.insert(s);
    }
    const int a = *leaves.begin();
    const int b = *std::next(leaves.begin());
    edges.push_back({a, b});
    return edges;
}

std::vector<std::pair<NodeId, NodeId>> random_tree_edges(int n, Rng& rng) {
    if (n == 1) return {};
    if (n == 2) return {{0, 1}};
    std::vector<int> seq(n - 2);
    for (int& s : seq) s = int(rng.uniform_index(std::size_t(n)));
    return pruefer_decode(seq);
}

}  // namespace

SkeletonGraph generate(const SynthSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw_validation("InvalidSpec", "n must be at least 1");
    const auto [llo, lhi] = spec.length_range;
    const auto [rlo, rhi] = spec.radius_range;
    if (!(llo > 0.0 && llo <= lhi))
        throw_validation("InvalidSpec", "bad length range");
    if (!(rlo > 0.0 && rlo <= rhi))
        throw_validation("InvalidSpec", "bad radius range");

    Rng rng(spec.seed);
    std::vector<std::pair<NodeId, NodeId>> edges;

    auto cycle_among = [&](NodeId first, NodeId last) {  // inclusive range
        for (NodeId i = first; i < last; ++i) edges.push_back({i, i + 1});
        edges.push_back({last, first});
    };
    auto chain_among = [&](NodeId first, NodeId last) {
        for (NodeId i = first; i < last; ++i) edges.push_back({i, i + 1});
    };

    switch (spec.kind) {
        case SynthKind::Path:
            chain_among(0, n - 1);
            break;
        case SynthKind::Star:
            for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
            break;
        case SynthKind::Cycle:
            if (n < 3) throw_validation("InvalidSpec", "a cycle needs n >= 3");
            cycle_among(0, n - 1);
            break;
        case SynthKind::Theta: {
            if (n < 5) throw_validation("InvalidSpec", "a theta graph needs n >= 5");
            // Junctions 0 and 1; the remaining n-2 nodes split over three
            // internally disjoint paths.
            const int interior = n - 2;
            int sizes[3] = {interior / 3, interior / 3, interior / 3};
            for (int i = 0; i < interior % 3; ++i) ++sizes[i];
            NodeId next = 2;
            for (int p = 0; p < 3; ++p) {
                NodeId prev = 0;
                for (int i = 0; i < sizes[p]; ++i) {
                    edges.push_back({prev, next});
                    prev = next++;
                }
                edges.push_back({prev, 1});
            }
            break;
        }
        case SynthKind::Tadpole: {
            if (n < 4) throw_validation("InvalidSpec", "a tadpole needs n >= 4");
            const int c = std::min(std::max(3, (n + 1) / 2), n - 1);
            cycle_among(0, c - 1);
            NodeId prev = 0;
            for (NodeId i = c; i < n; ++i) {
                edges.push_back({prev, i});
                prev = i;
            }
            break;
        }
        case SynthKind::Bicyclic: {
            if (n < 6) throw_validation("InvalidSpec", "a bicyclic graph needs n >= 6");
            const int extra = n - 6;
            const int c1 = 3 + extra / 3;
            const int c2 = 3 + extra / 3;
            const int bridge = n - c1 - c2;
            cycle_among(0, c1 - 1);
            cycle_among(c1 + bridge, n - 1);
            NodeId prev = c1 - 1;
            for (int i = 0; i < bridge; ++i) {
                edges.push_back({prev, c1 + i});
                prev = c1 + i;
            }
            edges.push_back({prev, c1 + bridge});
            break;
        }
        case SynthKind::Spiro: {
            if (n < 5) throw_validation("InvalidSpec", "a spiro graph needs n >= 5");
            const int r1 = 3 + (n - 4) / 2;  // ring sizes, sharing node 0
            cycle_among(0, r1 - 1);
            NodeId prev = 0;
            for (NodeId i = r1; i < n; ++i) {
                edges.push_back({prev, i});
                prev = i;
            }
            edges.push_back({prev, 0});
            break;
        }
        case SynthKind::Tree: {
            if (n == 1) break;
            // Small Pruefer tree, then subdivide edges with chain nodes until
            // the graph has exactly n nodes.
            const int k = std::max(2, (n + 2) / 3);
            auto base = random_tree_edges(k, rng);
            std::vector<int> inserts(base.size(), 0);
            for (int left = n - k, i = 0; left > 0; --left, i = (i + 1) % int(base.size()))
                ++inserts[i];
            NodeId next = k;
            for (std::size_t i = 0; i < base.size(); ++i) {
                NodeId prev = base[i].first;
                for (int j = 0; j < inserts[i]; ++j) {
                    edges.push_back({prev, next});
                    prev = next++;
                }
                edges.push_back({prev, base[i].second});
            }
            break;
        }
    }

    SkeletonGraph g;
    g.object_id = to_string(spec.kind) + "-" + std::to_string(n) + "-" +
                  std::to_string(spec.seed);
    for (NodeId i = 0; i < n; ++i) {
        SkeletonNode node;
        node.id = i;
        node.pos = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                    rng.uniform(0.0, 10.0)};
        node.radius = rng.uniform(rlo, rhi);
        g.nodes.push_back(node);
    }
    for (const auto& [u, v] : edges)
        g.edges.push_back({u, v, rng.uniform(llo, lhi)});
    validate(g);
    return g;
}

SkeletonGraph random_tree(int n, std::uint64_t seed) {
    if (n < 1) throw_validation("InvalidSpec", "n must be at least 1");
    Rng rng(seed);
    const auto edges = random_tree_edges(n, rng);
    SkeletonGraph g;
    g.object_id = "tree-" + std::to_string(n) + "-" + std::to_string(seed);
    for (NodeId i = 0; i < n; ++i) {
        SkeletonNode node;
        node.id = i;
        node.pos = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                    rng.uniform(0.0, 10.0)};
        node.radius = rng.uniform(0.5, 3.0);
        g.nodes.push_back(node);
    }
    for (const auto& [u, v] : edges) g.edges.push_back({u, v, rng.uniform(0.5, 2.0)});
    validate(g);
    return g;
}

ReducedGraph random_reduced_tree(int n, std::uint64_t seed) {
    if (n < 1) throw_validation("InvalidSpec", "n must be at least 1");
    Rng rng(seed);
    const auto edges = random_tree_edges(n, rng);
    std::vector<int> degree(n, 0);
    for (const auto& [u, v] : edges) {
        ++degree[u];
        ++degree[v];
    }
    ReducedGraph g;
    g.object_id = "rtree-" + std::to_string(n) + "-" + std::to_string(seed);
    for (NodeId i = 0; i < n; ++i) {
        Role role = Role::Mid;
        if (degree[i] > 2) role = Role::Junction;
        else if (degree[i] <= 1) role = Role::Endpoint;
        ReducedNode node;
        node.id = i;
        node.role = role;
        node.pos = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                    rng.uniform(0.0, 10.0)};
        node.source_ids = {i};
        g.nodes.push_back(node);
    }
    for (const auto& [u, v] : edges)
        g.edges.push_back({u, v, rng.uniform(0.5, 2.0), 1.0, {}});
    validate(g);
    return g;
}

int brute_longest_path(const ReducedGraph& t) {
    const int n = int(t.nodes.size());
    if (n > 12) throw_validation("TooLarge", "brute_longest_path caps at 12 nodes");
    const auto topo = components_and_cycle_rank(t);
    if (topo.cycle_rank != 0)
        throw_validation("HasCycle", "brute_longest_path requires an acyclic graph");
    const auto inc = incidence_map(t);
    int best = n > 0 ? 1 : 0;
    std::set<NodeId> on_path;
    auto dfs = [&](auto&& self, NodeId u, int len) -> void {
        best = std::max(best, len);
        for (std::size_t ei : inc.at(u)) {
            const auto& e = t.edges[ei];
            const NodeId v = e.u == u ? e.v : e.u;
            if (on_path.count(v)) continue;
            on_path.insert(v);
            self(self, v, len + 1);
            on_path.erase(v);
        }
    };
    for (const auto& node : t.nodes) {
        on_path = {node.id};
        dfs(dfs, node.id, 1);
    }
    return best;
}

double brute_assignment(const Eigen::MatrixXd& c) {
    if (c.rows() != c.cols()) throw_validation("NotSquare", "matrix must be square");
    const int n = int(c.rows());
    if (n > 7) throw_validation("TooLarge", "brute_assignment caps at 7x7");
    if (n == 0) return 0.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += c(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

bool brute_isomorphic(const ReducedGraph& g1, const ReducedGraph& g2) {
    if (g1.nodes.size() > 8 || g2.nodes.size() > 8)
        throw_validation("TooLarge", "brute_isomorphic caps at 8 nodes");
    if (g1.nodes.size() != g2.nodes.size()) return false;
    if (g1.edges.size() != g2.edges.size()) return false;
    const int n = int(g1.nodes.size());

    std::vector<NodeId> ids1, ids2;
    for (const auto& node : g1.nodes) ids1.push_back(node.id);
    for (const auto& node : g2.nodes) ids2.push_back(node.id);
    std::sort(ids1.begin(), ids1.end());
    std::sort(ids2.begin(), ids2.end());

    std::map<NodeId, int> pos1, pos2;
    for (int i = 0; i < n; ++i) {
        pos1[ids1[i]] = i;
        pos2[ids2[i]] = i;
    }
    std::set<std::pair<int, int>> e1, e2;
    for (const auto& e : g1.edges) {
        const int a = pos1.at(e.u), b = pos1.at(e.v);
        e1.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& e : g2.edges) {
        const int a = pos2.at(e.u), b = pos2.at(e.v);
        e2.insert({std::min(a, b), std::max(a, b)});
    }
    if (e1.size() != e2.size()) return false;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool match = true;
        for (const auto& [a, b] : e1) {
            const int pa = perm[a], pb = perm[b];
            if (!e2.count({std::min(pa, pb), std::max(pa, pb)})) {
                match = false;
                break;
            }
        }
        if (match) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return n == 0;
}

}  // namespace toponym
