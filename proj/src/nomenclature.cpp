#include "toponym/nomenclature.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "toponym/errors.hpp"
#include "toponym/topology.hpp"

namespace toponym {

namespace {

const char* kNumerals[20] = {
    "mono",    "di",       "tri",       "tetra",     "penta",
    "hexa",    "hepta",    "octo",      "ennea",     "deca",
    "undeca",  "dodeca",   "trideca",   "tetradeca", "pentadeca",
    "hexadeca", "heptadeca", "octodeca", "enneadeca", "icosa"};

}  // namespace

std::string numeral(int n) {
    if (n < 1) throw_validation("NonPositive", "numeral requires n >= 1");
    if (n <= 20) return kNumerals[n - 1];
    return "n" + std::to_string(n);
}

Suffix suffix_for(ObjectType t) {
    switch (t) {
        case ObjectType::Mitochondrion: return Suffix::Ito;
        case ObjectType::PyramidalNeuron: return Suffix::Idal;
        case ObjectType::Other: return Suffix::Oid;
    }
    return Suffix::Oid;
}

ObjectType type_for(Suffix s) {
    switch (s) {
        case Suffix::Ito: return ObjectType::Mitochondrion;
        case Suffix::Idal: return ObjectType::PyramidalNeuron;
        case Suffix::Oid: return ObjectType::Other;
        case Suffix::None: return ObjectType::Other;
    }
    return ObjectType::Other;
}

namespace {

std::string suffix_text(Suffix s) {
    switch (s) {
        case Suffix::Ito: return "ito";
        case Suffix::Idal: return "idal";
        case Suffix::Oid: return "oid";
        case Suffix::None: return "";
    }
    return "";
}

using Adj = std::map<NodeId, std::vector<NodeId>>;

Adj adjacency(const ReducedGraph& g) {
    Adj adj;
    for (const auto& n : g.nodes) adj[n.id];
    for (const auto& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& [id, nb] : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

}  // namespace

std::vector<NodeId> longest_path(const ReducedGraph& t, NodeId rep) {
    const Adj adj = adjacency(t);
    if (!adj.count(rep))
        throw_validation("UnknownNode", "node " + std::to_string(rep) + " not in graph");

    // Collect the component.
    std::set<NodeId> comp;
    std::queue<NodeId> q;
    q.push(rep);
    comp.insert(rep);
    std::size_t edge_count = 0;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        edge_count += adj.at(u).size();
        for (NodeId v : adj.at(u))
            if (comp.insert(v).second) q.push(v);
    }
    if (edge_count / 2 != comp.size() - 1)
        throw_validation("HasCycle", "longest_path requires an acyclic component");
    if (comp.size() == 1) return {rep};

    auto bfs = [&](NodeId src) {
        std::map<NodeId, int> depth;
        std::map<NodeId, NodeId> parent;
        depth[src] = 0;
        std::queue<NodeId> bq;
        bq.push(src);
        while (!bq.empty()) {
            const NodeId u = bq.front();
            bq.pop();
            for (NodeId v : adj.at(u)) {
                if (depth.count(v)) continue;
                depth[v] = depth[u] + 1;
                parent[v] = u;
                bq.push(v);
            }
        }
        NodeId far = src;
        int best = 0;
        for (const auto& [id, d] : depth)
            if (d > best || (d == best && id < far)) {
                best = d;
                far = id;
            }
        return std::tuple{far, parent};
    };

    // Start from the smallest-id leaf.
    NodeId start = *comp.begin();
    for (NodeId id : comp)
        if (adj.at(id).size() == 1) {
            start = id;
            break;
        }
    auto [u, p1] = bfs(start);
    auto [w, p2] = bfs(u);
    std::vector<NodeId> path;
    for (NodeId cur = w;; cur = p2.at(cur)) {
        path.push_back(cur);
        if (cur == u) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// --- rendering -------------------------------------------------------------

namespace {

std::string render_comp(const NameAst& ast, bool with_suffix);

std::string render_branches(const NameAst& ast) {
    std::string out;
    for (std::size_t i = 0; i < ast.branches.size(); ++i) {
        const auto& br = ast.branches[i];
        if (i) out += '-';
        for (std::size_t j = 0; j < br.locants.size(); ++j) {
            if (j) out += ',';
            out += std::to_string(br.locants[j]);
        }
        out += '-';
        if (br.locants.size() >= 2) out += numeral(int(br.locants.size()));
        const bool mono_leaf = br.sub.core == CoreKind::Chain && br.sub.n == 1 &&
                               br.sub.branches.empty();
        if (mono_leaf) out += "mono";
        else out += "(" + render_comp(br.sub, false) + ")";
    }
    return out;
}

std::string render_core(const NameAst& ast) {
    switch (ast.core) {
        case CoreKind::Chain: return "";
        case CoreKind::Cyclo: return "cyclo";
        case CoreKind::Bicyclo:
            return "bicyclo[" + std::to_string(ast.bridge[0]) + "." +
                   std::to_string(ast.bridge[1]) + "." + std::to_string(ast.bridge[2]) +
                   "]";
        case CoreKind::Spiro:
            return "spiro[" + std::to_string(ast.bridge[0]) + "." +
                   std::to_string(ast.bridge[1]) + "]";
        case CoreKind::Polycyclo: {
            std::string out = "polycyclo[";
            for (std::size_t i = 0; i < ast.core_edges.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(ast.core_edges[i].first) + "." +
                       std::to_string(ast.core_edges[i].second);
            }
            return out + "]";
        }
    }
    return "";
}

std::string render_comp(const NameAst& ast, bool with_suffix) {
    std::string out = render_branches(ast) + render_core(ast);
    std::string num = numeral(ast.n);
    if (with_suffix && ast.suffix != Suffix::None) {
        if (!num.empty() && num.back() == 'a') num.pop_back();
        out += num + suffix_text(ast.suffix);
    } else {
        out += num;
    }
    return out;
}

}  // namespace

std::string render(const NameAst& ast) { return render_comp(ast, true); }

// --- canonical naming ------------------------------------------------------

namespace {

struct Comp {
    std::set<NodeId> nodes;
    const Adj* adj = nullptr;

    std::vector<NodeId> neighbors(NodeId id) const { return adj->at(id); }
};

// Branch descriptor for the hanging subtree rooted at `root`, whose parent
// (the core/chain attachment) is `block`. Returns the canonical sub-AST.
NameAst branch_ast(const Comp& comp, NodeId root, NodeId block);

// Collect the subtree reachable from root without crossing `block`.
std::set<NodeId> subtree_nodes(const Comp& comp, NodeId root, NodeId block) {
    std::set<NodeId> seen{root};
    std::queue<NodeId> q;
    q.push(root);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : comp.neighbors(u)) {
            if (v == block || seen.count(v)) continue;
            seen.insert(v);
            q.push(v);
        }
    }
    return seen;
}

// Assemble the AST for a chain of nodes with branches hanging off it. The
// chain nodes occupy positions 1..k; `outside` marks nodes that are not part
// of this (sub)tree at all (the rest of the core).
NameAst chain_ast(const Comp& comp, const std::vector<NodeId>& chain,
                  const std::set<NodeId>& blocked) {
    NameAst ast;
    ast.core = CoreKind::Chain;
    ast.n = int(chain.size());
    std::set<NodeId> on_chain(chain.begin(), chain.end());
    std::map<std::string, std::pair<std::vector<int>, NameAst>> groups;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        for (NodeId nb : comp.neighbors(chain[i])) {
            if (on_chain.count(nb) || blocked.count(nb)) continue;
            NameAst sub = branch_ast(comp, nb, chain[i]);
            const std::string key = render_comp(sub, false);
            auto& g = groups[key];
            g.first.push_back(int(i + 1));
            g.second = std::move(sub);
        }
    }
    for (auto& [key, g] : groups) {
        std::sort(g.first.begin(), g.first.end());
        ast.branches.push_back({g.first, g.second});
    }
    std::sort(ast.branches.begin(), ast.branches.end(),
              [](const NameAst::Branch& a, const NameAst::Branch& b) {
                  if (a.locants.front() != b.locants.front())
                      return a.locants.front() < b.locants.front();
                  if (a.locants != b.locants) return a.locants < b.locants;
                  return render_comp(a.sub, false) < render_comp(b.sub, false);
              });
    return ast;
}

NameAst branch_ast(const Comp& comp, NodeId root, NodeId block) {
    const std::set<NodeId> sub = subtree_nodes(comp, root, block);
    if (sub.size() == 1) {
        NameAst leaf;
        leaf.core = CoreKind::Chain;
        leaf.n = 1;
        return leaf;
    }
    // All longest root-anchored paths; position 1 is the attachment node.
    std::map<NodeId, NodeId> parent;
    std::map<NodeId, int> depth;
    depth[root] = 0;
    std::queue<NodeId> q;
    q.push(root);
    int max_depth = 0;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : comp.neighbors(u)) {
            if (v == block || depth.count(v)) continue;
            depth[v] = depth[u] + 1;
            parent[v] = u;
            max_depth = std::max(max_depth, depth[v]);
            q.push(v);
        }
    }
    std::string best_text;
    NameAst best;
    bool first = true;
    for (const auto& [id, d] : depth) {
        if (d != max_depth) continue;
        std::vector<NodeId> chain;
        for (NodeId cur = id;; cur = parent.at(cur)) {
            chain.push_back(cur);
            if (cur == root) break;
        }
        std::reverse(chain.begin(), chain.end());
        std::set<NodeId> blocked{block};
        NameAst cand = chain_ast(comp, chain, blocked);
        const std::string text = render_comp(cand, false);
        if (first || text < best_text) {
            first = false;
            best_text = text;
            best = std::move(cand);
        }
    }
    return best;
}

// Tree component: minimize over every diameter path in both directions.
NameAst tree_ast(const Comp& comp, Suffix suffix) {
    if (comp.nodes.size() == 1) {
        NameAst ast;
        ast.core = CoreKind::Chain;
        ast.n = 1;
        ast.suffix = suffix;
        return ast;
    }
    // All-pairs BFS depths (trees are small after reduction).
    std::map<NodeId, std::map<NodeId, NodeId>> parents;
    std::map<NodeId, std::map<NodeId, int>> depths;
    for (NodeId src : comp.nodes) {
        auto& parent = parents[src];
        auto& depth = depths[src];
        depth[src] = 0;
        std::queue<NodeId> q;
        q.push(src);
        while (!q.empty()) {
            const NodeId u = q.front();
            q.pop();
            for (NodeId v : comp.neighbors(u)) {
                if (depth.count(v)) continue;
                depth[v] = depth[u] + 1;
                parent[v] = u;
                q.push(v);
            }
        }
    }
    int diameter = 0;
    for (const auto& [src, depth] : depths)
        for (const auto& [dst, d] : depth) diameter = std::max(diameter, d);

    std::string best_text;
    NameAst best;
    bool first = true;
    for (NodeId u : comp.nodes) {
        for (NodeId w : comp.nodes) {
            if (depths.at(u).at(w) != diameter) continue;
            std::vector<NodeId> chain;
            for (NodeId cur = w;; cur = parents.at(u).at(cur)) {
                chain.push_back(cur);
                if (cur == u) break;
            }
            std::reverse(chain.begin(), chain.end());
            NameAst cand = chain_ast(comp, chain, {});
            cand.suffix = suffix;
            const std::string text = render_comp(cand, true);
            if (first || text < best_text) {
                first = false;
                best_text = text;
                best = std::move(cand);
            }
        }
    }
    return best;
}

// Iteratively strip degree-1 vertices; what remains is the ring system plus
// any connecting paths.
std::set<NodeId> two_core(const Comp& comp) {
    std::set<NodeId> core = comp.nodes;
    bool removed = true;
    while (removed) {
        removed = false;
        for (auto it = core.begin(); it != core.end();) {
            std::size_t deg = 0;
            for (NodeId v : comp.neighbors(*it)) deg += core.count(v);
            if (deg <= 1) {
                it = core.erase(it);
                removed = true;
            } else {
                ++it;
            }
        }
    }
    return core;
}

std::size_t core_degree(const Comp& comp, const std::set<NodeId>& core, NodeId id) {
    std::size_t deg = 0;
    for (NodeId v : comp.neighbors(id)) deg += core.count(v);
    return deg;
}

// Evaluate one concrete numbering of the core: positions[i] holds the node at
// position i+1. Hanging trees become branches at their attachment position.
NameAst core_numbering_ast(const Comp& comp, const std::set<NodeId>& core,
                           const std::vector<NodeId>& positions, NameAst skeleton,
                           Suffix suffix) {
    std::map<std::string, std::pair<std::vector<int>, NameAst>> groups;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (NodeId nb : comp.neighbors(positions[i])) {
            if (core.count(nb)) continue;
            NameAst sub = branch_ast(comp, nb, positions[i]);
            const std::string key = render_comp(sub, false);
            auto& g = groups[key];
            g.first.push_back(int(i + 1));
            g.second = std::move(sub);
        }
    }
    NameAst ast = std::move(skeleton);
    ast.suffix = suffix;
    for (auto& [key, g] : groups) {
        std::sort(g.first.begin(), g.first.end());
        ast.branches.push_back({g.first, g.second});
    }
    std::sort(ast.branches.begin(), ast.branches.end(),
              [](const NameAst::Branch& a, const NameAst::Branch& b) {
                  if (a.locants.front() != b.locants.front())
                      return a.locants.front() < b.locants.front();
                  if (a.locants != b.locants) return a.locants < b.locants;
                  return render_comp(a.sub, false) < render_comp(b.sub, false);
              });
    return ast;
}

void keep_min(bool& first, std::string& best_text, NameAst& best, NameAst cand) {
    const std::string text = render_comp(cand, true);
    if (first || text < best_text) {
        first = false;
        best_text = text;
        best = std::move(cand);
    }
}

// Walk a cycle core into node order starting at the smallest node.
std::vector<NodeId> cycle_order(const Comp& comp, const std::set<NodeId>& core) {
    const NodeId start = *core.begin();
    std::vector<NodeId> order{start};
    NodeId prev = start;
    // First hop toward the smaller neighbor for determinism.
    NodeId cur = 0;
    {
        std::vector<NodeId> nbs;
        for (NodeId v : comp.neighbors(start))
            if (core.count(v)) nbs.push_back(v);
        cur = nbs.front();
    }
    while (cur != start) {
        order.push_back(cur);
        for (NodeId v : comp.neighbors(cur)) {
            if (!core.count(v) || v == prev) continue;
            prev = cur;
            cur = v;
            break;
        }
    }
    return order;
}

NameAst cyclo_ast(const Comp& comp, const std::set<NodeId>& core, Suffix suffix) {
    const auto ring = cycle_order(comp, core);
    const int m = int(ring.size());
    bool first = true;
    std::string best_text;
    NameAst best;
    for (int start = 0; start < m; ++start) {
        for (int dir : {1, -1}) {
            std::vector<NodeId> positions(m);
            for (int i = 0; i < m; ++i)
                positions[i] = ring[((start + dir * i) % m + m) % m];
            NameAst skel;
            skel.core = CoreKind::Cyclo;
            skel.n = m;
            keep_min(first, best_text, best,
                     core_numbering_ast(comp, core, positions, skel, suffix));
        }
    }
    return best;
}

// Interior path from one branch vertex to another through degree-2 core
// nodes, starting along `via`.
std::vector<NodeId> walk_bridge(const Comp& comp, const std::set<NodeId>& core,
                                NodeId from, NodeId via, NodeId stop_a, NodeId stop_b,
                                NodeId& reached) {
    std::vector<NodeId> interior;
    NodeId prev = from;
    NodeId cur = via;
    while (cur != stop_a && cur != stop_b) {
        interior.push_back(cur);
        for (NodeId v : comp.neighbors(cur)) {
            if (!core.count(v) || v == prev) continue;
            prev = cur;
            cur = v;
            break;
        }
    }
    reached = cur;
    return interior;
}

NameAst bicyclo_ast(const Comp& comp, const std::set<NodeId>& core, Suffix suffix) {
    std::vector<NodeId> heads;
    for (NodeId id : core)
        if (core_degree(comp, core, id) == 3) heads.push_back(id);
    bool first = true;
    std::string best_text;
    NameAst best;
    for (int flip = 0; flip < 2; ++flip) {
        const NodeId h1 = heads[flip];
        const NodeId h2 = heads[1 - flip];
        // Three internally disjoint bridges from h1 to h2.
        std::vector<std::vector<NodeId>> bridges;
        std::set<NodeId> consumed;
        for (NodeId via : comp.neighbors(h1)) {
            if (!core.count(via)) continue;
            if (via == h2) {
                // Direct edge; only one exists in a simple graph.
                bridges.push_back({});
                continue;
            }
            if (consumed.count(via)) continue;
            NodeId reached = 0;
            auto interior = walk_bridge(comp, core, h1, via, h2, h2, reached);
            for (NodeId x : interior) consumed.insert(x);
            bridges.push_back(interior);
        }
        std::sort(bridges.begin(), bridges.end(),
                  [](const auto& x, const auto& y) { return x.size() > y.size(); });
        const int a = int(bridges[0].size());
        const int b = int(bridges[1].size());
        const int c = int(bridges[2].size());
        // Permute equal-length bridges.
        std::vector<int> perm{0, 1, 2};
        do {
            if (bridges[perm[0]].size() != std::size_t(a) ||
                bridges[perm[1]].size() != std::size_t(b) ||
                bridges[perm[2]].size() != std::size_t(c))
                continue;
            std::vector<NodeId> positions;
            positions.push_back(h1);
            for (NodeId x : bridges[perm[0]]) positions.push_back(x);
            positions.push_back(h2);
            {
                auto second = bridges[perm[1]];
                std::reverse(second.begin(), second.end());  // walk h2 back to h1
                for (NodeId x : second) positions.push_back(x);
            }
            for (NodeId x : bridges[perm[2]]) positions.push_back(x);
            NameAst skel;
            skel.core = CoreKind::Bicyclo;
            skel.n = int(core.size());
            skel.bridge = {a, b, c};
            keep_min(first, best_text, best,
                     core_numbering_ast(comp, core, positions, skel, suffix));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return best;
}

NameAst spiro_ast(const Comp& comp, const std::set<NodeId>& core, Suffix suffix) {
    NodeId spiro = 0;
    for (NodeId id : core)
        if (core_degree(comp, core, id) == 4) spiro = id;
    // Pair up the four directions into the two rings.
    std::vector<NodeId> vias;
    for (NodeId v : comp.neighbors(spiro))
        if (core.count(v)) vias.push_back(v);
    std::vector<std::vector<NodeId>> rings;  // interiors, spiro excluded
    std::set<NodeId> consumed;
    for (NodeId via : vias) {
        if (consumed.count(via)) continue;
        NodeId reached = 0;
        auto interior = walk_bridge(comp, core, spiro, via, spiro, spiro, reached);
        for (NodeId x : interior) consumed.insert(x);
        rings.push_back(interior);
    }
    std::sort(rings.begin(), rings.end(),
              [](const auto& x, const auto& y) { return x.size() > y.size(); });
    const int a = int(rings[0].size());
    const int b = int(rings[1].size());

    bool first = true;
    std::string best_text;
    NameAst best;
    std::vector<std::pair<int, int>> assignments{{0, 1}};
    if (a == b) assignments.push_back({1, 0});
    for (auto [ri, rj] : assignments) {
        for (int d1 : {0, 1}) {
            for (int d2 : {0, 1}) {
                auto larger = rings[ri];
                auto smaller = rings[rj];
                if (d1) std::reverse(larger.begin(), larger.end());
                if (d2) std::reverse(smaller.begin(), smaller.end());
                std::vector<NodeId> positions;
                positions.push_back(spiro);
                for (NodeId x : larger) positions.push_back(x);
                for (NodeId x : smaller) positions.push_back(x);
                NameAst skel;
                skel.core = CoreKind::Spiro;
                skel.n = int(core.size());
                skel.bridge = {a, b, 0};
                keep_min(first, best_text, best,
                         core_numbering_ast(comp, core, positions, skel, suffix));
            }
        }
    }
    return best;
}

// Minimum-adjacency-code canonical labelings of the core (all of them).
std::vector<std::vector<NodeId>> min_code_labelings(const Comp& comp,
                                                    const std::set<NodeId>& core) {
    const std::vector<NodeId> nodes(core.begin(), core.end());
    const int n = int(nodes.size());
    std::map<NodeId, int> index;
    for (int i = 0; i < n; ++i) index[nodes[i]] = i;
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (NodeId v : comp.neighbors(nodes[i]))
            if (core.count(v)) adj[i].push_back(index.at(v));

    std::vector<std::vector<int>> best_orders;
    std::vector<int> best_code;
    bool have_best = false;

    std::vector<int> order;
    std::vector<int> code;  // flattened: for each added vertex, sorted earlier
                            // neighbor positions then a separator
    std::vector<bool> taken(n, false);

    auto rec = [&](auto&& self) -> void {
        if (int(order.size()) == n) {
            if (!have_best || code < best_code) {
                have_best = true;
                best_code = code;
                best_orders.clear();
            }
            if (code == best_code) best_orders.push_back(order);
            return;
        }
        for (int cand = 0; cand < n; ++cand) {
            if (taken[cand]) continue;
            // Connectivity-first: after the first vertex, require a labeled
            // neighbor so codes of connected cores stay comparable.
            std::vector<int> prev;
            for (int nb : adj[cand]) {
                for (std::size_t p = 0; p < order.size(); ++p)
                    if (order[p] == nb) prev.push_back(int(p) + 1);
            }
            if (!order.empty() && prev.empty()) continue;
            std::sort(prev.begin(), prev.end());
            const std::size_t mark = code.size();
            for (int p : prev) code.push_back(p);
            code.push_back(std::numeric_limits<int>::max());  // separator
            // Prune when the prefix already exceeds the best code.
            bool prune = false;
            if (have_best) {
                const std::size_t len = std::min(code.size(), best_code.size());
                int cmp = 0;
                for (std::size_t i = 0; i < len && cmp == 0; ++i)
                    cmp = code[i] < best_code[i] ? -1 : (code[i] > best_code[i] ? 1 : 0);
                prune = cmp > 0;
            }
            if (!prune) {
                taken[cand] = true;
                order.push_back(cand);
                self(self);
                order.pop_back();
                taken[cand] = false;
            }
            code.resize(mark);
        }
    };
    rec(rec);

    std::vector<std::vector<NodeId>> labelings;
    for (const auto& ord : best_orders) {
        std::vector<NodeId> pos(n);
        for (int i = 0; i < n; ++i) pos[i] = nodes[ord[i]];
        labelings.push_back(std::move(pos));
    }
    return labelings;
}

NameAst polycyclo_ast(const Comp& comp, const std::set<NodeId>& core, Suffix suffix) {
    const auto labelings = min_code_labelings(comp, core);
    bool first = true;
    std::string best_text;
    NameAst best;
    for (const auto& positions : labelings) {
        std::map<NodeId, int> pos_of;
        for (std::size_t i = 0; i < positions.size(); ++i)
            pos_of[positions[i]] = int(i + 1);
        std::set<std::pair<int, int>> edges;
        for (NodeId id : core)
            for (NodeId v : comp.neighbors(id))
                if (core.count(v))
                    edges.insert({std::min(pos_of[id], pos_of[v]),
                                  std::max(pos_of[id], pos_of[v])});
        NameAst skel;
        skel.core = CoreKind::Polycyclo;
        skel.n = int(core.size());
        skel.core_edges.assign(edges.begin(), edges.end());
        keep_min(first, best_text, best,
                 core_numbering_ast(comp, core, positions, skel, suffix));
    }
    return best;
}

bool core_has_bridge(const Comp& comp, const std::set<NodeId>& core) {
    // An edge is a bridge when removing it disconnects the core. The cores
    // here are tiny, so test each edge directly.
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u : core)
        for (NodeId v : comp.neighbors(u))
            if (core.count(v) && u < v) edges.push_back({u, v});
    for (const auto& [bu, bv] : edges) {
        std::set<NodeId> seen{bu};
        std::queue<NodeId> q;
        q.push(bu);
        while (!q.empty()) {
            const NodeId x = q.front();
            q.pop();
            for (NodeId y : comp.neighbors(x)) {
                if (!core.count(y) || seen.count(y)) continue;
                if (x == bu && y == bv) continue;
                if (x == bv && y == bu) continue;
                seen.insert(y);
                q.push(y);
            }
        }
        if (!seen.count(bv)) return true;
    }
    return false;
}

NameAst component_ast(const Comp& comp, Suffix suffix) {
    std::size_t edge_count = 0;
    for (NodeId id : comp.nodes)
        for (NodeId v : comp.neighbors(id))
            if (v > id) ++edge_count;
    const std::size_t rank = edge_count + 1 - comp.nodes.size();

    if (rank == 0) return tree_ast(comp, suffix);
    const auto core = two_core(comp);
    if (rank == 1) return cyclo_ast(comp, core, suffix);
    if (rank == 2 && !core_has_bridge(comp, core)) {
        bool has_deg4 = false;
        for (NodeId id : core)
            if (core_degree(comp, core, id) == 4) has_deg4 = true;
        if (has_deg4) return spiro_ast(comp, core, suffix);
        return bicyclo_ast(comp, core, suffix);
    }
    return polycyclo_ast(comp, core, suffix);
}

}  // namespace

Name name_graph(const ReducedGraph& gs, ObjectType type) {
    const Adj adj = adjacency(gs);
    const Suffix suffix = suffix_for(type);

    auto labels = component_labels(gs);
    std::map<std::size_t, Comp> comps;
    for (const auto& n : gs.nodes) comps[labels.at(n.id)].nodes.insert(n.id);
    for (auto& [l, c] : comps) c.adj = &adj;

    std::vector<std::pair<std::string, NameAst>> named;
    for (const auto& [l, c] : comps) {
        NameAst ast = component_ast(c, suffix);
        named.push_back({render_comp(ast, true), std::move(ast)});
    }
    std::sort(named.begin(), named.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Name out;
    for (std::size_t i = 0; i < named.size(); ++i) {
        if (i) out.text += '+';
        out.text += named[i].first;
        out.components.push_back(std::move(named[i].second));
    }
    return out;
}

bool canonical_equal(const ReducedGraph& g1, const ReducedGraph& g2) {
    return name_graph(g1, ObjectType::Other).text == name_graph(g2, ObjectType::Other).text;
}

// --- parsing ---------------------------------------------------------------

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& str) : s(str) {}

    [[noreturn]] void fail(const std::string& kind, const std::string& msg,
                           std::size_t at) const {
        throw NameParseError(kind, msg + " at position " + std::to_string(at), at);
    }

    bool eof() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool starts_with(const char* lit) const { return s.compare(pos, strlen(lit), lit) == 0; }

    void expect(char c) {
        if (peek() != c)
            fail("SyntaxError", std::string("expected '") + c + "'", pos);
        ++pos;
    }

    int parse_int() {
        if (!isdigit(static_cast<unsigned char>(peek())))
            fail("SyntaxError", "expected a number", pos);
        std::size_t start = pos;
        long v = 0;
        while (isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1000000) fail("SyntaxError", "number out of range", start);
            ++pos;
        }
        return int(v);
    }

    // Try to read a numeral (no suffix). Returns 0 on failure without moving.
    int try_numeral() {
        if (peek() == 'n' && pos + 1 < s.size() &&
            isdigit(static_cast<unsigned char>(s[pos + 1]))) {
            ++pos;
            return parse_int();
        }
        // Longest table entry first.
        int best = 0;
        std::size_t best_len = 0;
        for (int v = 1; v <= 20; ++v) {
            const std::string text = kNumerals[v - 1];
            if (text.size() > best_len && s.compare(pos, text.size(), text) == 0) {
                best = v;
                best_len = text.size();
            }
        }
        pos += best_len;
        return best;
    }

    // Numeral possibly elided (final 'a' dropped) followed by a suffix.
    std::pair<int, Suffix> parse_numeral_suffix() {
        const std::size_t at = pos;
        if (peek() == 'n' && pos + 1 < s.size() &&
            isdigit(static_cast<unsigned char>(s[pos + 1]))) {
            ++pos;
            const int v = parse_int();
            const Suffix suf = parse_suffix();
            return {v, suf};
        }
        struct Option {
            int value;
            std::size_t len;
        };
        std::vector<Option> options;
        for (int v = 1; v <= 20; ++v) {
            const std::string text = kNumerals[v - 1];
            if (s.compare(pos, text.size(), text) == 0)
                options.push_back({v, text.size()});
            if (text.back() == 'a') {
                const std::string elided = text.substr(0, text.size() - 1);
                if (s.compare(pos, elided.size(), elided) == 0)
                    options.push_back({v, elided.size()});
            }
        }
        std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
            return a.len > b.len;
        });
        for (const auto& opt : options) {
            const std::size_t save = pos;
            pos += opt.len;
            if (suffix_ahead()) {
                const Suffix suf = parse_suffix();
                return {opt.value, suf};
            }
            pos = save;
        }
        fail("SyntaxError", "expected a numeral with suffix", at);
    }

    bool suffix_ahead() const {
        return s.compare(pos, 3, "ito") == 0 || s.compare(pos, 4, "idal") == 0 ||
               s.compare(pos, 3, "oid") == 0;
    }

    Suffix parse_suffix() {
        if (s.compare(pos, 4, "idal") == 0) {
            pos += 4;
            return Suffix::Idal;
        }
        if (s.compare(pos, 3, "ito") == 0) {
            pos += 3;
            return Suffix::Ito;
        }
        if (s.compare(pos, 3, "oid") == 0) {
            pos += 3;
            return Suffix::Oid;
        }
        fail("SyntaxError", "expected a suffix", pos);
    }

    int parse_bracket_int(const char* what) {
        if (!isdigit(static_cast<unsigned char>(peek())))
            fail("SyntaxError", std::string("expected ") + what, pos);
        return parse_int();
    }

    void bracket_sep() {
        if (peek() == '.' || peek() == ',') ++pos;
        else fail("SyntaxError", "expected '.' between bracket numbers", pos);
    }

    NameAst parse_comp(bool with_suffix) {
        NameAst ast;
        std::vector<std::size_t> branch_at;
        // Branches start with a locant digit.
        while (isdigit(static_cast<unsigned char>(peek()))) {
            branch_at.push_back(pos);
            NameAst::Branch br;
            br.locants.push_back(parse_int());
            while (peek() == ',') {
                ++pos;
                br.locants.push_back(parse_int());
            }
            expect('-');
            const std::size_t mult_at = pos;
            int mult = 0;
            {
                const std::size_t save = pos;
                const int v = try_numeral();
                if (v >= 2 && (starts_with("mono") || peek() == '(')) mult = v;
                else pos = save;
            }
            if (starts_with("mono")) {
                pos += 4;
                br.sub = NameAst{};
                br.sub.core = CoreKind::Chain;
                br.sub.n = 1;
            } else if (peek() == '(') {
                ++pos;
                br.sub = parse_comp(false);
                expect(')');
            } else {
                fail("SyntaxError", "expected a branch descriptor", pos);
            }
            if (mult == 0) mult = 1;
            if (int(br.locants.size()) != mult)
                fail("SyntaxError",
                     "multiplier " + std::to_string(mult) + " does not match " +
                         std::to_string(br.locants.size()) + " locants",
                     mult_at);
            std::sort(br.locants.begin(), br.locants.end());
            ast.branches.push_back(std::move(br));
            if (peek() == '-') ++pos;  // separator or terminal hyphen
        }

        const std::size_t core_at = pos;
        if (starts_with("bicyclo[")) {
            pos += 8;
            ast.core = CoreKind::Bicyclo;
            ast.bridge[0] = parse_bracket_int("a bridge size");
            bracket_sep();
            ast.bridge[1] = parse_bracket_int("a bridge size");
            bracket_sep();
            ast.bridge[2] = parse_bracket_int("a bridge size");
            expect(']');
        } else if (starts_with("spiro[")) {
            pos += 6;
            ast.core = CoreKind::Spiro;
            ast.bridge[0] = parse_bracket_int("a ring size");
            bracket_sep();
            ast.bridge[1] = parse_bracket_int("a ring size");
            expect(']');
        } else if (starts_with("polycyclo[")) {
            pos += 10;
            ast.core = CoreKind::Polycyclo;
            while (true) {
                const int u = parse_bracket_int("an edge");
                expect('.');
                const int v = parse_bracket_int("an edge");
                ast.core_edges.push_back({std::min(u, v), std::max(u, v)});
                if (peek() == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
            expect(']');
        } else if (starts_with("cyclo")) {
            pos += 5;
            ast.core = CoreKind::Cyclo;
        } else {
            ast.core = CoreKind::Chain;
        }

        if (with_suffix) {
            auto [n, suf] = parse_numeral_suffix();
            ast.n = n;
            ast.suffix = suf;
        } else {
            const std::size_t at = pos;
            ast.n = try_numeral();
            if (ast.n == 0) fail("SyntaxError", "expected a numeral", at);
            ast.suffix = Suffix::None;
        }

        // Structural checks.
        const int n = ast.n;
        switch (ast.core) {
            case CoreKind::Chain:
                break;
            case CoreKind::Cyclo:
                if (n < 3) fail("SyntaxError", "a ring needs at least 3 nodes", core_at);
                break;
            case CoreKind::Bicyclo: {
                const auto [a, b, c] = std::tuple{ast.bridge[0], ast.bridge[1], ast.bridge[2]};
                if (!(a >= b && b >= c))
                    fail("SyntaxError", "bridge sizes must be non-increasing", core_at);
                if (b == 0)
                    fail("SyntaxError", "at most one empty bridge is allowed", core_at);
                if (a + b + c + 2 != n)
                    fail("BracketArithmeticMismatch",
                         std::to_string(a) + "+" + std::to_string(b) + "+" +
                             std::to_string(c) + "+2 != " + std::to_string(n),
                         core_at);
                break;
            }
            case CoreKind::Spiro: {
                const int a = ast.bridge[0], b = ast.bridge[1];
                if (!(a >= b && b >= 2))
                    fail("SyntaxError", "spiro rings need at least 2 interior nodes", core_at);
                if (a + b + 1 != n)
                    fail("BracketArithmeticMismatch",
                         std::to_string(a) + "+" + std::to_string(b) +
                             "+1 != " + std::to_string(n),
                         core_at);
                break;
            }
            case CoreKind::Polycyclo: {
                std::set<std::pair<int, int>> seen;
                std::vector<std::vector<int>> nb(n + 1);
                for (auto [u, v] : ast.core_edges) {
                    if (u == v) fail("SyntaxError", "self-loop in core edge list", core_at);
                    if (u < 1 || v > n)
                        fail("LocantOutOfRange", "core edge position out of range", core_at);
                    if (!seen.insert({u, v}).second)
                        fail("SyntaxError", "repeated core edge", core_at);
                    nb[u].push_back(v);
                    nb[v].push_back(u);
                }
                std::vector<bool> reach(n + 1, false);
                std::queue<int> bq;
                bq.push(1);
                reach[1] = true;
                while (!bq.empty()) {
                    const int u = bq.front();
                    bq.pop();
                    for (int v : nb[u])
                        if (!reach[v]) {
                            reach[v] = true;
                            bq.push(v);
                        }
                }
                for (int i = 1; i <= n; ++i)
                    if (!reach[i])
                        fail("SyntaxError", "core edge list must connect all positions", core_at);
                break;
            }
        }
        for (std::size_t i = 0; i < ast.branches.size(); ++i)
            for (int l : ast.branches[i].locants)
                if (l < 1 || l > n)
                    fail("LocantOutOfRange",
                         "locant " + std::to_string(l) + " outside 1.." + std::to_string(n),
                         branch_at[i]);
        return ast;
    }
};

// Build the graph for one component AST; returns the ids used.
void build_component(const NameAst& ast, ReducedGraph& g, NodeId& next_id) {
    // Core node ids by position.
    std::vector<NodeId> core_ids(ast.n);
    for (int i = 0; i < ast.n; ++i) core_ids[i] = next_id++;
    auto link = [&](NodeId u, NodeId v) { g.edges.push_back({u, v, 1.0, 1.0, {}}); };

    switch (ast.core) {
        case CoreKind::Chain:
            for (int i = 0; i + 1 < ast.n; ++i) link(core_ids[i], core_ids[i + 1]);
            break;
        case CoreKind::Cyclo:
            for (int i = 0; i < ast.n; ++i) link(core_ids[i], core_ids[(i + 1) % ast.n]);
            break;
        case CoreKind::Bicyclo: {
            const int a = ast.bridge[0], b = ast.bridge[1], c = ast.bridge[2];
            const int h1 = 0, h2 = a + 1;
            // Bridge 1: positions 2..a+1.
            NodeId prev = core_ids[h1];
            for (int i = 0; i < a; ++i) {
                link(prev, core_ids[1 + i]);
                prev = core_ids[1 + i];
            }
            link(prev, core_ids[h2]);
            // Bridge 2: positions a+3..a+b+2 walked from h2 back to h1.
            prev = core_ids[h2];
            for (int i = 0; i < b; ++i) {
                link(prev, core_ids[a + 2 + i]);
                prev = core_ids[a + 2 + i];
            }
            link(prev, core_ids[h1]);
            // Bridge 3: positions a+b+3.. walked from h1 to h2.
            prev = core_ids[h1];
            for (int i = 0; i < c; ++i) {
                link(prev, core_ids[a + b + 2 + i]);
                prev = core_ids[a + b + 2 + i];
            }
            link(prev, core_ids[h2]);
            break;
        }
        case CoreKind::Spiro: {
            const int a = ast.bridge[0], b = ast.bridge[1];
            NodeId prev = core_ids[0];
            for (int i = 0; i < a; ++i) {
                link(prev, core_ids[1 + i]);
                prev = core_ids[1 + i];
            }
            link(prev, core_ids[0]);
            prev = core_ids[0];
            for (int i = 0; i < b; ++i) {
                link(prev, core_ids[a + 1 + i]);
                prev = core_ids[a + 1 + i];
            }
            link(prev, core_ids[0]);
            break;
        }
        case CoreKind::Polycyclo:
            for (auto [u, v] : ast.core_edges)
                link(core_ids[u - 1], core_ids[v - 1]);
            break;
    }

    for (const auto& br : ast.branches) {
        for (int locant : br.locants) {
            // The branch root is position 1 of the sub-component.
            const NodeId root = next_id;
            build_component(br.sub, g, next_id);
            link(core_ids[locant - 1], root);
        }
    }
}

}  // namespace

Name parse_name_ast(const std::string& s) {
    if (s.empty()) throw NameParseError("SyntaxError", "empty name", 0);
    Name out;
    Parser p(s);
    while (true) {
        const std::size_t at = p.pos;
        NameAst comp = p.parse_comp(true);
        if (!out.components.empty() && comp.suffix != out.components.front().suffix)
            p.fail("SyntaxError", "components disagree on the suffix", at);
        out.components.push_back(std::move(comp));
        if (p.peek() == '+') {
            ++p.pos;
            continue;
        }
        break;
    }
    if (!p.eof()) p.fail("SyntaxError", "trailing characters", p.pos);
    out.text = s;
    return out;
}

ReducedGraph parse_name(const std::string& s) {
    const Name parsed = parse_name_ast(s);
    ReducedGraph g;
    g.object_id = s;
    g.type = type_for(parsed.components.front().suffix);

    NodeId next_id = 0;
    for (const auto& comp : parsed.components) build_component(comp, g, next_id);

    // Nodes were only implied so far; create them with roles from degree.
    std::map<NodeId, std::size_t> deg;
    for (NodeId i = 0; i < next_id; ++i) deg[i] = 0;
    for (const auto& e : g.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    for (NodeId i = 0; i < next_id; ++i) {
        Role role = Role::Mid;
        if (deg[i] > 2) role = Role::Junction;
        else if (deg[i] <= 1) role = Role::Endpoint;
        g.nodes.push_back({i, role, {double(i), 0.0, 0.0}, {i}});
    }
    // Components with no key node get an Anchor at their smallest node.
    auto labels = component_labels(g);
    std::map<std::size_t, NodeId> smallest;
    std::map<std::size_t, bool> has_key;
    for (const auto& n : g.nodes) {
        const auto l = labels.at(n.id);
        if (!smallest.count(l) || n.id < smallest[l]) smallest[l] = n.id;
        if (n.role != Role::Mid) has_key[l] = true;
    }
    for (auto& n : g.nodes)
        if (!has_key[labels.at(n.id)] && n.id == smallest[labels.at(n.id)])
            n.role = Role::Anchor;

    validate(g);
    return g;
}

}  // namespace toponym
