#include "toponym/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "toponym/errors.hpp"
#include "toponym/topology.hpp"

namespace toponym {

KeyNodes classify_key_nodes(const SkeletonGraph& g) {
    std::unordered_map<NodeId, std::size_t> deg;
    for (const auto& n : g.nodes) deg[n.id] = 0;
    for (const auto& e : g.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    KeyNodes k;
    for (const auto& [id, d] : deg) {
        if (d > 2) k.junctions.insert(id);
        else if (d <= 1) k.endpoints.insert(id);  // degree 0 counts as endpoint
    }
    return k;
}

double edge_thickness(const SkeletonGraph& g, const SkeletonEdge& e) {
    const SkeletonNode* nu = nullptr;
    const SkeletonNode* nv = nullptr;
    for (const auto& n : g.nodes) {
        if (n.id == e.u) nu = &n;
        if (n.id == e.v) nv = &n;
    }
    bool found = false;
    for (const auto& ge : g.edges)
        if ((ge.u == e.u && ge.v == e.v) || (ge.u == e.v && ge.v == e.u)) found = true;
    if (!nu || !nv || !found)
        throw_validation("UnknownEdge", "edge (" + std::to_string(e.u) + "," +
                                            std::to_string(e.v) + ") not in graph");
    return (nu->radius + nv->radius) / 2.0;
}

namespace {

struct SkelIndex {
    std::map<NodeId, const SkeletonNode*> nodes;
    std::map<NodeId, std::vector<std::size_t>> incident;  // edge indices

    explicit SkelIndex(const SkeletonGraph& g) {
        for (const auto& n : g.nodes) {
            nodes[n.id] = &n;
            incident[n.id];
        }
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            incident[g.edges[i].u].push_back(i);
            incident[g.edges[i].v].push_back(i);
        }
        for (auto& [id, vec] : incident) {
            std::sort(vec.begin(), vec.end(), [&](std::size_t a, std::size_t b) {
                const NodeId oa = g.edges[a].u == id ? g.edges[a].v : g.edges[a].u;
                const NodeId ob = g.edges[b].u == id ? g.edges[b].v : g.edges[b].u;
                if (oa != ob) return oa < ob;
                return a < b;
            });
        }
    }

};

}  // namespace

std::vector<SimplePath> enumerate_simple_paths(const SkeletonGraph& g) {
    const SkelIndex idx(g);
    const KeyNodes keys = classify_key_nodes(g);
    auto is_key = [&](NodeId id) {
        return keys.junctions.count(id) || keys.endpoints.count(id);
    };

    // Components made only of degree-2 nodes have no key node to start from;
    // their smallest-id node anchors the cycle walk.
    std::set<NodeId> anchors;
    {
        auto labels = component_labels(g);
        std::map<std::size_t, NodeId> smallest;
        std::map<std::size_t, bool> has_key;
        for (const auto& n : g.nodes) {
            const auto l = labels.at(n.id);
            if (!smallest.count(l) || n.id < smallest[l]) smallest[l] = n.id;
            if (is_key(n.id)) has_key[l] = true;
        }
        for (const auto& [l, id] : smallest)
            if (!has_key[l] && !idx.incident.at(id).empty()) anchors.insert(id);
    }
    auto is_stop = [&](NodeId id) { return is_key(id) || anchors.count(id); };

    std::vector<bool> used(g.edges.size(), false);
    std::vector<SimplePath> paths;

    std::vector<NodeId> starts;
    for (NodeId id : keys.junctions) starts.push_back(id);
    for (NodeId id : keys.endpoints) starts.push_back(id);
    for (NodeId id : anchors) starts.push_back(id);
    std::sort(starts.begin(), starts.end());

    for (NodeId start : starts) {
        for (std::size_t first : idx.incident.at(start)) {
            if (used[first]) continue;
            SimplePath p;
            p.src = start;
            NodeId cur = start;
            std::size_t edge = first;
            double wsum = 0.0;
            while (true) {
                used[edge] = true;
                const auto& e = g.edges[edge];
                const NodeId next = e.u == cur ? e.v : e.u;
                const double th =
                    (idx.nodes.at(e.u)->radius + idx.nodes.at(e.v)->radius) / 2.0;
                p.length += e.length;
                wsum += th * e.length;
                if (is_stop(next)) {
                    p.trg = next;
                    break;
                }
                p.interior.push_back(next);
                cur = next;
                // Degree-2 interior node: exactly one unused edge continues.
                for (std::size_t cand : idx.incident.at(next))
                    if (!used[cand]) {
                        edge = cand;
                        break;
                    }
            }
            p.thickness = p.length > 0 ? wsum / p.length : 0.0;
            paths.push_back(std::move(p));
        }
    }
    return paths;
}

namespace {

// Interior index whose cumulative walk length comes closest to `target`;
// earlier node wins ties. `cums[i]` is the length from src to interior[i].
std::size_t nearest_interior(const std::vector<double>& cums, double target) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cums.size(); ++i) {
        const double err = std::abs(cums[i] - target);
        if (err < best_err - 1e-15) {
            best_err = err;
            best = i;
        }
    }
    return best;
}

}  // namespace

ReducedGraph reduce_graph(const SkeletonGraph& g, const ReduceConfig& cfg) {
    const SkelIndex idx(g);
    const KeyNodes keys = classify_key_nodes(g);
    const auto paths = enumerate_simple_paths(g);

    std::set<NodeId> anchors;
    for (const auto& p : paths)
        if (p.src == p.trg && !keys.junctions.count(p.src) && !keys.endpoints.count(p.src))
            anchors.insert(p.src);

    ReducedGraph out;
    out.object_id = g.object_id;
    out.type = g.type;

    std::vector<NodeId> key_ids;
    for (NodeId id : keys.junctions) key_ids.push_back(id);
    for (NodeId id : keys.endpoints) key_ids.push_back(id);
    for (NodeId id : anchors) key_ids.push_back(id);
    std::sort(key_ids.begin(), key_ids.end());
    for (NodeId id : key_ids) {
        Role role = Role::Anchor;
        if (keys.junctions.count(id)) role = Role::Junction;
        else if (keys.endpoints.count(id)) role = Role::Endpoint;
        out.nodes.push_back({id, role, idx.nodes.at(id)->pos, {id}});
    }

    NodeId next_id = 0;
    for (const auto& n : g.nodes) next_id = std::max(next_id, n.id + 1);

    auto path_nodes = [&](const SimplePath& p) {
        std::vector<NodeId> seq;
        seq.push_back(p.src);
        seq.insert(seq.end(), p.interior.begin(), p.interior.end());
        seq.push_back(p.trg);
        return seq;
    };
    auto cumulative = [&](const SimplePath& p) {
        std::vector<double> cums(p.interior.size(), 0.0);
        double cum = 0.0;
        NodeId cur = p.src;
        for (std::size_t i = 0; i < p.interior.size(); ++i) {
            const NodeId nxt = p.interior[i];
            for (std::size_t cand : idx.incident.at(cur)) {
                const auto& e = g.edges[cand];
                if ((e.u == cur ? e.v : e.u) == nxt) {
                    cum += e.length;
                    break;
                }
            }
            cums[i] = cum;
            cur = nxt;
        }
        return cums;
    };

    std::map<std::pair<NodeId, NodeId>, int> pair_count;
    for (const auto& p : paths) {
        if (p.src == p.trg) {
            if (!cfg.preserve_loops) continue;
            // Self-loop: two Mid nodes, three edges of a third each. A loop in
            // a simple graph has at least two interior nodes.
            const auto seq = path_nodes(p);
            const auto cums = cumulative(p);
            std::size_t i1 = nearest_interior(cums, p.length / 3.0);
            if (i1 + 1 >= p.interior.size()) i1 = p.interior.size() - 2;
            std::size_t i2 = nearest_interior(cums, 2.0 * p.length / 3.0);
            if (i2 <= i1) i2 = i1 + 1;
            const NodeId m1 = next_id++;
            const NodeId m2 = next_id++;
            out.nodes.push_back({m1, Role::Mid, idx.nodes.at(p.interior[i1])->pos, {}});
            out.nodes.push_back({m2, Role::Mid, idx.nodes.at(p.interior[i2])->pos, {}});
            const double w = p.length / 3.0;
            std::vector<NodeId> seg1(seq.begin(), seq.begin() + i1 + 2);
            std::vector<NodeId> seg2(seq.begin() + i1 + 1, seq.begin() + i2 + 2);
            std::vector<NodeId> seg3(seq.begin() + i2 + 1, seq.end());
            out.edges.push_back({p.src, m1, w, p.thickness, seg1});
            out.edges.push_back({m1, m2, w, p.thickness, seg2});
            out.edges.push_back({m2, p.trg, w, p.thickness, seg3});
            continue;
        }
        auto key = std::minmax(p.src, p.trg);
        if (pair_count[{key.first, key.second}]++ == 0) {
            out.edges.push_back({p.src, p.trg, p.length, p.thickness, path_nodes(p)});
        } else {
            // Parallel path: one Mid splits it into two half-length edges.
            const NodeId m = next_id++;
            const double w = p.length / 2.0;
            if (p.interior.empty()) {
                const Vec3 a = idx.nodes.at(p.src)->pos;
                const Vec3 b = idx.nodes.at(p.trg)->pos;
                out.nodes.push_back(
                    {m, Role::Mid, {(a.x + b.x) / 2, (a.y + b.y) / 2, (a.z + b.z) / 2}, {}});
                out.edges.push_back({p.src, m, w, p.thickness, {}});
                out.edges.push_back({m, p.trg, w, p.thickness, {}});
            } else {
                const auto seq = path_nodes(p);
                const std::size_t i = nearest_interior(cumulative(p), p.length / 2.0);
                out.nodes.push_back({m, Role::Mid, idx.nodes.at(p.interior[i])->pos, {}});
                std::vector<NodeId> seg1(seq.begin(), seq.begin() + i + 2);
                std::vector<NodeId> seg2(seq.begin() + i + 1, seq.end());
                out.edges.push_back({p.src, m, w, p.thickness, seg1});
                out.edges.push_back({m, p.trg, w, p.thickness, seg2});
            }
        }
    }
    return out;
}

double total_edge_length(const ReducedGraph& g) {
    double total = 0.0;
    for (const auto& e : g.edges) total += e.length;
    return total;
}

namespace {

// A maximal run of Mid nodes between two non-Mid "hubs" (or around a cycle
// back to the same hub). Contraction works on these logical edges; untouched
// chains are re-emitted with their original lengths, thicknesses, and paths.
struct Chain {
    NodeId a = 0, b = 0;
    double length = 0.0;
    double thickness = 0.0;
    std::vector<NodeId> mids;        // interior, in a->b walk order
    std::vector<ReducedEdge> edges;  // original edges, a->b walk order
    std::vector<bool> flip;          // edge stored against the walk direction
    bool dirty = false;              // re-materialize as direct edge / loop
    bool alive = true;
    std::vector<NodeId> skeleton_path;  // for dirty direct chains
    std::size_t seq = 0;
};

struct Hub {
    Role role = Role::Endpoint;
    Vec3 pos;
    std::vector<NodeId> source_ids;
    bool alive = true;
};

std::vector<NodeId> chain_provenance(const Chain& c) {
    // Joins per-edge skeleton paths along the walk; empty when any segment
    // lacks provenance or the segments do not line up.
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        auto p = c.edges[i].skeleton_path;
        if (p.empty()) return {};
        if (c.flip[i]) std::reverse(p.begin(), p.end());
        if (out.empty()) {
            out = p;
        } else {
            if (p.front() != out.back()) return {};
            out.insert(out.end(), p.begin() + 1, p.end());
        }
    }
    return out;
}

}  // namespace

ReducedGraph contract_short_edges(const ReducedGraph& gs, double tau) {
    std::map<NodeId, const ReducedNode*> node_of;
    std::map<NodeId, std::vector<std::size_t>> incident;
    for (const auto& n : gs.nodes) {
        node_of[n.id] = &n;
        incident[n.id];
    }
    for (std::size_t i = 0; i < gs.edges.size(); ++i) {
        incident[gs.edges[i].u].push_back(i);
        incident[gs.edges[i].v].push_back(i);
    }
    for (auto& [id, vec] : incident)
        std::sort(vec.begin(), vec.end(), [&](std::size_t x, std::size_t y) {
            const auto& ex = gs.edges[x];
            const auto& ey = gs.edges[y];
            const NodeId ox = ex.u == id ? ex.v : ex.u;
            const NodeId oy = ey.u == id ? ey.v : ey.u;
            if (ox != oy) return ox < oy;
            return x < y;
        });

    // Hubs: everything that is not a degree-2 Mid.
    std::map<NodeId, Hub> hubs;
    for (const auto& n : gs.nodes)
        if (n.role != Role::Mid || incident.at(n.id).size() != 2)
            hubs[n.id] = {n.role, n.pos, n.source_ids, true};

    std::vector<Chain> chains;
    std::vector<bool> used(gs.edges.size(), false);
    auto walk = [&](NodeId start, std::size_t first) {
        Chain c;
        c.a = start;
        NodeId cur = start;
        std::size_t edge = first;
        double wsum = 0.0;
        while (true) {
            used[edge] = true;
            const auto& e = gs.edges[edge];
            c.edges.push_back(e);
            c.flip.push_back(e.u != cur);
            const NodeId next = e.u == cur ? e.v : e.u;
            c.length += e.length;
            wsum += e.thickness * e.length;
            if (hubs.count(next)) {
                c.b = next;
                break;
            }
            c.mids.push_back(next);
            cur = next;
            for (std::size_t cand : incident.at(next))
                if (!used[cand]) {
                    edge = cand;
                    break;
                }
        }
        c.thickness = c.length > 0 ? wsum / c.length : 0.0;
        c.seq = chains.size();
        chains.push_back(std::move(c));
    };
    for (const auto& [id, hub] : hubs)
        for (std::size_t first : incident.at(id))
            if (!used[first]) walk(id, first);
    // Cycles made only of Mid nodes never met a hub; anchor each at its
    // smallest node, which then acts as a hub while keeping its Mid role.
    for (std::size_t i = 0; i < gs.edges.size(); ++i) {
        if (used[i]) continue;
        std::set<NodeId> comp{gs.edges[i].u, gs.edges[i].v};
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < gs.edges.size(); ++j) {
                if (used[j]) continue;
                const auto& e = gs.edges[j];
                if (comp.count(e.u) != comp.count(e.v)) {
                    comp.insert(e.u);
                    comp.insert(e.v);
                    grew = true;
                }
            }
        }
        const NodeId stand_in = *comp.begin();
        const auto& n = *node_of.at(stand_in);
        hubs[stand_in] = {n.role, n.pos, n.source_ids, true};
        walk(stand_in, incident.at(stand_in)[0]);
    }

    bool changed = false;
    while (true) {
        std::size_t pick = std::numeric_limits<std::size_t>::max();
        auto better = [&](std::size_t x, std::size_t y) {
            const auto& cx = chains[x];
            const auto& cy = chains[y];
            if (cx.length != cy.length) return cx.length < cy.length;
            const auto kx = std::minmax(cx.a, cx.b);
            const auto ky = std::minmax(cy.a, cy.b);
            if (kx != ky) return kx < ky;
            return cx.seq < cy.seq;
        };
        for (std::size_t i = 0; i < chains.size(); ++i) {
            if (!chains[i].alive || chains[i].length >= tau) continue;
            if (pick == std::numeric_limits<std::size_t>::max() || better(i, pick))
                pick = i;
        }
        if (pick == std::numeric_limits<std::size_t>::max()) break;
        changed = true;

        if (chains[pick].a == chains[pick].b) {
            // A short self-loop cannot be contracted, only dropped.
            chains[pick].alive = false;
            continue;
        }

        const NodeId a = chains[pick].a, b = chains[pick].b;
        const NodeId s = std::min(a, b);
        const NodeId gone = std::max(a, b);
        Hub& ha = hubs.at(a);
        Hub& hb = hubs.at(b);

        double wa = 0.0, wb = 0.0;
        for (const auto& ch : chains) {
            if (!ch.alive || ch.seq == chains[pick].seq) continue;
            if (ch.a == a || ch.b == a) wa += ch.length;
            if (ch.a == b || ch.b == b) wb += ch.length;
        }
        if (wa + wb == 0.0) wa = wb = 1.0;
        const Role merged_role =
            (ha.role == Role::Junction || hb.role == Role::Junction)
                ? Role::Junction
                : hubs.at(s).role;
        const Vec3 pa = ha.pos, pb = hb.pos;
        const Vec3 merged{(wa * pa.x + wb * pb.x) / (wa + wb),
                          (wa * pa.y + wb * pb.y) / (wa + wb),
                          (wa * pa.z + wb * pb.z) / (wa + wb)};
        std::vector<NodeId> sources = ha.source_ids;
        sources.insert(sources.end(), hb.source_ids.begin(), hb.source_ids.end());
        for (NodeId m : chains[pick].mids) {
            const auto& mn = *node_of.at(m);
            sources.insert(sources.end(), mn.source_ids.begin(), mn.source_ids.end());
        }
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

        Hub& hs = hubs.at(s);
        hs.role = merged_role;
        hs.pos = merged;
        hs.source_ids = sources;
        hubs.at(gone).alive = false;
        chains[pick].alive = false;

        // Rewire survivors; track what became parallel through the merge.
        std::vector<std::size_t> new_loops;
        std::map<NodeId, std::pair<bool, bool>> touched;  // x -> (via a, via b)
        std::map<NodeId, std::vector<std::size_t>> on_pair;
        for (auto& ch : chains) {
            if (!ch.alive) continue;
            const bool had_a = ch.a == a || ch.b == a;
            const bool had_b = ch.a == b || ch.b == b;
            if (ch.a == a || ch.a == b) ch.a = s;
            if (ch.b == a || ch.b == b) ch.b = s;
            if (had_a && had_b) {
                new_loops.push_back(ch.seq);
                continue;
            }
            if (had_a || had_b) {
                const NodeId x = ch.a == s ? ch.b : ch.a;
                if (x == s) continue;  // pre-existing loop, keep as-is
                auto& t = touched[x];
                if (had_a) t.first = true;
                if (had_b) t.second = true;
                on_pair[x].push_back(ch.seq);
            }
        }

        // Fresh self-loops: drop the short ones, merge survivors into one
        // canonical loop.
        std::vector<std::size_t> kept;
        for (std::size_t sq : new_loops) {
            if (chains[sq].length < tau) chains[sq].alive = false;
            else kept.push_back(sq);
        }
        if (!kept.empty()) {
            double min_len = std::numeric_limits<double>::infinity();
            double wsum = 0.0, lsum = 0.0;
            for (std::size_t sq : kept) {
                min_len = std::min(min_len, chains[sq].length);
                wsum += chains[sq].thickness * chains[sq].length;
                lsum += chains[sq].length;
                chains[sq].alive = false;
            }
            Chain loop;
            loop.a = loop.b = s;
            loop.length = min_len;
            loop.thickness = lsum > 0 ? wsum / lsum : 0.0;
            loop.dirty = true;
            loop.seq = chains.size();
            chains.push_back(std::move(loop));
        }

        // Pairs reachable through both former endpoints became parallel;
        // merge each group into one direct chain.
        for (const auto& [x, flags] : touched) {
            if (!(flags.first && flags.second)) continue;
            const auto& group = on_pair.at(x);
            std::size_t min_sq = group[0];
            double wsum = 0.0, lsum = 0.0;
            for (std::size_t sq : group) {
                if (chains[sq].length < chains[min_sq].length) min_sq = sq;
                wsum += chains[sq].thickness * chains[sq].length;
                lsum += chains[sq].length;
            }
            Chain direct;
            direct.a = s;
            direct.b = x;
            direct.length = chains[min_sq].length;
            direct.thickness = lsum > 0 ? wsum / lsum : 0.0;
            direct.dirty = true;
            direct.skeleton_path = chain_provenance(chains[min_sq]);
            direct.seq = chains.size();
            for (std::size_t sq : group) chains[sq].alive = false;
            chains.push_back(std::move(direct));
        }
    }

    if (!changed) return gs;

    ReducedGraph out;
    out.object_id = gs.object_id;
    out.type = gs.type;

    NodeId next_id = 0;
    for (const auto& n : gs.nodes) next_id = std::max(next_id, n.id + 1);

    for (const auto& [id, hub] : hubs)
        if (hub.alive) out.nodes.push_back({id, hub.role, hub.pos, hub.source_ids});

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < chains.size(); ++i)
        if (chains[i].alive) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto kx = std::minmax(chains[x].a, chains[x].b);
        const auto ky = std::minmax(chains[y].a, chains[y].b);
        if (kx != ky) return kx < ky;
        if (chains[x].length != chains[y].length)
            return chains[x].length < chains[y].length;
        return chains[x].seq < chains[y].seq;
    });

    for (std::size_t ci : order) {
        const Chain& c = chains[ci];
        if (!c.dirty) {
            for (NodeId m : c.mids) out.nodes.push_back(*node_of.at(m));
            std::vector<NodeId> seq_nodes;
            seq_nodes.push_back(c.a);
            seq_nodes.insert(seq_nodes.end(), c.mids.begin(), c.mids.end());
            seq_nodes.push_back(c.b);
            for (std::size_t i = 0; i < c.edges.size(); ++i) {
                ReducedEdge e = c.edges[i];
                e.u = seq_nodes[i];
                e.v = seq_nodes[i + 1];
                if (c.flip[i]) std::reverse(e.skeleton_path.begin(), e.skeleton_path.end());
                out.edges.push_back(std::move(e));
            }
            continue;
        }
        if (c.a == c.b) {
            // Canonical loop form, as produced by reduce_graph.
            const NodeId m1 = next_id++;
            const NodeId m2 = next_id++;
            const Vec3 p = hubs.at(c.a).pos;
            out.nodes.push_back({m1, Role::Mid, p, {}});
            out.nodes.push_back({m2, Role::Mid, p, {}});
            const double w = c.length / 3.0;
            out.edges.push_back({c.a, m1, w, c.thickness, {}});
            out.edges.push_back({m1, m2, w, c.thickness, {}});
            out.edges.push_back({m2, c.b, w, c.thickness, {}});
        } else {
            out.edges.push_back({c.a, c.b, c.length, c.thickness, c.skeleton_path});
        }
    }
    return out;
}

ReducedGraph smooth_degree2(const ReducedGraph& gs) {
    std::map<NodeId, ReducedNode> nodes;
    for (const auto& n : gs.nodes) nodes.emplace(n.id, n);
    std::vector<ReducedEdge> edges = gs.edges;
    std::vector<bool> alive(edges.size(), true);

    auto incident_of = [&](NodeId id) {
        std::vector<std::size_t> inc;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (alive[i] && (edges[i].u == id || edges[i].v == id)) inc.push_back(i);
        return inc;
    };
    auto has_edge = [&](NodeId u, NodeId v) {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (alive[i] && ((edges[i].u == u && edges[i].v == v) ||
                             (edges[i].u == v && edges[i].v == u)))
                return true;
        return false;
    };

    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (auto it = nodes.begin(); it != nodes.end();) {
            ReducedNode& n = it->second;
            if (n.role == Role::Mid || n.role == Role::Anchor) {
                ++it;
                continue;
            }
            const auto inc = incident_of(n.id);
            if (inc.size() != 2) {
                ++it;
                continue;
            }
            const auto& e1 = edges[inc[0]];
            const auto& e2 = edges[inc[1]];
            const NodeId x = e1.u == n.id ? e1.v : e1.u;
            const NodeId y = e2.u == n.id ? e2.v : e2.u;
            if (x == y || has_edge(x, y)) {
                // Fusing would break simplicity; keep the node as a Mid.
                n.role = Role::Mid;
                progressed = true;
                ++it;
                continue;
            }
            ReducedEdge fused;
            fused.u = x;
            fused.v = y;
            fused.length = e1.length + e2.length;
            fused.thickness =
                fused.length > 0
                    ? (e1.thickness * e1.length + e2.thickness * e2.length) / fused.length
                    : 0.0;
            // Provenance joins only when both halves carry it and the walk
            // x -> n -> y lines up.
            auto p1 = e1.skeleton_path;
            auto p2 = e2.skeleton_path;
            if (!p1.empty() && !p2.empty()) {
                if (e1.u != x) std::reverse(p1.begin(), p1.end());
                if (e2.u == y) std::reverse(p2.begin(), p2.end());
                if (p1.back() == p2.front()) {
                    fused.skeleton_path = p1;
                    fused.skeleton_path.insert(fused.skeleton_path.end(), p2.begin() + 1,
                                               p2.end());
                }
            }
            alive[inc[0]] = false;
            alive[inc[1]] = false;
            edges.push_back(std::move(fused));
            alive.push_back(true);
            it = nodes.erase(it);
            progressed = true;
        }
    }

    ReducedGraph out;
    out.object_id = gs.object_id;
    out.type = gs.type;
    for (const auto& [id, n] : nodes) out.nodes.push_back(n);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (alive[i]) out.edges.push_back(edges[i]);

    // Components that lost their last non-Mid node get an Anchor back at
    // their smallest node.
    if (!out.nodes.empty()) {
        auto labels = component_labels(out);
        std::map<std::size_t, NodeId> smallest;
        std::map<std::size_t, bool> has_non_mid;
        for (const auto& n : out.nodes) {
            const auto l = labels.at(n.id);
            if (!smallest.count(l) || n.id < smallest[l]) smallest[l] = n.id;
            if (n.role != Role::Mid) has_non_mid[l] = true;
        }
        for (auto& n : out.nodes) {
            const auto l = labels.at(n.id);
            if (!has_non_mid[l] && n.id == smallest[l]) n.role = Role::Anchor;
        }
    }
    return out;
}

ReducedGraph reduce_pipeline(const SkeletonGraph& g, const ReduceConfig& cfg) {
    ReducedGraph gs = reduce_graph(g, cfg);
    double tau = cfg.tau;
    if (cfg.tau_relative) tau = cfg.tau * total_edge_length(gs);
    if (tau > 0) gs = contract_short_edges(gs, tau);
    if (cfg.smooth_degree2) gs = toponym::smooth_degree2(gs);
    return gs;
}

}  // namespace toponym
