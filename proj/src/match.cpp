#include "toponym/match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "toponym/errors.hpp"
#include "toponym/rng.hpp"

namespace toponym {

Assignment hungarian(const Eigen::MatrixXd& cost) {
    const int rows = int(cost.rows());
    const int cols = int(cost.cols());
    Assignment out;
    if (rows == 0 || cols == 0) return out;

    const int n = std::max(rows, cols);
    const double pad = cost.maxCoeff();
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, pad);
    a.topLeftCorner(rows, cols) = cost;

    // Potentials method, O(n^3). p[j] is the row matched to column j,
    // 1-based with 0 as the virtual start column.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(n) + 1, 0.0);
    std::vector<int> p(std::size_t(n) + 1, 0), way(std::size_t(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(std::size_t(n) + 1, inf);
        std::vector<char> used(std::size_t(n) + 1, 0);
        do {
            used[std::size_t(j0)] = 1;
            const int i0 = p[std::size_t(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[std::size_t(j)]) continue;
                const double cur = a(i0 - 1, j - 1) - u[std::size_t(i0)] - v[std::size_t(j)];
                if (cur < minv[std::size_t(j)]) {
                    minv[std::size_t(j)] = cur;
                    way[std::size_t(j)] = j0;
                }
                if (minv[std::size_t(j)] < delta) {
                    delta = minv[std::size_t(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[std::size_t(j)]) {
                    u[std::size_t(p[std::size_t(j)])] += delta;
                    v[std::size_t(j)] -= delta;
                } else {
                    minv[std::size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[std::size_t(j0)] != 0);
        do {
            const int j1 = way[std::size_t(j0)];
            p[std::size_t(j0)] = p[std::size_t(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::pair<int, int>> pairs;
    for (int j = 1; j <= n; ++j) {
        const int i = p[std::size_t(j)];
        if (i >= 1 && i <= rows && j <= cols) pairs.push_back({i - 1, j - 1});
    }
    std::sort(pairs.begin(), pairs.end());
    out.pairs = pairs;
    for (const auto& [i, j] : pairs) out.total += cost(i, j);
    return out;
}

double graph_similarity(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb) {
    if (za.rows() == 0 || zb.rows() == 0)
        throw_validation("EmptyEmbedding", "similarity needs non-empty embeddings");
    Eigen::MatrixXd cost(za.rows(), zb.rows());
    for (Eigen::Index i = 0; i < za.rows(); ++i)
        for (Eigen::Index j = 0; j < zb.rows(); ++j)
            cost(i, j) = (za.row(i) - zb.row(j)).norm();
    const Assignment asg = hungarian(cost);
    // Re-total over value-sorted matched distances so the result is exactly
    // symmetric in the argument order.
    std::vector<double> dists;
    dists.reserve(asg.pairs.size());
    for (const auto& [i, j] : asg.pairs) dists.push_back(cost(i, j));
    std::sort(dists.begin(), dists.end());
    double total = 0.0;
    for (double d : dists) total += d;
    return total / double(std::min(za.rows(), zb.rows()));
}

std::vector<RetrievalHit> retrieve(const ReducedGraph& query,
                                   const std::vector<ReducedGraph>& corpus,
                                   const EmbedModel& model, int topk) {
    if (corpus.empty()) throw_validation("EmptyCorpus", "retrieve needs a corpus");
    if (topk < 1) throw_validation("InvalidTopK", "topk must be at least 1");
    const Eigen::MatrixXd zq = embed_nodes(model, query);
    std::vector<RetrievalHit> hits;
    for (const auto& g : corpus) {
        if (g.object_id == query.object_id) continue;
        hits.push_back({g.object_id, graph_similarity(zq, embed_nodes(model, g))});
    }
    std::sort(hits.begin(), hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
        return a.score != b.score ? a.score < b.score : a.object_id < b.object_id;
    });
    if (int(hits.size()) > topk) hits.resize(std::size_t(topk));
    return hits;
}

namespace {

double squared_dist(const Eigen::MatrixXd& points, Eigen::Index p,
                    const Eigen::MatrixXd& centroids, Eigen::Index c) {
    return (points.row(p) - centroids.row(c)).squaredNorm();
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int max_iter) {
    const Eigen::Index m = points.rows();
    if (k < 1 || m < k) throw_validation("TooFewPoints", "need at least k points");

    Rng rng(seed);
    KmeansResult res;
    res.centroids.resize(k, points.cols());

    // k-means++ seeding.
    res.centroids.row(0) = points.row(Eigen::Index(rng.uniform_index(std::size_t(m))));
    Eigen::VectorXd best_d2 = Eigen::VectorXd::Constant(m, 0.0);
    for (Eigen::Index p = 0; p < m; ++p) best_d2(p) = squared_dist(points, p, res.centroids, 0);
    for (int c = 1; c < k; ++c) {
        const double sum = best_d2.sum();
        Eigen::Index chosen = 0;
        if (sum > 0.0) {
            double r = rng.uniform(0.0, sum);
            for (Eigen::Index p = 0; p < m; ++p) {
                r -= best_d2(p);
                if (r <= 0.0) {
                    chosen = p;
                    break;
                }
            }
        } else {
            chosen = Eigen::Index(rng.uniform_index(std::size_t(m)));
        }
        res.centroids.row(c) = points.row(chosen);
        for (Eigen::Index p = 0; p < m; ++p)
            best_d2(p) = std::min(best_d2(p), squared_dist(points, p, res.centroids, c));
    }

    std::vector<int> labels(std::size_t(m), 0);
    auto assign = [&] {
        for (Eigen::Index p = 0; p < m; ++p) {
            int best = 0;
            double bd = squared_dist(points, p, res.centroids, 0);
            for (int c = 1; c < k; ++c) {
                const double d = squared_dist(points, p, res.centroids, c);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            labels[std::size_t(p)] = best;
        }
    };

    assign();
    for (int iter = 0; iter < max_iter; ++iter) {
        // Means.
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(std::size_t(k), 0);
        for (Eigen::Index p = 0; p < m; ++p) {
            sums.row(labels[std::size_t(p)]) += points.row(p);
            ++counts[std::size_t(labels[std::size_t(p)])];
        }
        for (int c = 0; c < k; ++c)
            if (counts[std::size_t(c)] > 0)
                res.centroids.row(c) = sums.row(c) / double(counts[std::size_t(c)]);
        // Reseed empty clusters with the point farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (counts[std::size_t(c)] > 0) continue;
            Eigen::Index far = 0;
            double fd = -1.0;
            for (Eigen::Index p = 0; p < m; ++p) {
                const double d = squared_dist(points, p, res.centroids, labels[std::size_t(p)]);
                if (d > fd) {
                    fd = d;
                    far = p;
                }
            }
            res.centroids.row(c) = points.row(far);
            labels[std::size_t(far)] = c;
            counts[std::size_t(c)] = 1;
        }
        const std::vector<int> before = labels;
        assign();
        if (labels == before) break;
    }

    res.labels = labels;
    res.inertia = 0.0;
    for (Eigen::Index p = 0; p < m; ++p)
        res.inertia += squared_dist(points, p, res.centroids, labels[std::size_t(p)]);
    return res;
}

Dictionary build_dictionary(const std::vector<ReducedGraph>& corpus,
                            const EmbedModel& model, int k, std::uint64_t seed) {
    if (k <= 0) {
        const ObjectType t = corpus.empty() ? ObjectType::Other : corpus.front().type;
        k = t == ObjectType::Mitochondrion ? 100 : 50;
    }
    std::vector<Eigen::RowVectorXd> rows;
    for (const auto& g : corpus) {
        const Eigen::MatrixXd emb = embed_nodes(model, g);
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].role == Role::Junction) rows.push_back(emb.row(Eigen::Index(i)));
    }
    if (int(rows.size()) < k)
        throw_validation("TooFewJunctions",
                         "corpus has " + std::to_string(rows.size()) +
                             " junctions, need at least " + std::to_string(k));
    Eigen::MatrixXd points(Eigen::Index(rows.size()), kLatentDim);
    for (std::size_t i = 0; i < rows.size(); ++i) points.row(Eigen::Index(i)) = rows[i];

    Dictionary d;
    d.centroids = kmeans(points, k, seed).centroids;
    d.k = k;
    d.source = corpus.empty() ? "" : corpus.front().object_id;
    return d;
}

Decomposition decompose(const ReducedGraph& query, const Dictionary& dict,
                        const EmbedModel& model) {
    if (dict.k < 1 || dict.centroids.rows() != dict.k)
        throw_validation("InvalidDictionary", "dictionary centroids do not match k");
    const Eigen::MatrixXd emb = embed_nodes(model, query);
    if (dict.centroids.cols() != emb.cols())
        throw_validation("DimensionMismatch", "dictionary and embedding widths differ");

    std::map<NodeId, std::size_t> row_of;
    std::map<NodeId, Role> role_of;
    for (std::size_t i = 0; i < query.nodes.size(); ++i) {
        row_of[query.nodes[i].id] = i;
        role_of[query.nodes[i].id] = query.nodes[i].role;
    }
    std::map<NodeId, std::set<NodeId>> adj;
    for (const auto& e : query.edges) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }

    std::set<NodeId> remaining;
    for (const auto& node : query.nodes) remaining.insert(node.id);

    Decomposition out;
    for (;;) {
        NodeId pick = -1;
        int word = 0;
        double best = std::numeric_limits<double>::infinity();
        for (NodeId id : remaining) {
            if (role_of.at(id) != Role::Junction) continue;
            const Eigen::RowVectorXd row = emb.row(Eigen::Index(row_of.at(id)));
            int nearest = 0;
            double nd = (row - dict.centroids.row(0)).norm();
            for (int c = 1; c < dict.k; ++c) {
                const double d = (row - dict.centroids.row(c)).norm();
                if (d < nd) {
                    nd = d;
                    nearest = c;
                }
            }
            if (nd < best) {
                best = nd;
                pick = id;
                word = nearest;
            }
        }
        if (pick < 0) break;

        DecompPart part;
        part.word_index = word;
        part.junction_id = pick;
        part.removed_node_ids.push_back(pick);
        if (auto it = adj.find(pick); it != adj.end())
            for (NodeId nb : it->second)
                if (remaining.count(nb) && role_of.at(nb) != Role::Junction)
                    part.removed_node_ids.push_back(nb);
        std::sort(part.removed_node_ids.begin(), part.removed_node_ids.end());
        for (NodeId id : part.removed_node_ids) remaining.erase(id);
        out.parts.push_back(std::move(part));
    }
    return out;
}

nlohmann::ordered_json dictionary_to_json(const Dictionary& d) {
    nlohmann::ordered_json j;
    j["schema"] = "toponym-dictionary/1";
    j["k"] = d.k;
    j["source"] = d.source;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < d.centroids.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < d.centroids.cols(); ++c) row.push_back(d.centroids(i, c));
        rows.push_back(std::move(row));
    }
    j["centroids"] = rows;
    return j;
}

Dictionary dictionary_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("centroids"))
        throw_validation("MalformedDocument", "dictionary document is incomplete");
    Dictionary d;
    d.k = j.at("k").get<int>();
    if (j.contains("source")) d.source = j.at("source").get<std::string>();
    const auto& rows = j.at("centroids");
    if (!rows.is_array() || int(rows.size()) != d.k || d.k < 1)
        throw_validation("MalformedDocument", "centroid rows do not match k");
    const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
    if (cols == 0) throw_validation("MalformedDocument", "empty centroid row");
    d.centroids.resize(d.k, Eigen::Index(cols));
    for (int i = 0; i < d.k; ++i) {
        const auto& row = rows[std::size_t(i)];
        if (!row.is_array() || row.size() != cols)
            throw_validation("MalformedDocument", "ragged centroid rows");
        for (std::size_t c = 0; c < cols; ++c)
            d.centroids(i, Eigen::Index(c)) = row[c].get<double>();
    }
    return d;
}

}  // namespace toponym
