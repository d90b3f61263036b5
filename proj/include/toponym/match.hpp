#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "toponym/embed.hpp"
#include "toponym/types.hpp"

namespace toponym {

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), real cells only
    double total = 0.0;                      // excludes pad cells
};

// Minimum-cost assignment. Rectangular inputs are padded square with the
// max entry before solving.
Assignment hungarian(const Eigen::MatrixXd& cost);

// Hungarian total over pairwise L2 distances, divided by min(n_a, n_b).
// Throws ValidationError("EmptyEmbedding").
double graph_similarity(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zb);

struct RetrievalHit {
    std::string object_id;
    double score = 0.0;
};

// Ascending by score, ties by object_id; the query's own object_id is
// excluded. Throws ValidationError("EmptyCorpus").
std::vector<RetrievalHit> retrieve(const ReducedGraph& query,
                                   const std::vector<ReducedGraph>& corpus,
                                   const EmbedModel& model, int topk);

struct KmeansResult {
    Eigen::MatrixXd centroids;  // k x dim
    std::vector<int> labels;
    double inertia = 0.0;
};

// k-means++ seeding then Lloyd iterations; empty clusters reseeded with the
// point farthest from its centroid. Throws ValidationError("TooFewPoints").
KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int max_iter = 100);

struct Dictionary {
    Eigen::MatrixXd centroids;  // k x 16
    int k = 0;
    std::string source;
};

// Clusters the embeddings of Junction nodes only.
// Throws ValidationError("TooFewJunctions") when they number fewer than k.
Dictionary build_dictionary(const std::vector<ReducedGraph>& corpus,
                            const EmbedModel& model, int k, std::uint64_t seed);

struct DecompPart {
    int word_index = 0;  // nearest centroid
    NodeId junction_id = 0;
    std::vector<NodeId> removed_node_ids;  // sorted
};

struct Decomposition {
    std::vector<DecompPart> parts;
};

// Greedy loop: pick the remaining junction nearest to any centroid, carve
// out the junction plus its remaining non-junction neighbours, repeat.
// Embeddings are computed once on the intact query.
Decomposition decompose(const ReducedGraph& query, const Dictionary& dict,
                        const EmbedModel& model);

nlohmann::ordered_json dictionary_to_json(const Dictionary& d);
Dictionary dictionary_from_json(const nlohmann::ordered_json& j);

}  // namespace toponym
