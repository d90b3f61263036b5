#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "toponym/types.hpp"

namespace toponym {

inline constexpr int kFeatureDim = 8;
inline constexpr int kHiddenDim = 32;
inline constexpr int kLatentDim = 16;

struct EmbedHyper {
    double lr = 0.01;
    int epochs = 200;
    std::uint64_t seed = 1;
    double kl_weight = 1.0;
};

struct EmbedModel {
    Eigen::MatrixXd w0;       // 8 x 32
    Eigen::MatrixXd w_mu;     // 32 x 16
    Eigen::MatrixXd w_sigma;  // 32 x 16
    Eigen::MatrixXd w_fc;     // 16 x 16
    EmbedHyper hyper;
};

// Symmetric uniform fan-based (Glorot) initialization from the seed.
EmbedModel init_model(const EmbedHyper& hyper);

// Per node: one-hot of clamp(degree, 1..6), junction flag, constant bias.
// Rows follow the graph's node order.
Eigen::MatrixXd node_features(const ReducedGraph& gs);

// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
Eigen::MatrixXd normalize_adjacency(const ReducedGraph& gs);

// Binary adjacency plus identity, the reconstruction target.
Eigen::MatrixXd adjacency_target(const ReducedGraph& gs);

struct Forward {
    Eigen::MatrixXd mu;         // n x 16
    Eigen::MatrixXd log_sigma;  // n x 16, clamped to [-10, 10]
    Eigen::MatrixXd z;          // n x 16
    Eigen::MatrixXd recon;      // n x n
    // Intermediates kept for backprop.
    Eigen::MatrixXd a_hat, x, u, h, zp;
    Eigen::MatrixXd clamp_gate;  // 1 where the clamp was inactive
};

// H = ReLU(A_hat X w0); mu = A_hat H w_mu; log_sigma = A_hat H w_sigma;
// z = mu + exp(log_sigma) .* noise; z' = z w_fc; recon = logistic(z' z'^T).
Forward forward(const EmbedModel& m, const ReducedGraph& gs, const Eigen::MatrixXd& noise);

struct LossParts {
    double total = 0.0;
    double bce = 0.0;
    double kl = 0.0;
};

// bce: positive-class-weighted cross-entropy against T = A + I, averaged
// over the n^2 entries, w_pos = (n^2 - nnz(T)) / nnz(T).
// kl: (1/n) sum of 0.5 (exp(2 log_sigma) + mu^2 - 1 - 2 log_sigma).
LossParts loss(const EmbedModel& m, const ReducedGraph& gs, const Eigen::MatrixXd& noise);

struct Gradients {
    Eigen::MatrixXd w0, w_mu, w_sigma, w_fc;
};

Gradients gradients(const EmbedModel& m, const ReducedGraph& gs, const Eigen::MatrixXd& noise);

struct TrainResult {
    EmbedModel model;
    std::vector<double> epoch_mean_loss;
    std::vector<double> epoch_mean_kl;
};

// One Adam step per graph per epoch, fresh noise per step, all randomness
// from hyper.seed. Throws ValidationError("EmptyCorpus").
TrainResult train(const std::vector<ReducedGraph>& corpus, const EmbedHyper& hyper);

// Posterior means with zeros noise; rows follow node order.
Eigen::MatrixXd embed_nodes(const EmbedModel& m, const ReducedGraph& gs);

nlohmann::ordered_json model_to_json(const EmbedModel& m);
EmbedModel model_from_json(const nlohmann::ordered_json& j);

}  // namespace toponym
