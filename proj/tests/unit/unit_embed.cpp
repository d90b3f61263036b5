#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "toponym/embed.hpp"
#include "toponym/errors.hpp"
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

EmbedModel zero_model() {
    EmbedModel m;
    m.w0 = Eigen::MatrixXd::Zero(kFeatureDim, kHiddenDim);
    m.w_mu = Eigen::MatrixXd::Zero(kHiddenDim, kLatentDim);
    m.w_sigma = Eigen::MatrixXd::Zero(kHiddenDim, kLatentDim);
    m.w_fc = Eigen::MatrixXd::Zero(kLatentDim, kLatentDim);
    return m;
}

std::vector<ReducedGraph> small_corpus() {
    std::vector<ReducedGraph> corpus;
    for (std::uint64_t s = 0; s < 40; ++s)
        corpus.push_back(random_reduced_tree(4 + int(s % 7), s));
    for (int c = 3; c <= 12; ++c) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId i = 0; i + 1 < c; ++i) edges.push_back({i, i + 1});
        edges.push_back({NodeId(c - 1), 0});
        corpus.push_back(rg(c, edges));
    }
    return corpus;
}

}  // namespace

TEST_CASE("node features encode degree, junction flag, bias") {
    const auto p3 = rg(3, {{0, 1}, {1, 2}});
    const auto x = node_features(p3);
    REQUIRE(x.rows() == 3);
    REQUIRE(x.cols() == 8);
    // Endpoint: degree slot 1, no junction flag, bias.
    CHECK(x(0, 0) == 1.0);
    CHECK(x(0, 6) == 0.0);
    CHECK(x(0, 7) == 1.0);
    CHECK(x.row(0).sum() == 2.0);
    // Middle node: degree slot 2.
    CHECK(x(1, 1) == 1.0);

    const auto star4 = rg(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto xs = node_features(star4);
    CHECK(xs(0, 3) == 1.0);  // degree 4
    CHECK(xs(0, 6) == 1.0);  // junction

    std::vector<std::pair<NodeId, NodeId>> nine;
    for (NodeId i = 1; i <= 9; ++i) nine.push_back({0, i});
    const auto xb = node_features(rg(10, nine));
    CHECK(xb(0, 5) == 1.0);  // degree 9 clamps to slot 6
}

TEST_CASE("normalized adjacency") {
    const auto single = normalize_adjacency(rg(1, {}));
    CHECK(single(0, 0) == doctest::Approx(1.0));

    const auto pair = normalize_adjacency(rg(2, {{0, 1}}));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(pair(i, j) == doctest::Approx(0.5));

    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto g = random_reduced_tree(3 + int(s % 10), s);
        const auto a = normalize_adjacency(g);
        CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("forward pass basics") {
    const auto g = rg(4, {{0, 1}, {1, 2}, {2, 3}});
    const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(4, kLatentDim);

    const auto f0 = forward(zero_model(), g, zeros);
    CHECK(f0.mu.cwiseAbs().maxCoeff() == 0.0);
    CHECK((f0.recon.array() - 0.5).abs().maxCoeff() < 1e-15);

    EmbedHyper hyper;
    hyper.seed = 7;
    const auto m = init_model(hyper);
    const auto f = forward(m, g, zeros);
    CHECK((f.recon - f.recon.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const auto f2 = forward(m, g, zeros);
    CHECK(f.mu == f2.mu);
    CHECK(f.recon == f2.recon);

    CHECK_THROWS_AS(forward(m, g, Eigen::MatrixXd::Zero(3, kLatentDim)),
                    ValidationError);
    auto bad = m;
    bad.w0 = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(forward(bad, g, zeros), ValidationError);
}

TEST_CASE("loss parts") {
    // P3 with zero weights: recon = 0.5 everywhere, mu = 0, log_sigma = 0.
    const auto g = rg(3, {{0, 1}, {1, 2}});
    const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(3, kLatentDim);
    const auto parts = loss(zero_model(), g, zeros);
    CHECK(parts.kl == doctest::Approx(0.0));
    // nnz(T) = 7, w_pos = 2/7; bce = log2 * (w_pos*7 + 2) / 9.
    CHECK(parts.bce == doctest::Approx(std::log(2.0) * 4.0 / 9.0));
    CHECK(parts.total == doctest::Approx(parts.bce + parts.kl));

    // KL is nonnegative for random models and noise.
    EmbedHyper hyper;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        hyper.seed = s;
        const auto m = init_model(hyper);
        Rng rng(s);
        Eigen::MatrixXd noise(3, kLatentDim);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < kLatentDim; ++j) noise(i, j) = rng.normal();
        CHECK(loss(m, g, noise).kl >= 0.0);
    }
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + trial % 6;  // up to 8 nodes
        const auto g = trial % 2 == 0
                           ? random_reduced_tree(n, 50 + trial)
                           : [&] {
                                 std::vector<std::pair<NodeId, NodeId>> edges;
                                 for (NodeId i = 0; i + 1 < n; ++i)
                                     edges.push_back({i, i + 1});
                                 edges.push_back({NodeId(n - 1), 0});
                                 return rg(n, edges);
                             }();
        EmbedHyper hyper;
        hyper.seed = 900 + trial;
        EmbedModel m = init_model(hyper);
        Eigen::MatrixXd noise(g.nodes.size(), kLatentDim);
        for (Eigen::Index i = 0; i < noise.rows(); ++i)
            for (Eigen::Index j = 0; j < noise.cols(); ++j) noise(i, j) = rng.normal();

        const Gradients grad = gradients(m, g, noise);
        const double h = 1e-5;
        auto check_matrix = [&](Eigen::MatrixXd& w, const Eigen::MatrixXd& gw) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) {
                for (Eigen::Index j = 0; j < w.cols(); ++j) {
                    const double keep = w(i, j);
                    w(i, j) = keep + h;
                    const double up = loss(m, g, noise).total;
                    w(i, j) = keep - h;
                    const double dn = loss(m, g, noise).total;
                    w(i, j) = keep;
                    const double numeric = (up - dn) / (2.0 * h);
                    const double analytic = gw(i, j);
                    const double rel = std::abs(analytic - numeric) /
                                       std::max({1e-4, std::abs(analytic),
                                                 std::abs(numeric)});
                    CHECK(rel < 1e-4);
                }
            }
        };
        check_matrix(m.w0, grad.w0);
        check_matrix(m.w_mu, grad.w_mu);
        check_matrix(m.w_sigma, grad.w_sigma);
        check_matrix(m.w_fc, grad.w_fc);
    }
}

TEST_CASE("training dynamics") {
    const auto corpus = small_corpus();
    EmbedHyper hyper;
    hyper.epochs = 60;
    hyper.seed = 1;
    const auto run = train(corpus, hyper);
    REQUIRE(run.epoch_mean_loss.size() == 60);
    CHECK(run.epoch_mean_loss.back() < run.epoch_mean_loss.front());

    const auto rerun = train(corpus, hyper);
    CHECK(run.model.w0 == rerun.model.w0);
    CHECK(run.model.w_mu == rerun.model.w_mu);
    CHECK(run.model.w_sigma == rerun.model.w_sigma);
    CHECK(run.model.w_fc == rerun.model.w_fc);

    EmbedHyper frozen = hyper;
    frozen.lr = 0.0;
    frozen.epochs = 3;
    const auto still = train(corpus, frozen);
    const auto fresh = init_model(frozen);
    CHECK(still.model.w0 == fresh.w0);
    CHECK(still.model.w_fc == fresh.w_fc);

    CHECK_THROWS_AS(train({}, hyper), ValidationError);
}

TEST_CASE("reconstruction beats chance after training") {
    // Mid-size trees: big enough that structurally equivalent nodes (whose
    // embeddings tie by symmetry) no longer dominate the pair count, small
    // enough that two convolution hops see most of the graph. A small KL
    // weight keeps the regularizer active without crushing the posterior
    // means before the reconstruction term has learned anything.
    std::vector<ReducedGraph> corpus;
    Rng pick(99);
    for (std::uint64_t s = 0; s < 50; ++s)
        corpus.push_back(random_reduced_tree(10 + int(pick.uniform_index(11)), s));
    EmbedHyper hyper;
    hyper.epochs = 200;
    hyper.seed = 2;
    hyper.kl_weight = 0.005;
    const auto run = train(corpus, hyper);

    double auc_sum = 0.0;
    for (const auto& g : corpus) {
        const Eigen::Index n = Eigen::Index(g.nodes.size());
        const auto f = forward(run.model, g, Eigen::MatrixXd::Zero(n, kLatentDim));
        const auto t = adjacency_target(g);
        // Mann-Whitney AUC over all entries.
        std::vector<double> pos, neg;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                (t(i, j) > 0.5 ? pos : neg).push_back(f.recon(i, j));
        if (neg.empty()) continue;
        double wins = 0.0;
        for (double p : pos)
            for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
        auc_sum += wins / (double(pos.size()) * double(neg.size()));
    }
    CHECK(auc_sum / double(corpus.size()) > 0.8);
}

TEST_CASE("embeddings are permutation-equivariant") {
    const auto g = rg(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}});
    EmbedHyper hyper;
    hyper.seed = 9;
    const auto m = init_model(hyper);
    const auto base = embed_nodes(m, g);

    // Relabel ids and also shuffle node order.
    const std::vector<NodeId> to = {4, 0, 3, 5, 2, 1};  // old id -> new id
    ReducedGraph g2;
    g2.object_id = g.object_id;
    for (const auto& node : g.nodes) {
        auto copy = node;
        copy.id = to[std::size_t(node.id)];
        copy.source_ids = {copy.id};
        g2.nodes.push_back(copy);
    }
    std::sort(g2.nodes.begin(), g2.nodes.end(),
              [](const ReducedNode& a, const ReducedNode& b) { return a.id < b.id; });
    for (const auto& e : g.edges)
        g2.edges.push_back({to[std::size_t(e.u)], to[std::size_t(e.v)], e.length,
                            e.thickness, {}});
    const auto emb2 = embed_nodes(m, g2);

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const NodeId new_id = to[std::size_t(g.nodes[i].id)];
        std::size_t row2 = 0;
        for (std::size_t k = 0; k < g2.nodes.size(); ++k)
            if (g2.nodes[k].id == new_id) row2 = k;
        CHECK((base.row(Eigen::Index(i)) - emb2.row(Eigen::Index(row2)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-9);
    }

    CHECK(embed_nodes(zero_model(), g).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vertex-transitive graphs embed symmetrically") {
    const auto k3 = rg(3, {{0, 1}, {1, 2}, {2, 0}});
    EmbedHyper hyper;
    hyper.epochs = 25;
    hyper.seed = 3;
    const auto run = train({k3}, hyper);
    const auto emb = embed_nodes(run.model, k3);
    CHECK((emb.row(0) - emb.row(1)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((emb.row(1) - emb.row(2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("model serialization round-trips") {
    EmbedHyper hyper;
    hyper.seed = 17;
    hyper.lr = 0.005;
    const auto m = init_model(hyper);
    const auto j = model_to_json(m);
    const auto back = model_from_json(j);
    CHECK(back.w0 == m.w0);
    CHECK(back.w_mu == m.w_mu);
    CHECK(back.w_sigma == m.w_sigma);
    CHECK(back.w_fc == m.w_fc);
    CHECK(back.hyper.lr == m.hyper.lr);
    CHECK(back.hyper.seed == m.hyper.seed);

    CHECK_THROWS_AS(model_from_json(nlohmann::ordered_json::object()), ValidationError);
}
