#include "toponym/embed.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "toponym/errors.hpp"
#include "toponym/rng.hpp"
#include "toponym/topology.hpp"

namespace toponym {

namespace {

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / double(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-limit, limit);
    return w;
}

void check_model_dims(const EmbedModel& m) {
    if (m.w0.rows() != kFeatureDim || m.w0.cols() != kHiddenDim ||
        m.w_mu.rows() != kHiddenDim || m.w_mu.cols() != kLatentDim ||
        m.w_sigma.rows() != kHiddenDim || m.w_sigma.cols() != kLatentDim ||
        m.w_fc.rows() != kLatentDim || m.w_fc.cols() != kLatentDim)
        throw_validation("DimensionMismatch", "model weight shapes are wrong");
}

std::unordered_map<NodeId, Eigen::Index> row_index(const ReducedGraph& gs) {
    std::unordered_map<NodeId, Eigen::Index> ix;
    ix.reserve(gs.nodes.size());
    for (std::size_t i = 0; i < gs.nodes.size(); ++i)
        ix[gs.nodes[i].id] = Eigen::Index(i);
    return ix;
}

}  // namespace

EmbedModel init_model(const EmbedHyper& hyper) {
    Rng rng(hyper.seed);
    EmbedModel m;
    m.w0 = glorot(kFeatureDim, kHiddenDim, rng);
    m.w_mu = glorot(kHiddenDim, kLatentDim, rng);
    m.w_sigma = glorot(kHiddenDim, kLatentDim, rng);
    m.w_fc = glorot(kLatentDim, kLatentDim, rng);
    m.hyper = hyper;
    return m;
}

Eigen::MatrixXd node_features(const ReducedGraph& gs) {
    const Eigen::Index n = Eigen::Index(gs.nodes.size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, kFeatureDim);
    std::unordered_map<NodeId, int> deg;
    for (const auto& node : gs.nodes) deg[node.id] = 0;
    for (const auto& e : gs.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& node = gs.nodes[std::size_t(i)];
        const int slot = std::clamp(deg.at(node.id), 1, 6);
        x(i, slot - 1) = 1.0;
        x(i, 6) = node.role == Role::Junction ? 1.0 : 0.0;
        x(i, 7) = 1.0;
    }
    return x;
}

Eigen::MatrixXd normalize_adjacency(const ReducedGraph& gs) {
    const Eigen::Index n = Eigen::Index(gs.nodes.size());
    const auto ix = row_index(gs);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (const auto& e : gs.edges) {
        a(ix.at(e.u), ix.at(e.v)) = 1.0;
        a(ix.at(e.v), ix.at(e.u)) = 1.0;
    }
    Eigen::VectorXd dinv = a.rowwise().sum().cwiseSqrt().cwiseInverse();
    return dinv.asDiagonal() * a * dinv.asDiagonal();
}

Eigen::MatrixXd adjacency_target(const ReducedGraph& gs) {
    const Eigen::Index n = Eigen::Index(gs.nodes.size());
    const auto ix = row_index(gs);
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
    for (const auto& e : gs.edges) {
        t(ix.at(e.u), ix.at(e.v)) = 1.0;
        t(ix.at(e.v), ix.at(e.u)) = 1.0;
    }
    return t;
}

Forward forward(const EmbedModel& m, const ReducedGraph& gs, const Eigen::MatrixXd& noise) {
    check_model_dims(m);
    const Eigen::Index n = Eigen::Index(gs.nodes.size());
    if (n == 0) throw_validation("EmptyGraph", "cannot embed an empty graph");
    if (noise.rows() != n || noise.cols() != kLatentDim)
        throw_validation("DimensionMismatch", "noise must be n x 16");

    Forward f;
    f.a_hat = normalize_adjacency(gs);
    f.x = node_features(gs);
    f.u = f.a_hat * f.x;                                 // n x 8
    f.h = (f.u * m.w0).cwiseMax(0.0);                    // n x 32
    const Eigen::MatrixXd q = f.a_hat * f.h;             // n x 32
    f.mu = q * m.w_mu;                                   // n x 16
    const Eigen::MatrixXd s_raw = q * m.w_sigma;         // n x 16
    f.clamp_gate = (s_raw.array().abs() < 10.0).cast<double>();
    f.log_sigma = s_raw.cwiseMax(-10.0).cwiseMin(10.0);
    f.z = f.mu + f.log_sigma.array().exp().matrix().cwiseProduct(noise);
    f.zp = f.z * m.w_fc;                                 // n x 16
    f.recon = (1.0 / (1.0 + (-(f.zp * f.zp.transpose()).array()).exp())).matrix();
    return f;
}

namespace {

struct LossContext {
    Forward f;
    Eigen::MatrixXd target;
    double w_pos = 1.0;
    LossParts parts;
};

LossContext loss_context(const EmbedModel& m, const ReducedGraph& gs,
                         const Eigen::MatrixXd& noise) {
    LossContext ctx;
    ctx.f = forward(m, gs, noise);
    ctx.target = adjacency_target(gs);
    const double n = double(gs.nodes.size());
    const double nnz = ctx.target.sum();
    ctx.w_pos = (n * n - nnz) / nnz;

    // Evaluate the cross-entropy from logits: -log sigma(y) = softplus(-y) and
    // -log(1 - sigma(y)) = softplus(y), which stays finite when recon saturates.
    const Eigen::MatrixXd y = ctx.f.zp * ctx.f.zp.transpose();
    const auto softplus = [](double v) {
        return std::log1p(std::exp(-std::abs(v))) + std::max(v, 0.0);
    };
    const auto t = ctx.target.array();
    ctx.parts.bce = (ctx.w_pos * t * y.array().unaryExpr([&](double v) {
                                         return softplus(-v);
                                     }) +
                     (1.0 - t) * y.array().unaryExpr(softplus))
                        .sum() /
                    (n * n);
    const auto s = ctx.f.log_sigma.array();
    const auto mu = ctx.f.mu.array();
    ctx.parts.kl = (0.5 * ((2.0 * s).exp() + mu.square() - 1.0 - 2.0 * s)).sum() / n;
    ctx.parts.total = ctx.parts.bce + m.hyper.kl_weight * ctx.parts.kl;
    return ctx;
}

}  // namespace

LossParts loss(const EmbedModel& m, const ReducedGraph& gs, const Eigen::MatrixXd& noise) {
    return loss_context(m, gs, noise).parts;
}

Gradients gradients(const EmbedModel& m, const ReducedGraph& gs,
                    const Eigen::MatrixXd& noise) {
    const LossContext ctx = loss_context(m, gs, noise);
    const Forward& f = ctx.f;
    const double n = double(gs.nodes.size());
    const double lambda = m.hyper.kl_weight;

    // d bce / d (zp zp^T): (1/n^2) [(1-T) .* R - w_pos T .* (1-R)].
    const Eigen::MatrixXd gy =
        (((1.0 - ctx.target.array()) * f.recon.array()) -
         ctx.w_pos * ctx.target.array() * (1.0 - f.recon.array()))
            .matrix() /
        (n * n);
    const Eigen::MatrixXd d_zp = (gy + gy.transpose()) * f.zp;
    const Eigen::MatrixXd d_z = d_zp * m.w_fc.transpose();

    const Eigen::MatrixXd sigma = f.log_sigma.array().exp().matrix();
    const Eigen::MatrixXd d_mu = d_z + (lambda / n) * f.mu;
    const Eigen::MatrixXd d_s =
        (d_z.cwiseProduct(noise).cwiseProduct(sigma) +
         (lambda / n) * ((2.0 * f.log_sigma.array()).exp() - 1.0).matrix())
            .cwiseProduct(f.clamp_gate);

    const Eigen::MatrixXd q = f.a_hat * f.h;
    const Eigen::MatrixXd d_q = d_mu * m.w_mu.transpose() + d_s * m.w_sigma.transpose();
    const Eigen::MatrixXd d_h = f.a_hat * d_q;  // A_hat symmetric
    const Eigen::MatrixXd relu_gate =
        ((f.u * m.w0).array() > 0.0).cast<double>().matrix();
    const Eigen::MatrixXd d_p = d_h.cwiseProduct(relu_gate);

    Gradients g;
    g.w_fc = f.z.transpose() * d_zp;
    g.w_mu = q.transpose() * d_mu;
    g.w_sigma = q.transpose() * d_s;
    g.w0 = f.u.transpose() * d_p;
    return g;
}

TrainResult train(const std::vector<ReducedGraph>& corpus, const EmbedHyper& hyper) {
    if (corpus.empty()) throw_validation("EmptyCorpus", "train needs at least one graph");

    TrainResult out;
    out.model = init_model(hyper);
    Rng rng(hyper.seed + 0x9e3779b97f4a7c15ull);  // noise stream, distinct from init

    struct AdamState {
        Eigen::MatrixXd m, v;
    };
    auto zero_state = [](const Eigen::MatrixXd& w) {
        return AdamState{Eigen::MatrixXd::Zero(w.rows(), w.cols()),
                         Eigen::MatrixXd::Zero(w.rows(), w.cols())};
    };
    AdamState st0 = zero_state(out.model.w0);
    AdamState st_mu = zero_state(out.model.w_mu);
    AdamState st_sigma = zero_state(out.model.w_sigma);
    AdamState st_fc = zero_state(out.model.w_fc);

    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long t = 0;
    auto step = [&](Eigen::MatrixXd& w, AdamState& st, const Eigen::MatrixXd& g) {
        st.m = b1 * st.m + (1.0 - b1) * g;
        st.v = b2 * st.v + (1.0 - b2) * g.cwiseProduct(g);
        const double bc1 = 1.0 - std::pow(b1, double(t));
        const double bc2 = 1.0 - std::pow(b2, double(t));
        w -= (hyper.lr / bc1) *
             st.m.cwiseQuotient(((st.v / bc2).cwiseSqrt().array() + eps).matrix());
    };

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        double loss_sum = 0.0, kl_sum = 0.0;
        for (const auto& g : corpus) {
            const Eigen::Index n = Eigen::Index(g.nodes.size());
            Eigen::MatrixXd noise(n, kLatentDim);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < kLatentDim; ++j) noise(i, j) = rng.normal();

            const LossParts parts = loss(out.model, g, noise);
            loss_sum += parts.total;
            kl_sum += parts.kl;

            const Gradients grad = gradients(out.model, g, noise);
            ++t;
            step(out.model.w0, st0, grad.w0);
            step(out.model.w_mu, st_mu, grad.w_mu);
            step(out.model.w_sigma, st_sigma, grad.w_sigma);
            step(out.model.w_fc, st_fc, grad.w_fc);
        }
        out.epoch_mean_loss.push_back(loss_sum / double(corpus.size()));
        out.epoch_mean_kl.push_back(kl_sum / double(corpus.size()));
    }
    return out;
}

Eigen::MatrixXd embed_nodes(const EmbedModel& m, const ReducedGraph& gs) {
    const Eigen::Index n = Eigen::Index(gs.nodes.size());
    const Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(n, kLatentDim);
    return forward(m, gs, noise).mu;
}

namespace {

nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& w) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < w.cols(); ++j) row.push_back(w(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::ordered_json& j, Eigen::Index rows,
                                 Eigen::Index cols, const char* name) {
    if (!j.is_array() || Eigen::Index(j.size()) != rows)
        throw_validation("DimensionMismatch", std::string(name) + " has wrong row count");
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[std::size_t(i)];
        if (!row.is_array() || Eigen::Index(row.size()) != cols)
            throw_validation("DimensionMismatch",
                             std::string(name) + " has wrong column count");
        for (Eigen::Index k = 0; k < cols; ++k)
            w(i, k) = row[std::size_t(k)].get<double>();
    }
    return w;
}

}  // namespace

nlohmann::ordered_json model_to_json(const EmbedModel& m) {
    nlohmann::ordered_json j;
    j["schema"] = "toponym-embed-model/1";
    j["dims"] = {{"in", kFeatureDim}, {"hidden", kHiddenDim}, {"latent", kLatentDim}};
    j["hyper"] = {{"lr", m.hyper.lr},
                  {"epochs", m.hyper.epochs},
                  {"seed", m.hyper.seed},
                  {"kl_weight", m.hyper.kl_weight}};
    j["w0"] = matrix_to_json(m.w0);
    j["w_mu"] = matrix_to_json(m.w_mu);
    j["w_sigma"] = matrix_to_json(m.w_sigma);
    j["w_fc"] = matrix_to_json(m.w_fc);
    return j;
}

EmbedModel model_from_json(const nlohmann::ordered_json& j) {
    EmbedModel m;
    if (!j.is_object() || !j.contains("w0") || !j.contains("w_mu") ||
        !j.contains("w_sigma") || !j.contains("w_fc"))
        throw_validation("MalformedDocument", "model document is missing weights");
    if (j.contains("hyper")) {
        const auto& h = j.at("hyper");
        if (h.contains("lr")) m.hyper.lr = h.at("lr").get<double>();
        if (h.contains("epochs")) m.hyper.epochs = h.at("epochs").get<int>();
        if (h.contains("seed")) m.hyper.seed = h.at("seed").get<std::uint64_t>();
        if (h.contains("kl_weight")) m.hyper.kl_weight = h.at("kl_weight").get<double>();
    }
    m.w0 = matrix_from_json(j.at("w0"), kFeatureDim, kHiddenDim, "w0");
    m.w_mu = matrix_from_json(j.at("w_mu"), kHiddenDim, kLatentDim, "w_mu");
    m.w_sigma = matrix_from_json(j.at("w_sigma"), kHiddenDim, kLatentDim, "w_sigma");
    m.w_fc = matrix_from_json(j.at("w_fc"), kLatentDim, kLatentDim, "w_fc");
    check_model_dims(m);
    return m;
}

}  // namespace toponym
