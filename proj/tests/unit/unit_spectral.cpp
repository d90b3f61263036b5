#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "toponym/errors.hpp"
#include "toponym/rng.hpp"
#include "toponym/spectral.hpp"
#include "toponym/synth.hpp"

using namespace toponym;

namespace {

ReducedGraph rg(int n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                double length = 1.0) {
    ReducedGraph g;
    g.object_id = "t";
    for (NodeId i = 0; i < n; ++i)
        g.nodes.push_back({i, Role::Endpoint, {double(i), 0, 0}, {i}});
    for (const auto& [u, v] : edges) g.edges.push_back({u, v, length, 1.0, {}});
    return g;
}

ReducedGraph relabel(const ReducedGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<NodeId> ids;
    for (const auto& n : g.nodes) ids.push_back(n.id);
    std::vector<NodeId> shuffled = ids;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
    std::map<NodeId, NodeId> to;
    for (std::size_t i = 0; i < ids.size(); ++i) to[ids[i]] = shuffled[i];
    ReducedGraph out = g;
    for (auto& n : out.nodes) n.id = to.at(n.id);
    for (auto& e : out.edges) {
        e.u = to.at(e.u);
        e.v = to.at(e.v);
    }
    return out;
}

Eigen::MatrixXd laplacian_matrix(const ReducedGraph& g) {
    const int n = int(g.nodes.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges) {
        lap(e.u, e.v) -= 1.0;
        lap(e.v, e.u) -= 1.0;
        lap(e.u, e.u) += 1.0;
        lap(e.v, e.v) += 1.0;
    }
    return lap;
}

// Characteristic polynomial coefficients of det(lambda*I - M) via
// Faddeev-LeVerrier: p(l) = l^n + c[n-1] l^(n-1) + ... + c[0].
std::vector<double> char_poly(const Eigen::MatrixXd& m) {
    const int n = int(m.rows());
    std::vector<double> c(n);
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    double ck = 1.0;
    for (int k = 1; k <= n; ++k) {
        mk = m * (mk + ck * id);
        ck = -mk.trace() / k;
        c[n - k] = ck;
    }
    return c;
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 1.0;
    for (int k = int(c.size()) - 1; k >= 0; --k) v = v * x + c[k];
    return v;
}

}  // namespace

TEST_CASE("laplacian spectra of the reference graphs") {
    const auto single = laplacian_eigenvalues(rg(1, {}));
    REQUIRE(single.eigenvalues.size() == 1);
    CHECK(single.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));

    const auto k3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}, {2, 0}}));
    REQUIRE(k3.eigenvalues.size() == 3);
    CHECK(k3.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(k3.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(k3.eigenvalues[2] == doctest::Approx(0.0).epsilon(1e-9));

    const auto p3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}}));
    REQUIRE(p3.eigenvalues.size() == 3);
    CHECK(p3.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(p3.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p3.eigenvalues[2] == doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(laplacian_eigenvalues(rg(0, {})), ValidationError);
}

TEST_CASE("weighted laplacian uses edge lengths") {
    const auto unweighted = laplacian_eigenvalues(rg(2, {{0, 1}}, 2.0), false);
    CHECK(unweighted.eigenvalues[0] == doctest::Approx(2.0));
    const auto weighted = laplacian_eigenvalues(rg(2, {{0, 1}}, 2.0), true);
    CHECK(weighted.eigenvalues[0] == doctest::Approx(4.0));
    CHECK(weighted.eigenvalues[1] == doctest::Approx(0.0));
}

TEST_CASE("spectrum cosine") {
    const auto k3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}, {2, 0}}));
    const auto p3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}}));
    CHECK(spectrum_cosine(k3, k3) == doctest::Approx(1.0));
    CHECK(spectrum_cosine(k3, p3) == doctest::Approx(0.8944271910).epsilon(1e-6));
    CHECK(spectrum_cosine(p3, k3) == spectrum_cosine(k3, p3));

    Spectrum a{{2.0, 0.0}};
    Spectrum b{{2.0, 0.0, 0.0}};
    CHECK(spectrum_cosine(a, b) == doctest::Approx(1.0));

    Spectrum zero2{{0.0, 0.0}};
    Spectrum zero1{{0.0}};
    CHECK(spectrum_cosine(zero2, zero1) == 1.0);
    CHECK(spectrum_cosine(zero2, a) == 0.0);
}

TEST_CASE("accuracy thresholding") {
    const auto k3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}, {2, 0}}));
    const auto p3 = laplacian_eigenvalues(rg(3, {{0, 1}, {1, 2}}));
    CHECK(accuracy({{k3, k3}, {p3, p3}}) == doctest::Approx(1.0));
    CHECK(accuracy({{k3, p3}}) == doctest::Approx(0.0));
    CHECK(accuracy({{k3, k3}, {k3, p3}}) == doctest::Approx(0.5));
    CHECK(accuracy({{k3, p3}}, 0.85) == doctest::Approx(1.0));
    CHECK_THROWS_AS(accuracy({}), ValidationError);
}

TEST_CASE("eigenvalue sum equals twice the edge count") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = random_reduced_tree(9, seed);
        const auto s = laplacian_eigenvalues(t);
        double sum = 0.0;
        for (double v : s.eigenvalues) sum += v;
        CHECK(sum == doctest::Approx(2.0 * double(t.edges.size())).epsilon(1e-8));
    }
}

TEST_CASE("spectrum is invariant under relabeling") {
    const auto g = rg(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}});
    const auto base = laplacian_eigenvalues(g);
    for (std::uint64_t r = 1; r <= 8; ++r) {
        const auto s = laplacian_eigenvalues(relabel(g, r));
        REQUIRE(s.eigenvalues.size() == base.eigenvalues.size());
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
            CHECK(s.eigenvalues[i] == doctest::Approx(base.eigenvalues[i]).epsilon(1e-9));
    }
}

TEST_CASE("jacobi matches the characteristic polynomial on all tiny graphs") {
    for (int n = 1; n <= 4; ++n) {
        std::vector<std::pair<NodeId, NodeId>> all_edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) all_edges.push_back({u, v});
        const int m = int(all_edges.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
            std::vector<std::pair<NodeId, NodeId>> edges;
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) edges.push_back(all_edges[i]);
            const auto g = rg(n, edges);
            const auto lap = laplacian_matrix(g);
            const auto spec = laplacian_eigenvalues(g);
            const auto poly = char_poly(lap);
            double power_sum[5] = {0, 0, 0, 0, 0};
            for (double v : spec.eigenvalues)
                for (int k = 1; k <= n; ++k) power_sum[k] += std::pow(v, k);
            Eigen::MatrixXd lk = Eigen::MatrixXd::Identity(n, n);
            for (int k = 1; k <= n; ++k) {
                lk = lk * lap;
                CHECK(power_sum[k] == doctest::Approx(lk.trace()).epsilon(1e-8));
            }
            for (double v : spec.eigenvalues)
                CHECK(std::abs(poly_eval(poly, v)) < 1e-6);
        }
    }
}
