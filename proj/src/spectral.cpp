#include "toponym/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "toponym/errors.hpp"

namespace toponym {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol) {
    const Eigen::Index n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};

    // Cyclic sweeps: rotate away each off-diagonal pair in turn.
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) >= tol; ++sweep) {
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
    return eig;
}

Spectrum laplacian_eigenvalues(const ReducedGraph& g, bool weighted) {
    if (g.nodes.empty()) throw_validation("EmptyGraph", "graph has no nodes");
    std::map<NodeId, Eigen::Index> index;
    for (const auto& n : g.nodes) index[n.id];
    Eigen::Index next = 0;
    for (auto& [id, ix] : index) ix = next++;

    const Eigen::Index n = Eigen::Index(g.nodes.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges) {
        const Eigen::Index i = index.at(e.u);
        const Eigen::Index j = index.at(e.v);
        const double w = weighted ? e.length : 1.0;
        lap(i, j) -= w;
        lap(j, i) -= w;
        lap(i, i) += w;
        lap(j, j) += w;
    }

    Spectrum s;
    s.eigenvalues = jacobi_eigenvalues(std::move(lap));
    for (double& v : s.eigenvalues) v = std::max(v, 0.0);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

double spectrum_cosine(const Spectrum& s1, const Spectrum& s2) {
    const std::size_t n = std::max(s1.eigenvalues.size(), s2.eigenvalues.size());
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < s1.eigenvalues.size() ? s1.eigenvalues[i] : 0.0;
        const double b = i < s2.eigenvalues.size() ? s2.eigenvalues[i] : 0.0;
        dot += a * b;
        n1 += a * a;
        n2 += b * b;
    }
    if (n1 == 0.0 && n2 == 0.0) return 1.0;
    if (n1 == 0.0 || n2 == 0.0) return 0.0;
    return std::min(1.0, dot / (std::sqrt(n1) * std::sqrt(n2)));
}

double accuracy(const std::vector<std::pair<Spectrum, Spectrum>>& pairs,
                double threshold) {
    if (pairs.empty()) throw_validation("EmptyList", "accuracy needs at least one pair");
    std::size_t hits = 0;
    for (const auto& [a, b] : pairs)
        if (spectrum_cosine(a, b) >= threshold) ++hits;
    return double(hits) / double(pairs.size());
}

}  // namespace toponym
