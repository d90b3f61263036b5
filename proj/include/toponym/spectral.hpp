#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "toponym/types.hpp"

namespace toponym {

struct Spectrum {
    std::vector<double> eigenvalues;  // sorted descending, clamped at 0
};

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, sweeping
// until the off-diagonal Frobenius norm drops below `tol`. Unsorted.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-10);

// Spectrum of L = D - A. Unweighted by default; `weighted` uses edge lengths
// as adjacency weights. Throws ValidationError("EmptyGraph") on 0 nodes.
Spectrum laplacian_eigenvalues(const ReducedGraph& g, bool weighted = false);

// Cosine of the two spectra after zero-padding the shorter one. Two all-zero
// spectra compare as 1.0; one all-zero against a nonzero one as 0.0.
double spectrum_cosine(const Spectrum& s1, const Spectrum& s2);

// Fraction of pairs with cosine >= threshold.
// Throws ValidationError("EmptyList") on an empty list.
double accuracy(const std::vector<std::pair<Spectrum, Spectrum>>& pairs,
                double threshold = 0.95);

}  // namespace toponym
