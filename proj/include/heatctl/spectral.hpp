// Eigenpairs of the discrete Laplacian and the unstable-mode truncation.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "heatctl/grid.hpp"

namespace heatctl {

struct EigenPair {
    double lambda = 0.0;
    ScalarField phi;                              // unit L2(Omega) norm
    std::optional<std::pair<int, int>> mode;      // (k,l) for analytic pairs
    double residual = 0.0;                        // ||L phi - lambda phi|| / ||phi||
};

// Ordered eigenpairs with the truncation order N of the unstable block
// (lambda_k + mu >= 0 for k <= N, < 0 beyond).
struct TruncationBasis {
    std::vector<EigenPair> pairs;  // lambda_1 > lambda_2 > ...
    double mu = 0.0;
    int n_trunc = 0;

    const EigenPair& pair(int j) const { return pairs.at(j - 1); }  // 1-based like the math
    double lambda(int j) const { return pairs.at(j - 1).lambda; }
    const ScalarField& phi(int j) const { return pairs.at(j - 1).phi; }
};

// The m algebraically largest eigenvalues with weight-orthonormal eigenvectors
// (ghost-point scheme; the one-sided operator is not weight-symmetric, its
// eigenvectors are only normalized).  Sign convention: the entry of largest
// magnitude is positive.
std::vector<EigenPair> compute_eigenpairs(const LinearOperator& op, int m);

// Eigenvalues only; cheaper for large grids.
std::vector<double> compute_eigenvalues(const LinearOperator& op, int m);

// Separation-of-variables oracle on the rectangle:
//   lambda = -pi^2 ((k-1/2)^2/a^2 + (l-1/2)^2/b^2)
//   phi = 2/sqrt(ab) sin((k-1/2) pi x / a) sin((l-1/2) pi y / b)
EigenPair analytic_eigenpair(const Grid& grid, int k, int l);

// N = max{k : lambda_k + mu >= 0}; rejects eigenvalue ties among modes 1..N
// (the synthesis assumes a simple spectrum) and requires the computed tail to
// certify N.
TruncationBasis build_truncation(std::vector<EigenPair> pairs, double mu);

}  // namespace heatctl
