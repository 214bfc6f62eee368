// Shifted elliptic solves (Delta - theta) behind a reusable sparse factorization.
#pragma once

#include <Eigen/SparseLU>

#include "heatctl/grid.hpp"
#include "heatctl/spectral.hpp"

namespace heatctl {

// Factorization of (L - theta I) on the free dofs.  theta must stay clear of
// the computed spectrum (resonance would make the solve singular).
class HelmholtzSolver {
public:
    HelmholtzSolver(const LinearOperator& op, double theta, const TruncationBasis& basis,
                    double resonance_margin = 1e-6);

    double theta() const { return theta_; }
    const LinearOperator& op() const { return *op_; }
    const Grid& grid() const { return *op_->grid; }

    // zeta with (L - theta) zeta = -neumann_load(g): inhomogeneous Neumann data g.
    ScalarField solve_neumann(const BoundaryField& g) const;

    // xi with (L - theta) xi = f: interior source, homogeneous Neumann.
    ScalarField solve_source(const ScalarField& f) const;

    // relative residual of the last-solved system for a given pair
    double residual(const ScalarField& solution, const Eigen::VectorXd& rhs) const;

private:
    ScalarField solve_rhs(const Eigen::VectorXd& rhs) const;

    const LinearOperator* op_;
    double theta_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace heatctl
