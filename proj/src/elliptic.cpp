#include "heatctl/elliptic.hpp"

#include <cmath>

namespace heatctl {

HelmholtzSolver::HelmholtzSolver(const LinearOperator& op, double theta,
                                 const TruncationBasis& basis, double resonance_margin)
    : op_(&op), theta_(theta) {
    const double scale = std::max(1.0, std::abs(basis.pairs.front().lambda));
    for (size_t j = 0; j < basis.pairs.size(); ++j) {
        if (std::abs(theta - basis.pairs[j].lambda) <= resonance_margin * scale)
            throw numerical_error("HelmholtzSolver: shift theta=" + std::to_string(theta) +
                                  " resonates with lambda_" + std::to_string(j + 1) + " = " +
                                  std::to_string(basis.pairs[j].lambda));
    }
    Eigen::SparseMatrix<double> shifted = op.matrix;
    Eigen::SparseMatrix<double> eye(shifted.rows(), shifted.cols());
    eye.setIdentity();
    shifted -= theta * eye;
    lu_.compute(shifted);
    if (lu_.info() != Eigen::Success)
        throw numerical_error("HelmholtzSolver: sparse factorization failed");
}

ScalarField HelmholtzSolver::solve_rhs(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success)
        throw numerical_error("HelmholtzSolver: back-substitution failed");
    return ScalarField(*op_->grid, std::move(x));
}

ScalarField HelmholtzSolver::solve_neumann(const BoundaryField& g) const {
    ScalarField load = neumann_load(*op_->grid, g, op_->scheme);
    return solve_rhs(-load.values);
}

ScalarField HelmholtzSolver::solve_source(const ScalarField& f) const {
    if (f.grid != op_->grid) throw config_error("solve_source: field on a different grid");
    return solve_rhs(f.values);
}

double HelmholtzSolver::residual(const ScalarField& solution, const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd r = op_->matrix * solution.values - theta_ * solution.values - rhs;
    double den = rhs.norm();
    return den == 0.0 ? r.norm() : r.norm() / den;
}

}  // namespace heatctl
