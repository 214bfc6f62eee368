#include "heatctl/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace heatctl {

namespace {

constexpr double kResidualTol = 1e-8;

void fix_sign(Eigen::VectorXd& v) {
    int idx;
    v.cwiseAbs().maxCoeff(&idx);
    if (v[idx] < 0.0) v = -v;
}

double weighted_residual(const LinearOperator& op, double lambda, const Eigen::VectorXd& v) {
    const Eigen::VectorXd r = op.matrix * v - lambda * v;
    const Eigen::VectorXd& w = op.grid->free_weights();
    double num = std::sqrt(r.dot(w.cwiseProduct(r)));
    double den = std::sqrt(v.dot(w.cwiseProduct(v)));
    return num / den;
}

}  // namespace

std::vector<EigenPair> compute_eigenpairs(const LinearOperator& op, int m) {
    const Grid& grid = *op.grid;
    const int n = grid.n_free();
    if (m < 1 || m > n) throw config_error("compute_eigenpairs: m out of range");

    std::vector<EigenPair> out;
    out.reserve(m);

    if (op.scheme == BoundaryScheme::GhostPoint) {
        // W L is symmetric; D L D^{-1} with D = sqrt(W) is a symmetric matrix
        // with the same spectrum, and phi = D^{-1} z is weight-orthonormal.
        const Eigen::VectorXd d = grid.free_weights().cwiseSqrt();
        Eigen::MatrixXd M = Eigen::MatrixXd(op.matrix);
        M = d.asDiagonal() * M * d.cwiseInverse().asDiagonal();
        M = 0.5 * (M + M.transpose());  // clean roundoff asymmetry
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success)
            throw numerical_error("compute_eigenpairs: symmetric eigensolver failed");
        for (int k = 0; k < m; ++k) {
            int col = n - 1 - k;  // Eigen sorts ascending
            EigenPair ep;
            ep.lambda = es.eigenvalues()[col];
            Eigen::VectorXd phi = es.eigenvectors().col(col).cwiseQuotient(d);
            fix_sign(phi);
            ep.phi = ScalarField(grid, phi);
            ep.residual = weighted_residual(op, ep.lambda, phi);
            out.push_back(std::move(ep));
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.matrix));
        if (es.info() != Eigen::Success)
            throw numerical_error("compute_eigenpairs: eigensolver failed");
        std::vector<int> order(n);
        for (int k = 0; k < n; ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](int u, int v) {
            return es.eigenvalues()[u].real() > es.eigenvalues()[v].real();
        });
        for (int k = 0; k < m; ++k) {
            int col = order[k];
            EigenPair ep;
            ep.lambda = es.eigenvalues()[col].real();
            Eigen::VectorXd phi = es.eigenvectors().col(col).real();
            double nrm = std::sqrt(phi.dot(grid.free_weights().cwiseProduct(phi)));
            phi /= nrm;
            fix_sign(phi);
            ep.phi = ScalarField(grid, phi);
            ep.residual = weighted_residual(op, ep.lambda, phi);
            out.push_back(std::move(ep));
        }
    }

    for (const EigenPair& ep : out)
        if (ep.residual > kResidualTol)
            throw numerical_error("compute_eigenpairs: residual " + std::to_string(ep.residual) +
                                  " exceeds tolerance at lambda=" + std::to_string(ep.lambda));
    return out;
}

std::vector<double> compute_eigenvalues(const LinearOperator& op, int m) {
    const int n = op.grid->n_free();
    if (m < 1 || m > n) throw config_error("compute_eigenvalues: m out of range");
    std::vector<double> all(n);
    if (op.scheme == BoundaryScheme::GhostPoint) {
        const Eigen::VectorXd d = op.grid->free_weights().cwiseSqrt();
        Eigen::MatrixXd M = Eigen::MatrixXd(op.matrix);
        M = d.asDiagonal() * M * d.cwiseInverse().asDiagonal();
        M = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        for (int k = 0; k < n; ++k) all[k] = es.eigenvalues()[k];
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.matrix), false);
        for (int k = 0; k < n; ++k) all[k] = es.eigenvalues()[k].real();
    }
    std::sort(all.begin(), all.end(), std::greater<>());
    all.resize(m);
    return all;
}

EigenPair analytic_eigenpair(const Grid& grid, int k, int l) {
    if (k < 1 || l < 1) throw config_error("analytic_eigenpair: mode indices must be >= 1");
    const double pi = std::acos(-1.0);
    const double kx = (k - 0.5) * pi / grid.a();
    const double ky = (l - 0.5) * pi / grid.b();
    EigenPair ep;
    ep.lambda = -(kx * kx + ky * ky);
    ep.mode = std::make_pair(k, l);
    const double amp = 2.0 / std::sqrt(grid.a() * grid.b());
    ep.phi = ScalarField::from_function(
        grid, [&](double x, double y) { return amp * std::sin(kx * x) * std::sin(ky * y); });
    return ep;
}

TruncationBasis build_truncation(std::vector<EigenPair> pairs, double mu) {
    if (pairs.empty()) throw config_error("build_truncation: no eigenpairs");
    if (mu <= 0.0) throw config_error("build_truncation: mu must be positive");
    for (size_t k = 1; k < pairs.size(); ++k)
        if (pairs[k - 1].lambda < pairs[k].lambda)
            throw config_error("build_truncation: eigenpairs not sorted decreasing");

    int n_trunc = 0;
    for (size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].lambda + mu >= 0.0) n_trunc = static_cast<int>(k) + 1;

    if (pairs.back().lambda + mu >= 0.0)
        throw config_error(
            "build_truncation: insufficient eigenpairs to certify N (last computed mode is "
            "still unstable); compute more modes");

    const double tie_tol = 1e-6 * std::max(1.0, std::abs(pairs.front().lambda));
    for (int i = 0; i < n_trunc; ++i)
        for (int j = i + 1; j < n_trunc; ++j)
            if (std::abs(pairs[i].lambda - pairs[j].lambda) < tie_tol)
                throw config_error(
                    "build_truncation: eigenvalue tie among the unstable modes (indices " +
                    std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    "); the synthesis needs a simple spectrum -- use a rectangle whose "
                    "squared aspect ratio is irrational, e.g. b = a/sqrt(2)");

    TruncationBasis basis;
    basis.pairs = std::move(pairs);
    basis.mu = mu;
    basis.n_trunc = n_trunc;
    return basis;
}

}  // namespace heatctl
