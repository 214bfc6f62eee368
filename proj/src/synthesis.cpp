#include "heatctl/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>

namespace heatctl {

namespace {

constexpr double kShapeTol = 1e-10;        // nonzero-product threshold, unit-norm shape
constexpr double kEntryWarnTol = 1e-10;    // modal entry below this loses the certificate
constexpr double kShapeCheckTol = 1e-8;

bool shape_ok(const TruncationBasis& basis, const BoundaryField& p, int n) {
    double nrm = norm_gamma1(p);
    if (nrm <= 0.0) return false;
    for (int j = 1; j <= n; ++j) {
        double ip = inner_product_gamma1(p, boundary_trace(basis.phi(j))) / nrm;
        if (std::abs(ip) <= kShapeCheckTol) return false;
    }
    return true;
}

std::vector<std::complex<double>> default_targets(const Eigen::VectorXd& lambda_n, double sigma) {
    std::vector<std::complex<double>> t;
    t.reserve(lambda_n.size());
    for (int j = 0; j < lambda_n.size(); ++j) t.emplace_back(-lambda_n[j] - sigma, 0.0);
    return t;
}

void check_targets(const std::vector<std::complex<double>>& targets) {
    for (const auto& t : targets) {
        if (t.real() >= 0.0)
            throw config_error("place_poles: target poles must have negative real part");
        if (t.imag() != 0.0) {
            bool paired = false;
            for (const auto& s : targets)
                if (s == std::conj(t)) paired = true;
            if (!paired)
                throw config_error("place_poles: complex targets must come in conjugate pairs");
        }
    }
}

}  // namespace

HurwitzCertificate verify_hurwitz(const Eigen::MatrixXd& m, double margin) {
    HurwitzCertificate cert;
    if (m.rows() == 0) {
        cert.hurwitz = true;
        cert.abscissa = -std::numeric_limits<double>::infinity();
        return cert;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    cert.abscissa = es.eigenvalues().real().maxCoeff();
    cert.hurwitz = cert.abscissa < -margin;
    return cert;
}

BoundaryField construct_shape(const TruncationBasis& basis,
                              const std::optional<BoundaryField>& seed) {
    const int n = basis.n_trunc;
    if (n < 1) throw config_error("construct_shape: N = 0, nothing to construct");
    if (seed && shape_ok(basis, *seed, n)) return *seed;

    BoundaryField p = boundary_trace(basis.phi(1));
    for (int j = 2; j <= n; ++j) {
        if (shape_ok(basis, p, j)) continue;
        BoundaryField phi_j = boundary_trace(basis.phi(j));
        double gamma = 1.0;
        bool fixed = false;
        for (int it = 0; it < 200 && !fixed; ++it, gamma *= 0.5) {
            BoundaryField cand(*p.grid, p.values + gamma * phi_j.values);
            if (shape_ok(basis, cand, j)) {
                p = std::move(cand);
                fixed = true;
            }
        }
        if (!fixed)
            throw numerical_error("construct_shape: greedy sweep failed at mode " +
                                  std::to_string(j) +
                                  " (boundary traces appear linearly dependent)");
    }
    if (!shape_ok(basis, p, n))
        throw numerical_error("construct_shape: constructed shape fails the nonzero test");
    return p;
}

Eigen::VectorXd compute_fn(const TruncationBasis& basis, const BoundaryField& p,
                           const HelmholtzSolver& solver) {
    const int n = basis.n_trunc;
    ScalarField zeta = solver.solve_neumann(p);
    Eigen::VectorXd f(n);
    for (int k = 1; k <= n; ++k) {
        f[k - 1] = inner_product_omega(zeta, basis.phi(k));
        if (std::abs(f[k - 1]) < kEntryWarnTol)
            std::cerr << "warning: f_" << k << " = " << f[k - 1]
                      << " below tolerance; controllability certificate lost\n";
    }
    return f;
}

Eigen::RowVectorXd compute_jn(const TruncationBasis& basis, const BoundaryField& q,
                              const HelmholtzSolver& solver) {
    const int n = basis.n_trunc;
    Eigen::RowVectorXd j_n(n);
    for (int j = 1; j <= n; ++j) {
        ScalarField xi = solver.solve_source(basis.phi(j));
        j_n[j - 1] = -inner_product_gamma1(q, boundary_trace(xi));
        if (std::abs(j_n[j - 1]) < kEntryWarnTol)
            std::cerr << "warning: J_" << j << " = " << j_n[j - 1]
                      << " below tolerance; observability certificate lost\n";
    }
    if (solver.op().scheme == BoundaryScheme::GhostPoint) {
        ScalarField eta = solver.solve_neumann(q);
        for (int j = 1; j <= n; ++j) {
            double adj = inner_product_omega(basis.phi(j), eta);
            double denom = std::max(std::abs(j_n[j - 1]), 1e-300);
            if (std::abs(adj - j_n[j - 1]) / denom > 1e-6)
                throw numerical_error("compute_jn: direct and adjoint routes disagree at j=" +
                                      std::to_string(j));
        }
    }
    return j_n;
}

Eigen::RowVectorXd place_poles(const Eigen::VectorXd& lambda_diag, const Eigen::VectorXd& f,
                               const std::vector<std::complex<double>>& targets) {
    const int n = static_cast<int>(lambda_diag.size());
    if (f.size() != n || static_cast<int>(targets.size()) != n)
        throw config_error("place_poles: dimension mismatch");
    check_targets(targets);
    for (int k = 0; k < n; ++k)
        if (f[k] == 0.0)
            throw config_error("place_poles: zero input entry at mode " + std::to_string(k + 1) +
                               " (uncontrollable)");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (lambda_diag[i] == lambda_diag[j])
                throw config_error("place_poles: repeated diagonal entry");

    // Characteristic-polynomial matching in Lagrange form: evaluating
    // det(sI - Lambda - F L) = prod(s - t_j) at s = lambda_m isolates l_m.
    Eigen::RowVectorXd l(n);
    for (int m = 0; m < n; ++m) {
        std::complex<double> num(1.0, 0.0);
        for (int j = 0; j < n; ++j) num *= (lambda_diag[m] - targets[j]);
        double den = f[m];
        for (int i = 0; i < n; ++i)
            if (i != m) den *= (lambda_diag[m] - lambda_diag[i]);
        l[m] = -num.real() / den;
    }

    // verify the placement
    Eigen::MatrixXd closed = Eigen::MatrixXd(lambda_diag.asDiagonal()) + f * l;
    Eigen::EigenSolver<Eigen::MatrixXd> es(closed, false);
    double scale = std::max(1.0, lambda_diag.cwiseAbs().maxCoeff());
    std::vector<bool> used(n, false);
    for (const auto& t : targets) {
        double best = std::numeric_limits<double>::max();
        int best_i = -1;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            double d = std::abs(es.eigenvalues()[i] - t);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        if (best > 1e-6 * scale)
            throw numerical_error("place_poles: placed spectrum misses a target by " +
                                  std::to_string(best));
        used[best_i] = true;
    }
    return l;
}

Eigen::VectorXd place_observer_gain(const Eigen::VectorXd& lambda_diag,
                                    const Eigen::RowVectorXd& j,
                                    const std::vector<std::complex<double>>& targets) {
    return place_poles(lambda_diag, j.transpose(), targets).transpose();
}

double controllability_det(const Eigen::VectorXd& lambda_diag, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(lambda_diag.size());
    Eigen::MatrixXd pc(n, n);
    Eigen::VectorXd col = b;
    for (int k = 0; k < n; ++k) {
        pc.col(k) = col;
        col = lambda_diag.cwiseProduct(col);
    }
    return pc.determinant();
}

ControllerSynthesis build_controller(const LinearOperator& op, const TruncationBasis& basis,
                                     double alpha, const ControllerOptions& opts) {
    if (alpha <= 0.0) throw config_error("build_controller: alpha must be positive");
    const int n = basis.n_trunc;

    ControllerSynthesis ctrl;
    ctrl.basis = &basis;
    ctrl.alpha = alpha;
    // resonance check alpha + mu + lambda_j != 0 happens inside the solver
    ctrl.solver = std::make_shared<HelmholtzSolver>(op, -alpha - basis.mu, basis);

    ctrl.lambda_n.resize(n);
    for (int j = 1; j <= n; ++j) ctrl.lambda_n[j - 1] = basis.lambda(j) + basis.mu;

    if (n == 0) {
        ctrl.p = opts.p ? *opts.p : BoundaryField(*op.grid);
        ctrl.kernel = ScalarField(*op.grid);
        ctrl.certificate.hurwitz = true;
        ctrl.certificate.abscissa = basis.lambda(1) + basis.mu;
        return ctrl;
    }

    ctrl.p = construct_shape(basis, opts.p);
    ctrl.f_n = compute_fn(basis, ctrl.p, *ctrl.solver);

    if (opts.gains) {
        if (static_cast<int>(opts.gains->size()) != n)
            throw config_error("build_controller: expected " + std::to_string(n) + " gains");
        ctrl.l_n = Eigen::Map<const Eigen::RowVectorXd>(opts.gains->data(), n);
    } else {
        auto targets = opts.targets ? *opts.targets : default_targets(ctrl.lambda_n, opts.sigma);
        ctrl.l_n = place_poles(ctrl.lambda_n, ctrl.f_n, targets);
    }

    ctrl.kernel = ScalarField(*op.grid);
    for (int k = 1; k <= n; ++k) ctrl.kernel.values += ctrl.l_n[k - 1] * basis.phi(k).values;

    Eigen::MatrixXd closed =
        Eigen::MatrixXd(ctrl.lambda_n.asDiagonal()) + ctrl.f_n * ctrl.l_n;
    double margin = 1e-3 * std::max(1.0, std::abs(basis.lambda(1)));
    ctrl.certificate = verify_hurwitz(closed, margin);
    if (!ctrl.certificate.hurwitz)
        throw numerical_error("build_controller: Lambda_N + F_N L_N is not Hurwitz (abscissa " +
                              std::to_string(ctrl.certificate.abscissa) + ")");
    return ctrl;
}

ObserverSynthesis build_observer(const LinearOperator& op, const TruncationBasis& basis,
                                 double beta, const ObserverOptions& opts) {
    if (beta <= 0.0) throw config_error("build_observer: beta must be positive");
    const int n = basis.n_trunc;

    ObserverSynthesis obs;
    obs.basis = &basis;
    obs.beta = beta;
    obs.solver = std::make_shared<HelmholtzSolver>(op, -beta - basis.mu, basis);

    obs.lambda_n.resize(n);
    for (int j = 1; j <= n; ++j) obs.lambda_n[j - 1] = basis.lambda(j) + basis.mu;

    if (n == 0) {
        obs.q = opts.q ? *opts.q : BoundaryField(*op.grid);
        obs.k_field = ScalarField(*op.grid);
        obs.l_trace = BoundaryField(*op.grid);
        obs.certificate.hurwitz = true;
        obs.certificate.abscissa = basis.lambda(1) + basis.mu;
        return obs;
    }

    obs.q = construct_shape(basis, opts.q);
    obs.j_n = compute_jn(basis, obs.q, *obs.solver);

    if (opts.gains) {
        if (static_cast<int>(opts.gains->size()) != n)
            throw config_error("build_observer: expected " + std::to_string(n) + " gains");
        obs.k_n = Eigen::Map<const Eigen::VectorXd>(opts.gains->data(), n);
    } else {
        auto targets = opts.targets ? *opts.targets : default_targets(obs.lambda_n, opts.sigma);
        obs.k_n = place_observer_gain(obs.lambda_n, obs.j_n, targets);
    }

    obs.k_field = ScalarField(*op.grid);
    obs.l_trace = BoundaryField(*op.grid);
    for (int j = 1; j <= n; ++j) {
        obs.k_field.values += obs.k_n[j - 1] * basis.phi(j).values;
        ScalarField xi = obs.solver->solve_source(basis.phi(j));
        obs.l_trace.values -=
            obs.k_n[j - 1] * obs.q.values.cwiseProduct(boundary_trace(xi).values);
    }

    Eigen::MatrixXd closed = Eigen::MatrixXd(obs.lambda_n.asDiagonal()) + obs.k_n * obs.j_n;
    double margin = 1e-3 * std::max(1.0, std::abs(basis.lambda(1)));
    obs.certificate = verify_hurwitz(closed, margin);
    if (!obs.certificate.hurwitz)
        throw numerical_error("build_observer: Lambda_N + K_N J_N is not Hurwitz (abscissa " +
                              std::to_string(obs.certificate.abscissa) + ")");
    return obs;
}

Eigen::MatrixXd load_matrix(const Grid& grid, BoundaryScheme scheme) {
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nf, ng);
    for (int k = 0; k < ng; ++k) {
        BoundaryField e(grid);
        e.values[k] = 1.0;
        b.col(k) = neumann_load(grid, e, scheme).values;
    }
    return b;
}

Eigen::MatrixXd trace_matrix(const Grid& grid) {
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ng, nf);
    for (int k = 0; k < ng; ++k) t(k, grid.free_index(grid.gamma1_node(k))) = 1.0;
    return t;
}

Eigen::MatrixXd sylvester_matrix(const ControllerSynthesis& ctrl) {
    const Grid& grid = ctrl.solver->grid();
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    Eigen::MatrixXd s(nf, ng);
    for (int k = 0; k < ng; ++k) {
        BoundaryField e(grid);
        e.values[k] = 1.0;
        s.col(k) = -ctrl.solver->solve_neumann(e).values;  // S g = -phi_g
    }
    return s;
}

Eigen::MatrixXd observer_p_matrix(const ObserverSynthesis& obs) {
    const Grid& grid = obs.solver->grid();
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    Eigen::MatrixXd t = trace_matrix(grid);
    Eigen::MatrixXd p(ng, nf);
    for (int c = 0; c < nf; ++c) {
        ScalarField e(grid);
        e.values[c] = 1.0;
        ScalarField sol = obs.solver->solve_source(e);  // (L + beta + mu)^{-1} e_c
        p.col(c) = -obs.q.values.cwiseProduct(t * sol.values);
    }
    return p;
}

Eigen::MatrixXd closed_loop_matrix(const LinearOperator& op, const ControllerSynthesis& ctrl) {
    const Grid& grid = *op.grid;
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    const double mu = ctrl.basis->mu;

    Eigen::MatrixXd a(nf + ng, nf + ng);
    Eigen::MatrixXd bmat = load_matrix(grid, op.scheme);
    Eigen::MatrixXd hs = -sylvester_matrix(ctrl);  // v -> phi_v
    Eigen::RowVectorXd wk =
        (grid.free_weights().cwiseProduct(ctrl.kernel.values)).transpose();

    a.topLeftCorner(nf, nf) =
        Eigen::MatrixXd(op.matrix) + mu * Eigen::MatrixXd::Identity(nf, nf);
    a.topRightCorner(nf, ng) = bmat;
    a.bottomLeftCorner(ng, nf) = -ctrl.p.values * wk;
    a.bottomRightCorner(ng, ng) =
        -ctrl.alpha * Eigen::MatrixXd::Identity(ng, ng) + ctrl.p.values * (wk * hs);
    return a;
}

Eigen::MatrixXd observer_error_matrix(const LinearOperator& op, const ObserverSynthesis& obs) {
    const Grid& grid = *op.grid;
    const int nf = grid.n_free(), ng = grid.n_gamma1();
    const double mu = obs.basis->mu;

    Eigen::MatrixXd a(nf + ng, nf + ng);
    Eigen::RowVectorXd cv = grid.gamma1_weights().transpose();  // C_v h = <1, h>_Gamma1
    Eigen::MatrixXd t = trace_matrix(grid);

    a.topLeftCorner(nf, nf) =
        Eigen::MatrixXd(op.matrix) + mu * Eigen::MatrixXd::Identity(nf, nf);
    a.topRightCorner(nf, ng) = -obs.k_field.values * cv;
    a.bottomLeftCorner(ng, nf) = obs.q.values.asDiagonal() * t;
    a.bottomRightCorner(ng, ng) =
        -obs.beta * Eigen::MatrixXd::Identity(ng, ng) + obs.l_trace.values * cv;
    return a;
}

}  // namespace heatctl
