#include "heatctl/verify.hpp"

#include <cmath>
#include <iomanip>
#include <random>

#include "heatctl/config.hpp"
#include "heatctl/expr.hpp"

namespace heatctl {

namespace {

struct Reporter {
    std::ostream& out;
    bool all_ok = true;

    void check(const std::string& name, bool ok, double measured, double bound) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name << "  (measured " << std::scientific
            << std::setprecision(3) << measured << ", bound " << bound << ")\n";
        if (!ok) all_ok = false;
    }
    void expected_fail(const std::string& name, double measured) {
        out << "[XFAIL] " << name << "  (measured " << std::scientific << std::setprecision(3)
            << measured << "; expected to fail for this scheme)\n";
    }
};

}  // namespace

bool run_verify(const SimConfig& cfg, std::ostream& out) {
    Reporter rep{out};
    std::mt19937 rng(20240615u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    Problem prob;
    try {
        prob = build_problem(cfg);
    } catch (const std::exception& ex) {
        out << "[FAIL] problem setup: " << ex.what() << "\n";
        return false;
    }
    const Grid& grid = *prob.grid;
    const LinearOperator& op = prob.op;
    const TruncationBasis& basis = prob.basis;

    // operator symmetry under the quadrature weighting
    {
        Eigen::MatrixXd l(op.matrix);
        Eigen::MatrixXd w = grid.free_weights().asDiagonal();
        double asym = (w * l - l.transpose() * w).cwiseAbs().maxCoeff();
        double scale = (w * l).cwiseAbs().maxCoeff();
        if (op.scheme == BoundaryScheme::GhostPoint)
            rep.check("weighted symmetry ||WL - L'W||_max / ||WL||_max", asym / scale < 1e-12,
                      asym / scale, 1e-12);
        else
            rep.expected_fail("weighted symmetry (one-sided scheme)", asym / scale);
    }

    // negative definiteness
    {
        double top = compute_eigenvalues(op, 1).front();
        rep.check("spectrum strictly negative (largest eigenvalue)", top < 0.0, top, 0.0);
    }

    const int j_max = std::min<int>(5, static_cast<int>(basis.pairs.size()));
    const double theta = -9.0;

    // Lemma-2.1-type identity: <zeta_p, phi_j> = (theta - lambda_j)^{-1} <p, phi_j>_Gamma1
    try {
        HelmholtzSolver solver(op, theta, basis);
        BoundaryField p = BoundaryField::from_function(
            grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
        ScalarField zeta = solver.solve_neumann(p);
        double worst = 0.0;
        for (int j = 1; j <= j_max; ++j) {
            double lhs = inner_product_omega(zeta, basis.phi(j));
            double rhs = inner_product_gamma1(p, boundary_trace(basis.phi(j))) /
                         (theta - basis.lambda(j));
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        if (op.scheme == BoundaryScheme::GhostPoint)
            rep.check("spectral identity <zeta_p,phi_j> = <p,phi_j>/(theta-lambda_j)",
                      worst < 1e-8, worst, 1e-8);
        else
            // needs weight-orthogonal eigenvectors, which the non-symmetric
            // one-sided operator does not supply
            rep.expected_fail("spectral identity (one-sided scheme)", worst);
    } catch (const std::exception& ex) {
        out << "[FAIL] spectral identity: precondition violation: " << ex.what() << "\n";
        rep.all_ok = false;
    }

    // two-route output functional: direct -<q, trace(xi)> vs adjoint <f, eta_q>
    try {
        HelmholtzSolver solver(op, theta, basis);
        BoundaryField q = BoundaryField::from_function(
            grid, [](double x, double y) { return 1.0 + 0.3 * x - 0.2 * y; });
        ScalarField eta = solver.solve_neumann(q);
        double worst = 0.0;
        for (int rep_i = 0; rep_i < 20; ++rep_i) {
            ScalarField f(grid);
            for (int d = 0; d < grid.n_free(); ++d) f.values[d] = unif(rng);
            ScalarField xi = solver.solve_source(f);
            double direct = -inner_product_gamma1(q, boundary_trace(xi));
            double adjoint = inner_product_omega(f, eta);
            worst = std::max(worst, std::abs(direct - adjoint) / std::abs(adjoint));
        }
        if (op.scheme == BoundaryScheme::GhostPoint)
            rep.check("two-route output functional (direct vs adjoint)", worst < 1e-8, worst,
                      1e-8);
        else
            rep.expected_fail("two-route output functional (one-sided scheme)", worst);
    } catch (const std::exception& ex) {
        out << "[FAIL] two-route functional: " << ex.what() << "\n";
        rep.all_ok = false;
    }

    // controller synthesis + Sylvester residual + Hurwitz certificate
    try {
        ControllerSynthesis ctrl = make_controller(prob, cfg);
        rep.check("controller certificate: Lambda_N + F_N L_N Hurwitz",
                  ctrl.certificate.hurwitz, ctrl.certificate.abscissa, 0.0);

        BoundaryField g(grid);
        for (int k = 0; k < grid.n_gamma1(); ++k) g.values[k] = unif(rng);
        ScalarField zeta = ctrl.solver->solve_neumann(g);  // S g = -zeta
        Eigen::VectorXd load = neumann_load(grid, g, op.scheme).values;
        // (L + mu + alpha)(S g) = load(g)
        Eigen::VectorXd res =
            -(op.matrix * zeta.values + (basis.mu + ctrl.alpha) * zeta.values) - load;
        double rel = res.norm() / load.norm();
        rep.check("Sylvester residual (A+mu+alpha)Sg - Bg = 0", rel < 1e-8, rel, 1e-8);

        ObserverSynthesis obs = make_observer(prob, cfg);
        rep.check("observer certificate: Lambda_N + K_N J_N Hurwitz", obs.certificate.hurwitz,
                  obs.certificate.abscissa, 0.0);
    } catch (const std::exception& ex) {
        out << "[FAIL] synthesis: precondition violation: " << ex.what() << "\n";
        rep.all_ok = false;
    }

    // decoupling transforms on a small grid
    try {
        SimConfig small = cfg;
        small.nx = small.ny = 11;
        Problem sp = build_problem(small);
        const int nf = sp.grid->n_free(), ng = sp.grid->n_gamma1();

        ControllerSynthesis ctrl = make_controller(sp, small);
        Eigen::MatrixXd a = closed_loop_matrix(sp.op, ctrl);
        Eigen::MatrixXd s = sylvester_matrix(ctrl);
        Eigen::MatrixXd t = Eigen::MatrixXd::Identity(nf + ng, nf + ng);
        t.topRightCorner(nf, ng) = s;
        Eigen::MatrixXd ti = Eigen::MatrixXd::Identity(nf + ng, nf + ng);
        ti.topRightCorner(nf, ng) = -s;
        Eigen::MatrixXd as = t * a * ti;
        double off = as.topRightCorner(nf, ng).norm() / a.norm();
        rep.check("state-feedback decoupling: (1,2) block of SAS^-1", off < 1e-8, off, 1e-8);

        ObserverSynthesis obs = make_observer(sp, small);
        Eigen::MatrixXd ae = observer_error_matrix(sp.op, obs);
        Eigen::MatrixXd pmat = observer_p_matrix(obs);
        Eigen::MatrixXd tp = Eigen::MatrixXd::Identity(nf + ng, nf + ng);
        tp.bottomLeftCorner(ng, nf) = pmat;
        Eigen::MatrixXd tpi = Eigen::MatrixXd::Identity(nf + ng, nf + ng);
        tpi.bottomLeftCorner(ng, nf) = -pmat;
        Eigen::MatrixXd ap = tp * ae * tpi;
        double off2 = ap.bottomLeftCorner(ng, nf).norm() / ae.norm();
        rep.check("observer decoupling: (2,1) block of PAP^-1", off2 < 1e-8, off2, 1e-8);
    } catch (const std::exception& ex) {
        out << "[FAIL] decoupling transforms: " << ex.what() << "\n";
        rep.all_ok = false;
    }

    // Vandermonde controllability certificate
    {
        double worst = 0.0;
        std::uniform_int_distribution<int> size_dist(1, 6);
        for (int it = 0; it < 100; ++it) {
            int n = size_dist(rng);
            Eigen::VectorXd lam(n), b(n);
            for (int i = 0; i < n; ++i) {
                lam[i] = 5.0 * unif(rng) + i * 2.5;  // well separated
                b[i] = unif(rng) + (unif(rng) > 0 ? 1.5 : -1.5);
            }
            double det = controllability_det(lam, b);
            double closed = b.prod();
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) closed *= (lam[i] - lam[j]);
            worst = std::max(worst, std::abs(std::abs(det) - std::abs(closed)) /
                                        std::abs(closed));
        }
        rep.check("Vandermonde magnitude |det Pc| = |b1..bN prod(li-lj)|", worst < 1e-10,
                  worst, 1e-10);
    }

    out << (rep.all_ok ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
    return rep.all_ok;
}

}  // namespace heatctl
