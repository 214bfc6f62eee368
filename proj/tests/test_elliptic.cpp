#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatctl/elliptic.hpp"

using namespace heatctl;

namespace {

struct Fixture {
    Grid grid{1.0, 1.0, 21, 21};
    LinearOperator op = assemble_laplacian(grid);
    TruncationBasis basis = build_truncation(compute_eigenpairs(op, 6), 6.0);
};

}  // namespace

TEST_CASE("resonant shift rejected") {
    Fixture fx;
    CHECK_THROWS_AS(HelmholtzSolver(fx.op, fx.basis.lambda(1), fx.basis), numerical_error);
}

TEST_CASE("neumann solve") {
    Fixture fx;
    HelmholtzSolver solver(fx.op, -9.0, fx.basis);

    SUBCASE("zero data gives the zero field") {
        BoundaryField zero(fx.grid);
        CHECK(solver.solve_neumann(zero).values.norm() == 0.0);
    }

    SUBCASE("spectral identity <zeta_p, phi_j> = (theta - lambda_j)^{-1} <p, phi_j>") {
        BoundaryField p = BoundaryField::from_function(
            fx.grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
        ScalarField zeta = solver.solve_neumann(p);
        for (int j = 1; j <= 5; ++j) {
            double lhs = inner_product_omega(zeta, fx.basis.phi(j));
            double rhs = inner_product_gamma1(p, boundary_trace(fx.basis.phi(j))) /
                         (-9.0 - fx.basis.lambda(j));
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
        }
    }

    SUBCASE("first-mode component is nonzero") {
        BoundaryField p = BoundaryField::from_function(
            fx.grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
        ScalarField zeta = solver.solve_neumann(p);
        CHECK(std::abs(inner_product_omega(zeta, fx.basis.phi(1))) > 1e-6);
    }

    SUBCASE("residual of the solved system is tiny") {
        BoundaryField p = BoundaryField::from_function(
            fx.grid, [](double x, double y) { return 1.0 + x * y; });
        ScalarField zeta = solver.solve_neumann(p);
        Eigen::VectorXd rhs = -neumann_load(fx.grid, p).values;
        CHECK(solver.residual(zeta, rhs) < 1e-10);
    }
}

TEST_CASE("source solve") {
    Fixture fx;
    double gamma = -9.0;
    HelmholtzSolver solver(fx.op, gamma, fx.basis);

    SUBCASE("zero source gives the zero field") {
        ScalarField zero(fx.grid);
        CHECK(solver.solve_source(zero).values.norm() == 0.0);
    }

    SUBCASE("eigenfield source: xi = phi_j / (lambda_j - gamma)") {
        for (int j = 1; j <= 4; ++j) {
            ScalarField xi = solver.solve_source(fx.basis.phi(j));
            Eigen::VectorXd expect = fx.basis.phi(j).values / (fx.basis.lambda(j) - gamma);
            CHECK((xi.values - expect).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("eigenfield trace is nonzero on Gamma_1") {
    Fixture fx;
    BoundaryField tr = boundary_trace(fx.basis.phi(1));
    CHECK(norm_gamma1(tr) > 0.1);
}

TEST_CASE("grid mismatch rejected") {
    Fixture fx;
    Grid other(1.0, 1.0, 11, 11);
    HelmholtzSolver solver(fx.op, -9.0, fx.basis);
    ScalarField f(other);
    CHECK_THROWS_AS(solver.solve_source(f), config_error);
}
