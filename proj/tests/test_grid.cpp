#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatctl/grid.hpp"

using namespace heatctl;

TEST_CASE("node classification on the 3x3 unit square") {
    Grid g(1.0, 1.0, 3, 3);
    CHECK(g.n_nodes() == 9);
    CHECK(g.hx() == doctest::Approx(0.5));
    CHECK(g.hy() == doctest::Approx(0.5));

    int interior = 0, dirichlet = 0, gamma1 = 0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            switch (g.tag(i, j)) {
                case NodeTag::Interior: ++interior; break;
                case NodeTag::Dirichlet: ++dirichlet; break;
                default: ++gamma1; break;
            }
        }
    CHECK(interior == 1);
    CHECK(dirichlet == 5);
    CHECK(gamma1 == 3);
    CHECK(g.n_gamma1() == 3);
    CHECK(g.n_free() == 4);

    // mixed corners are Dirichlet, the (a,b) corner belongs to Gamma_1
    CHECK(g.tag(2, 0) == NodeTag::Dirichlet);
    CHECK(g.tag(0, 2) == NodeTag::Dirichlet);
    CHECK(g.tag(2, 2) == NodeTag::CornerNN);
}

TEST_CASE("spacing on a 2x1 rectangle") {
    Grid g(2.0, 1.0, 5, 3);
    CHECK(g.hx() == doctest::Approx(0.5));
    CHECK(g.hy() == doctest::Approx(0.5));
    CHECK(g.n_gamma1() == (3 - 1) + (5 - 2));
}

TEST_CASE("gamma1 enumeration order") {
    Grid g(1.0, 1.0, 4, 3);
    // x=a edge bottom-up first (corner last on that edge), then y=b edge
    CHECK(g.gamma1_node(0) == g.node(3, 1));
    CHECK(g.gamma1_node(1) == g.node(3, 2));
    CHECK(g.gamma1_node(2) == g.node(1, 2));
    CHECK(g.gamma1_node(3) == g.node(2, 2));
}

TEST_CASE("quadrature weights sum to area and edge length") {
    Grid g(1.0, 1.0, 21, 21);
    double area = 0.0;
    for (int id = 0; id < g.n_nodes(); ++id) area += g.weight_node(id);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

    // free-node mass misses the Dirichlet strip, an O(h) sliver
    ScalarField one = ScalarField::from_function(g, [](double, double) { return 1.0; });
    CHECK(inner_product_omega(one, one) == doctest::Approx(1.0).epsilon(0.06));

    // Gamma_1 weights cover a+b up to the half-cells at the shared corners
    double edge = g.gamma1_weights().sum();
    CHECK(std::abs(edge - 2.0) < g.hx() + g.hy());
}

TEST_CASE("laplacian stencil rows") {
    Grid g(1.0, 1.0, 5, 5);  // h = 0.25, 1/h^2 = 16
    LinearOperator op = assemble_laplacian(g);
    Eigen::MatrixXd m(op.matrix);

    int c = g.free_index(g.node(2, 2));  // interior
    CHECK(m(c, c) == doctest::Approx(-64.0));
    CHECK(m(c, g.free_index(g.node(1, 2))) == doctest::Approx(16.0));
    CHECK(m(c, g.free_index(g.node(3, 2))) == doctest::Approx(16.0));
    CHECK(m(c, g.free_index(g.node(2, 1))) == doctest::Approx(16.0));
    CHECK(m(c, g.free_index(g.node(2, 3))) == doctest::Approx(16.0));

    // ghost reflection doubles the inward coefficient on the x=a edge
    int e = g.free_index(g.node(4, 2));
    CHECK(m(e, e) == doctest::Approx(-64.0));
    CHECK(m(e, g.free_index(g.node(3, 2))) == doctest::Approx(32.0));
}

TEST_CASE("one-sided scheme drops the normal coupling") {
    Grid g(1.0, 1.0, 5, 5);
    LinearOperator op = assemble_laplacian(g, BoundaryScheme::OneSided);
    Eigen::MatrixXd m(op.matrix);
    int e = g.free_index(g.node(4, 2));
    // du/dx = 0 one-sided: u_N = u_{N-1}, one x-coupling instead of a reflected pair
    CHECK(m(e, e) == doctest::Approx(-16.0 - 32.0));
    CHECK(m(e, g.free_index(g.node(3, 2))) == doctest::Approx(16.0));
}

TEST_CASE("ghost-point operator is symmetric in the weighted inner product") {
    Grid g(1.0, 1.0, 9, 7);
    LinearOperator op = assemble_laplacian(g);
    Eigen::MatrixXd wl = g.free_weights().asDiagonal() * Eigen::MatrixXd(op.matrix);
    CHECK((wl - wl.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("neumann load") {
    Grid g(1.0, 1.0, 11, 11);

    SUBCASE("zero data gives zero load") {
        BoundaryField zero(g);
        ScalarField load = neumann_load(g, zero);
        CHECK(load.values.norm() == 0.0);
    }

    SUBCASE("unit flux carries total mass |Gamma_1| = a+b") {
        BoundaryField one = BoundaryField::from_function(g, [](double, double) { return 1.0; });
        ScalarField load = neumann_load(g, one);
        double total = g.free_weights().dot(load.values);
        CHECK(std::abs(total - 2.0) < g.hx() + g.hy());
    }

    SUBCASE("indicator data stays local") {
        BoundaryField e(g);
        e.values[3] = 1.0;
        ScalarField load = neumann_load(g, e);
        int hit = g.free_index(g.gamma1_node(3));
        for (int d = 0; d < g.n_free(); ++d)
            if (d != hit) CHECK(load.values[d] == 0.0);
        CHECK(load.values[hit] != 0.0);
    }
}

TEST_CASE("boundary trace") {
    Grid g(1.0, 1.0, 11, 11);

    SUBCASE("restriction of f(x,y)=x") {
        ScalarField f = ScalarField::from_function(g, [](double x, double) { return x; });
        BoundaryField tr = boundary_trace(f);
        for (int k = 0; k < g.n_gamma1(); ++k) {
            int id = g.gamma1_node(k);
            int i = id % g.nx(), j = id / g.nx();
            if (i == g.nx() - 1)
                CHECK(tr.values[k] == doctest::Approx(1.0));
            else
                CHECK(tr.values[k] == doctest::Approx(g.x(i)));
            (void)j;
        }
    }

    SUBCASE("zero field, zero trace") {
        ScalarField f(g);
        CHECK(boundary_trace(f).values.norm() == 0.0);
    }
}

TEST_CASE("inner products and norms") {
    Grid g(1.0, 1.0, 21, 21);
    ScalarField f = ScalarField::from_function(g, [](double x, double y) { return x + y; });
    CHECK(norm_omega(f) == doctest::Approx(std::sqrt(inner_product_omega(f, f))));
    BoundaryField bf = BoundaryField::from_function(g, [](double x, double y) { return x - y; });
    CHECK(norm_gamma1(bf) == doctest::Approx(std::sqrt(inner_product_gamma1(bf, bf))));
}

TEST_CASE("invalid grid parameters rejected") {
    CHECK_THROWS_AS(Grid(1.0, 1.0, 2, 5), config_error);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 5, 5), config_error);
}
