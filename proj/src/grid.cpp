#include "heatctl/grid.hpp"

#include <cmath>

namespace heatctl {

Grid::Grid(double a, double b, int nx, int ny) : a_(a), b_(b), nx_(nx), ny_(ny) {
    if (a <= 0.0 || b <= 0.0) throw config_error("Grid: side lengths must be positive");
    if (nx < 3 || ny < 3) throw config_error("Grid: nx and ny must be >= 3");
    hx_ = a / (nx - 1);
    hy_ = b / (ny - 1);

    tags_.resize(nx_ * ny_);
    free_index_.assign(nx_ * ny_, -1);
    w_node_.assign(nx_ * ny_, 0.0);

    auto axis_weight = [](int i, int n, double h) {
        return (i == 0 || i == n - 1) ? h / 2.0 : h;
    };

    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            int id = node(i, j);
            NodeTag t;
            if (i == 0 || j == 0)
                t = NodeTag::Dirichlet;  // Dirichlet wins at the mixed corners
            else if (i == nx_ - 1 && j == ny_ - 1)
                t = NodeTag::CornerNN;
            else if (i == nx_ - 1)
                t = NodeTag::NeumannX;
            else if (j == ny_ - 1)
                t = NodeTag::NeumannY;
            else
                t = NodeTag::Interior;
            tags_[id] = t;
            w_node_[id] = axis_weight(i, nx_, hx_) * axis_weight(j, ny_, hy_);
            if (t != NodeTag::Dirichlet) {
                free_index_[id] = static_cast<int>(free_nodes_.size());
                free_nodes_.push_back(id);
            }
        }
    }

    // Gamma_1: x=a edge bottom to top (corner last), then y=b edge.
    for (int j = 1; j < ny_; ++j) {
        gamma1_nodes_.push_back(node(nx_ - 1, j));
        w_gamma1_.push_back(j == ny_ - 1 ? (hx_ + hy_) / 2.0 : hy_);
    }
    for (int i = 1; i < nx_ - 1; ++i) {
        gamma1_nodes_.push_back(node(i, ny_ - 1));
        w_gamma1_.push_back(hx_);
    }

    w_free_.resize(n_free());
    for (int d = 0; d < n_free(); ++d) w_free_[d] = w_node_[free_nodes_[d]];
    w_gamma1_vec_ = Eigen::Map<const Eigen::VectorXd>(w_gamma1_.data(),
                                                      static_cast<long>(w_gamma1_.size()));
}

ScalarField::ScalarField(const Grid& g, Eigen::VectorXd v) : grid(&g), values(std::move(v)) {
    if (values.size() != g.n_free())
        throw config_error("ScalarField: value count does not match free dof count");
}

double ScalarField::at(int i, int j) const {
    int d = grid->free_index(grid->node(i, j));
    return d < 0 ? 0.0 : values[d];
}

ScalarField ScalarField::from_function(const Grid& g,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int d = 0; d < g.n_free(); ++d) {
        int id = g.free_node(d);
        out.values[d] = f(g.x(id % g.nx()), g.y(id / g.nx()));
    }
    return out;
}

BoundaryField::BoundaryField(const Grid& g, Eigen::VectorXd v) : grid(&g), values(std::move(v)) {
    if (values.size() != g.n_gamma1())
        throw config_error("BoundaryField: value count does not match Gamma_1 node count");
}

BoundaryField BoundaryField::from_function(const Grid& g,
                                           const std::function<double(double, double)>& f) {
    BoundaryField out(g);
    for (int k = 0; k < g.n_gamma1(); ++k) {
        int id = g.gamma1_node(k);
        out.values[k] = f(g.x(id % g.nx()), g.y(id / g.nx()));
    }
    return out;
}

LinearOperator assemble_laplacian(const Grid& grid, BoundaryScheme scheme) {
    const int nx = grid.nx(), ny = grid.ny();
    const double ihx2 = 1.0 / (grid.hx() * grid.hx());
    const double ihy2 = 1.0 / (grid.hy() * grid.hy());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(grid.n_free()) * 5);

    auto add = [&](int row, int i, int j, double coef) {
        int d = grid.free_index(grid.node(i, j));
        if (d >= 0) trips.emplace_back(row, d, coef);  // Dirichlet neighbors contribute zero
    };

    for (int d = 0; d < grid.n_free(); ++d) {
        int id = grid.free_node(d);
        int i = id % nx, j = id / nx;
        double diag = 0.0;

        // x direction
        if (i == nx - 1) {
            if (scheme == BoundaryScheme::GhostPoint) {
                add(d, i - 1, j, 2.0 * ihx2);
                diag += -2.0 * ihx2;
            } else {
                add(d, i - 1, j, ihx2);
                diag += -ihx2;
            }
        } else {
            add(d, i - 1, j, ihx2);
            add(d, i + 1, j, ihx2);
            diag += -2.0 * ihx2;
        }

        // y direction
        if (j == ny - 1) {
            if (scheme == BoundaryScheme::GhostPoint) {
                add(d, i, j - 1, 2.0 * ihy2);
                diag += -2.0 * ihy2;
            } else {
                add(d, i, j - 1, ihy2);
                diag += -ihy2;
            }
        } else {
            add(d, i, j - 1, ihy2);
            add(d, i, j + 1, ihy2);
            diag += -2.0 * ihy2;
        }

        trips.emplace_back(d, d, diag);
    }

    LinearOperator op;
    op.grid = &grid;
    op.scheme = scheme;
    op.matrix.resize(grid.n_free(), grid.n_free());
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    return op;
}

ScalarField neumann_load(const Grid& grid, const BoundaryField& g, BoundaryScheme scheme) {
    if (g.grid != &grid) throw config_error("neumann_load: boundary field on a different grid");
    ScalarField load(grid);
    const int nx = grid.nx(), ny = grid.ny();
    for (int k = 0; k < grid.n_gamma1(); ++k) {
        int id = grid.gamma1_node(k);
        int d = grid.free_index(id);
        if (scheme == BoundaryScheme::GhostPoint) {
            // W^{-1} T^t W_Gamma: exact adjoint of the boundary trace
            load.values[d] += grid.weight_gamma1(k) * g.values[k] / grid.weight_node(id);
        } else {
            int i = id % nx, j = id / nx;
            if (i == nx - 1) load.values[d] += g.values[k] / grid.hx();
            if (j == ny - 1) load.values[d] += g.values[k] / grid.hy();
        }
    }
    return load;
}

BoundaryField boundary_trace(const ScalarField& f) {
    const Grid& g = *f.grid;
    BoundaryField out(g);
    for (int k = 0; k < g.n_gamma1(); ++k)
        out.values[k] = f.values[g.free_index(g.gamma1_node(k))];
    return out;
}

double inner_product_omega(const ScalarField& f, const ScalarField& g) {
    if (f.grid != g.grid) throw config_error("inner_product_omega: grid mismatch");
    return f.values.dot(f.grid->free_weights().cwiseProduct(g.values));
}

double inner_product_gamma1(const BoundaryField& f, const BoundaryField& g) {
    if (f.grid != g.grid) throw config_error("inner_product_gamma1: grid mismatch");
    return f.values.dot(f.grid->gamma1_weights().cwiseProduct(g.values));
}

double norm_omega(const ScalarField& f) { return std::sqrt(inner_product_omega(f, f)); }

double norm_gamma1(const BoundaryField& f) { return std::sqrt(inner_product_gamma1(f, f)); }

}  // namespace heatctl
