// Rectangle grid with mixed Dirichlet/Neumann boundary and the discrete Laplacian.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <vector>

namespace heatctl {

// Configuration/usage errors vs. numerical failures; the CLI maps these to exit codes.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeTag { Interior, Dirichlet, NeumannX, NeumannY, CornerNN };

enum class BoundaryScheme { GhostPoint, OneSided };

// Tensor-product grid on [0,a]x[0,b].  Dirichlet edges are x=0 and y=0; the
// Neumann (control) edges are x=a and y=b.  Mixed corners (a,0) and (0,b) are
// Dirichlet; the corner (a,b) belongs to Gamma_1 and is counted once.
class Grid {
public:
    Grid(double a, double b, int nx, int ny);

    double a() const { return a_; }
    double b() const { return b_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    int node(int i, int j) const { return j * nx_ + i; }
    double x(int i) const { return i * hx_; }
    double y(int j) const { return j * hy_; }
    NodeTag tag(int i, int j) const { return tags_[node(i, j)]; }

    int n_nodes() const { return nx_ * ny_; }
    int n_free() const { return static_cast<int>(free_nodes_.size()); }
    int n_gamma1() const { return static_cast<int>(gamma1_nodes_.size()); }

    // node id -> free dof index, -1 for Dirichlet nodes
    int free_index(int node_id) const { return free_index_[node_id]; }
    int free_node(int dof) const { return free_nodes_[dof]; }

    // Gamma_1 enumeration: x=a edge from j=1 upward (corner (a,b) last on that
    // edge), then y=b edge from i=1 to nx-2.
    int gamma1_node(int k) const { return gamma1_nodes_[k]; }

    // Trapezoid quadrature weight at every node (sums to a*b).
    double weight_node(int node_id) const { return w_node_[node_id]; }
    double weight_free(int dof) const { return w_node_[free_nodes_[dof]]; }
    // Gamma_1 trapezoid weight; the (a,b) corner carries (hx+hy)/2.
    double weight_gamma1(int k) const { return w_gamma1_[k]; }

    const Eigen::VectorXd& free_weights() const { return w_free_; }
    const Eigen::VectorXd& gamma1_weights() const { return w_gamma1_vec_; }

private:
    double a_, b_, hx_, hy_;
    int nx_, ny_;
    std::vector<NodeTag> tags_;
    std::vector<int> free_index_;
    std::vector<int> free_nodes_;
    std::vector<int> gamma1_nodes_;
    std::vector<double> w_node_;
    std::vector<double> w_gamma1_;
    Eigen::VectorXd w_free_;
    Eigen::VectorXd w_gamma1_vec_;
};

// Grid function on Omega, stored on the free (non-Dirichlet) dofs.
struct ScalarField {
    const Grid* grid = nullptr;
    Eigen::VectorXd values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(&g), values(Eigen::VectorXd::Zero(g.n_free())) {}
    ScalarField(const Grid& g, Eigen::VectorXd v);

    // value at node (i,j); zero on Dirichlet nodes
    double at(int i, int j) const;

    static ScalarField from_function(const Grid& g,
                                     const std::function<double(double, double)>& f);
};

// Grid function on Gamma_1.
struct BoundaryField {
    const Grid* grid = nullptr;
    Eigen::VectorXd values;

    BoundaryField() = default;
    explicit BoundaryField(const Grid& g)
        : grid(&g), values(Eigen::VectorXd::Zero(g.n_gamma1())) {}
    BoundaryField(const Grid& g, Eigen::VectorXd v);

    static BoundaryField from_function(const Grid& g,
                                       const std::function<double(double, double)>& f);
};

// Discrete Laplacian on the free dofs with the chosen Neumann treatment.
struct LinearOperator {
    const Grid* grid = nullptr;
    BoundaryScheme scheme = BoundaryScheme::GhostPoint;
    Eigen::SparseMatrix<double> matrix;
};

LinearOperator assemble_laplacian(const Grid& grid,
                                  BoundaryScheme scheme = BoundaryScheme::GhostPoint);

// Load vector realizing inhomogeneous Neumann data g on Gamma_1: solving
// (L - theta) f = -load imposes df/dnu = g.  The load is scheme-dependent;
// for the ghost-point scheme it is W^{-1} T^t W_Gamma g, which makes the
// discrete Green identities exact.
ScalarField neumann_load(const Grid& grid, const BoundaryField& g,
                         BoundaryScheme scheme = BoundaryScheme::GhostPoint);

BoundaryField boundary_trace(const ScalarField& f);

double inner_product_omega(const ScalarField& f, const ScalarField& g);
double inner_product_gamma1(const BoundaryField& f, const BoundaryField& g);
double norm_omega(const ScalarField& f);
double norm_gamma1(const BoundaryField& f);

}  // namespace heatctl
