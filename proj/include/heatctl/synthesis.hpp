// Gain synthesis: shape functions, truncated matrices, pole placement,
// controller and observer assembly, stability certificates.
#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "heatctl/elliptic.hpp"

namespace heatctl {

struct HurwitzCertificate {
    bool hurwitz = false;
    double abscissa = 0.0;  // max real part of the spectrum
};

HurwitzCertificate verify_hurwitz(const Eigen::MatrixXd& m, double margin = 0.0);

// Boundary shape function with <p, phi_j>_{Gamma_1} != 0 for j <= N.  A seed
// that already satisfies the condition is returned unchanged; otherwise the
// greedy construction runs: start from trace(phi_1) and add gamma*trace(phi_j)
// for each failing j, halving gamma until every product stays nonzero.
BoundaryField construct_shape(const TruncationBasis& basis,
                              const std::optional<BoundaryField>& seed = std::nullopt);

// f_k = <solve_neumann(p), phi_k>_Omega, k = 1..N (the modal input vector).
Eigen::VectorXd compute_fn(const TruncationBasis& basis, const BoundaryField& p,
                           const HelmholtzSolver& solver);

// J_q entries via the direct route -<q, trace(xi_{phi_j})>_{Gamma_1}; for the
// ghost-point scheme the adjoint route <phi_j, eta_q>_Omega is cross-checked.
Eigen::RowVectorXd compute_jn(const TruncationBasis& basis, const BoundaryField& q,
                              const HelmholtzSolver& solver);

// Single-input pole placement for diagonal Lambda with distinct entries and a
// fully nonzero input vector.  Targets must be closed under conjugation with
// negative real parts.
Eigen::RowVectorXd place_poles(const Eigen::VectorXd& lambda_diag, const Eigen::VectorXd& f,
                               const std::vector<std::complex<double>>& targets);

// Dual problem: K with Lambda + K*J having the target spectrum.
Eigen::VectorXd place_observer_gain(const Eigen::VectorXd& lambda_diag,
                                    const Eigen::RowVectorXd& j,
                                    const std::vector<std::complex<double>>& targets);

// Determinant of the Kalman controllability matrix [B, Lambda B, ..., Lambda^{N-1} B].
double controllability_det(const Eigen::VectorXd& lambda_diag, const Eigen::VectorXd& b);

struct ControllerOptions {
    std::optional<BoundaryField> p;                     // shape seed
    std::optional<std::vector<double>> gains;           // explicit l_1..l_N
    std::optional<std::vector<std::complex<double>>> targets;
    double sigma = 1.0;  // default targets: -(lambda_j + mu) - sigma
};

struct ControllerSynthesis {
    const TruncationBasis* basis = nullptr;
    double alpha = 0.0;
    BoundaryField p;
    Eigen::VectorXd lambda_n;   // diag of Lambda_N = lambda_j + mu
    Eigen::VectorXd f_n;
    Eigen::RowVectorXd l_n;
    ScalarField kernel;         // sum l_k phi_k; feedback is u_v = -<w - phi_v, kernel>
    std::shared_ptr<HelmholtzSolver> solver;  // shift -alpha-mu, realizes S and phi_v
    HurwitzCertificate certificate;           // of Lambda_N + F_N L_N
};

struct ObserverOptions {
    std::optional<BoundaryField> q;
    std::optional<std::vector<double>> gains;  // explicit k_1..k_N
    std::optional<std::vector<std::complex<double>>> targets;
    double sigma = 1.0;
};

struct ObserverSynthesis {
    const TruncationBasis* basis = nullptr;
    double beta = 0.0;
    BoundaryField q;
    Eigen::VectorXd lambda_n;
    Eigen::RowVectorXd j_n;
    Eigen::VectorXd k_n;
    ScalarField k_field;    // sum k_j phi_j (innovation injection into w-hat)
    BoundaryField l_trace;  // -sum k_j q xi_j on Gamma_1 (injection into v-hat is -l_trace*e)
    std::shared_ptr<HelmholtzSolver> solver;  // shift -beta-mu
    HurwitzCertificate certificate;           // of Lambda_N + K_N J_N
};

ControllerSynthesis build_controller(const LinearOperator& op, const TruncationBasis& basis,
                                     double alpha, const ControllerOptions& opts = {});

ObserverSynthesis build_observer(const LinearOperator& op, const TruncationBasis& basis,
                                 double beta, const ObserverOptions& opts = {});

// --- Dense block assemblies of the semi-discrete generators (small grids;
// --- used by the verification suite and the matrix-exponential oracle).

// B as a matrix: v -> neumann_load(v)
Eigen::MatrixXd load_matrix(const Grid& grid, BoundaryScheme scheme);
// B*: free dofs -> Gamma_1 values
Eigen::MatrixXd trace_matrix(const Grid& grid);
// S: g -> -phi_g, the Sylvester solution
Eigen::MatrixXd sylvester_matrix(const ControllerSynthesis& ctrl);
// P = -Q B* (beta + mu + L)^{-1}
Eigen::MatrixXd observer_p_matrix(const ObserverSynthesis& obs);

// Closed-loop generator of the (w, v) system under the synthesized feedback.
Eigen::MatrixXd closed_loop_matrix(const LinearOperator& op, const ControllerSynthesis& ctrl);
// Generator of the autonomous observer-error system (w~, v~).
Eigen::MatrixXd observer_error_matrix(const LinearOperator& op, const ObserverSynthesis& obs);

}  // namespace heatctl
