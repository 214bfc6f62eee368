// Time integration of the open-loop plant, the closed-loop system, and the
// plant-observer pair; trace recording and decay-rate estimation.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heatctl/synthesis.hpp"

namespace heatctl {

enum class SimMode { OpenLoop, ClosedLoop, Observer };

struct SimConfig {
    double a = 1.0, b = 1.0;
    int nx = 21, ny = 21;
    BoundaryScheme scheme = BoundaryScheme::GhostPoint;
    double mu = 6.0, alpha = 3.0, beta = 3.0;
    double dt = 0.05, t_end = 4.0;
    int n_modes = 8;  // eigenpairs computed for truncation/resonance checks
    SimMode mode = SimMode::ClosedLoop;

    std::string w0 = "0", v0 = "0", u = "0";
    std::string w_hat0 = "0", v_hat0 = "0";
    std::string p_expr, q_expr;  // empty -> greedy shape construction

    std::vector<double> gains;    // explicit l_1..l_N (empty -> pole placement)
    std::vector<double> targets;  // real target poles (empty -> mirror-and-shift)
    double sigma = 1.0;
    std::vector<double> p_values, q_values;  // raw shapes (gain-file reload)
    std::vector<double> obs_gains;           // explicit k_1..k_N

    int snapshot_every = 0;  // steps between field snapshots; 0 disables
    double t_fit = 1.0;      // decay-rate fit window start

    void validate() const;
};

struct SimState {
    ScalarField w;
    BoundaryField v;
    ScalarField w_hat;    // observer mode only
    BoundaryField v_hat;  // observer mode only
    double t = 0.0;
};

struct TraceRow {
    double t = 0.0;
    double norm_w = 0.0, norm_v = 0.0;
    double u_v = 0.0, y_v = 0.0;
    double err_w = 0.0, err_v = 0.0;  // observer mode
};

struct SimTrace {
    bool observer = false;
    std::vector<TraceRow> rows;
    std::vector<std::pair<int, ScalarField>> snapshots;  // (step index, w)
    std::shared_ptr<const Grid> grid;  // keeps snapshot fields valid
};

// One backward-Euler factorization of (I - dt (L + mu)), shared by every step.
class TimeStepper {
public:
    TimeStepper(const LinearOperator& op, double mu, double dt);

    double dt() const { return dt_; }
    const Grid& grid() const { return *op_->grid; }

    void step_open_loop(SimState& state, const BoundaryField& u) const;
    // returns the applied scalar control u_v
    double step_closed_loop(SimState& state, const ControllerSynthesis& ctrl) const;
    // returns the innovation y_v - y_hat_v
    double step_observer(SimState& state, const ObserverSynthesis& obs,
                         const BoundaryField& u) const;

private:
    Eigen::VectorXd solve_diffusion(const Eigen::VectorXd& rhs) const;
    void check_finite(const SimState& state) const;

    const LinearOperator* op_;
    double mu_, dt_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

// Grid + operator + truncation basis owned together (the basis holds fields on
// the grid, so the grid is heap-pinned).
struct Problem {
    std::unique_ptr<Grid> grid;
    LinearOperator op;
    TruncationBasis basis;
};

Problem build_problem(const SimConfig& cfg);

ControllerSynthesis make_controller(const Problem& prob, const SimConfig& cfg);
ObserverSynthesis make_observer(const Problem& prob, const SimConfig& cfg);

SimTrace run(const SimConfig& cfg);

// -slope of the least-squares fit of log(norm) over [t_start, end of trace];
// uses the state norm, or the error norm for observer traces.
double estimate_decay_rate(const SimTrace& trace, double t_start);

}  // namespace heatctl
