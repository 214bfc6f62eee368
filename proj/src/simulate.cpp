#include "heatctl/simulate.hpp"

#include <cmath>
#include <complex>
#include <iostream>

#include "heatctl/expr.hpp"

namespace heatctl {

void SimConfig::validate() const {
    if (dt <= 0.0) throw config_error("config: dt must be positive");
    if (t_end < dt) throw config_error("config: t_end must be at least dt");
    if (mu <= 0.0) throw config_error("config: mu must be positive");
    if (mode == SimMode::ClosedLoop && alpha <= 0.0)
        throw config_error("config: alpha must be positive in closed-loop mode");
    if (mode == SimMode::Observer && beta <= 0.0)
        throw config_error("config: beta must be positive in observer mode");
    if (n_modes < 1) throw config_error("config: n_modes must be >= 1");
    if (snapshot_every < 0) throw config_error("config: snapshot_every must be >= 0");
}

TimeStepper::TimeStepper(const LinearOperator& op, double mu, double dt)
    : op_(&op), mu_(mu), dt_(dt) {
    if (dt <= 0.0) throw config_error("TimeStepper: dt must be positive");
    Eigen::SparseMatrix<double> eye(op.matrix.rows(), op.matrix.cols());
    eye.setIdentity();
    Eigen::SparseMatrix<double> sys = eye - dt * (op.matrix + mu * eye);
    lu_.compute(sys);
    if (lu_.info() != Eigen::Success)
        throw numerical_error("TimeStepper: factorization of the implicit system failed");
}

Eigen::VectorXd TimeStepper::solve_diffusion(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success)
        throw numerical_error("TimeStepper: implicit solve failed");
    return x;
}

void TimeStepper::check_finite(const SimState& state) const {
    if (!state.w.values.allFinite() || !state.v.values.allFinite())
        throw numerical_error("TimeStepper: non-finite state at t=" + std::to_string(state.t));
}

void TimeStepper::step_open_loop(SimState& state, const BoundaryField& u) const {
    const Grid& g = *op_->grid;
    ScalarField load = neumann_load(g, u, op_->scheme);
    state.w.values = solve_diffusion(state.w.values + dt_ * load.values);
    state.v = u;
    state.t += dt_;
    check_finite(state);
}

double TimeStepper::step_closed_loop(SimState& state, const ControllerSynthesis& ctrl) const {
    const Grid& g = *op_->grid;
    // phi_v is the static elliptic slave of the current v
    ScalarField phi_v = ctrl.solver->solve_neumann(state.v);
    double u_v = -(inner_product_omega(state.w, ctrl.kernel) -
                   inner_product_omega(phi_v, ctrl.kernel));
    // implicit decay on the actuator ODE, then implicit diffusion
    state.v.values = (state.v.values + dt_ * u_v * ctrl.p.values) / (1.0 + ctrl.alpha * dt_);
    ScalarField load = neumann_load(g, state.v, op_->scheme);
    state.w.values = solve_diffusion(state.w.values + dt_ * load.values);
    state.t += dt_;
    check_finite(state);
    return u_v;
}

double TimeStepper::step_observer(SimState& state, const ObserverSynthesis& obs,
                                  const BoundaryField& u) const {
    const Grid& g = *op_->grid;
    const Eigen::VectorXd& wg = g.gamma1_weights();
    // innovation from the current extended states
    double e = wg.dot(state.v.values - state.v_hat.values);

    Eigen::VectorXd tw = boundary_trace(state.w).values;
    Eigen::VectorXd tw_hat = boundary_trace(state.w_hat).values;
    double denom = 1.0 + obs.beta * dt_;
    state.v.values =
        (state.v.values + dt_ * obs.q.values.cwiseProduct(tw)) / denom;
    state.v_hat.values =
        (state.v_hat.values +
         dt_ * (obs.q.values.cwiseProduct(tw_hat) - e * obs.l_trace.values)) /
        denom;

    Eigen::VectorXd load = neumann_load(g, u, op_->scheme).values;
    state.w.values = solve_diffusion(state.w.values + dt_ * load);
    state.w_hat.values =
        solve_diffusion(state.w_hat.values + dt_ * (load + e * obs.k_field.values));
    state.t += dt_;
    check_finite(state);
    if (!state.w_hat.values.allFinite() || !state.v_hat.values.allFinite())
        throw numerical_error("TimeStepper: non-finite observer state at t=" +
                              std::to_string(state.t));
    return e;
}

Problem build_problem(const SimConfig& cfg) {
    cfg.validate();
    Problem prob;
    prob.grid = std::make_unique<Grid>(cfg.a, cfg.b, cfg.nx, cfg.ny);
    prob.op = assemble_laplacian(*prob.grid, cfg.scheme);
    int m = std::min(cfg.n_modes, prob.grid->n_free());
    prob.basis = build_truncation(compute_eigenpairs(prob.op, m), cfg.mu);
    return prob;
}

namespace {

std::optional<BoundaryField> shape_from_expr(const Grid& grid, const std::string& expr) {
    if (expr.empty()) return std::nullopt;
    return BoundaryField::from_function(grid, parse_expression(expr));
}

std::optional<std::vector<std::complex<double>>> complex_targets(
    const std::vector<double>& t) {
    if (t.empty()) return std::nullopt;
    std::vector<std::complex<double>> out;
    for (double v : t) out.emplace_back(v, 0.0);
    return out;
}

}  // namespace

namespace {

std::optional<BoundaryField> shape_from_values(const Grid& grid,
                                               const std::vector<double>& vals) {
    if (vals.empty()) return std::nullopt;
    if (static_cast<int>(vals.size()) != grid.n_gamma1())
        throw config_error("shape values do not match the grid's Gamma_1 node count");
    return BoundaryField(grid, Eigen::Map<const Eigen::VectorXd>(
                                   vals.data(), static_cast<long>(vals.size())));
}

}  // namespace

ControllerSynthesis make_controller(const Problem& prob, const SimConfig& cfg) {
    ControllerOptions opts;
    opts.p = shape_from_values(*prob.grid, cfg.p_values);
    if (!opts.p) opts.p = shape_from_expr(*prob.grid, cfg.p_expr);
    if (!cfg.gains.empty()) opts.gains = cfg.gains;
    opts.targets = complex_targets(cfg.targets);
    opts.sigma = cfg.sigma;
    return build_controller(prob.op, prob.basis, cfg.alpha, opts);
}

ObserverSynthesis make_observer(const Problem& prob, const SimConfig& cfg) {
    ObserverOptions opts;
    opts.q = shape_from_values(*prob.grid, cfg.q_values);
    if (!opts.q) opts.q = shape_from_expr(*prob.grid, cfg.q_expr);
    if (!cfg.obs_gains.empty()) opts.gains = cfg.obs_gains;
    opts.targets = complex_targets(cfg.targets);
    opts.sigma = cfg.sigma;
    return build_observer(prob.op, prob.basis, cfg.beta, opts);
}

SimTrace run(const SimConfig& cfg) {
    Problem prob = build_problem(cfg);
    const Grid& grid = *prob.grid;

    SimState state;
    state.w = ScalarField::from_function(grid, parse_expression(cfg.w0));
    state.v = BoundaryField::from_function(grid, parse_expression(cfg.v0));
    BoundaryField u_input = BoundaryField::from_function(grid, parse_expression(cfg.u));

    ControllerSynthesis ctrl;
    ObserverSynthesis obs;
    if (cfg.mode == SimMode::ClosedLoop) ctrl = make_controller(prob, cfg);
    if (cfg.mode == SimMode::Observer) {
        obs = make_observer(prob, cfg);
        state.w_hat = ScalarField::from_function(grid, parse_expression(cfg.w_hat0));
        state.v_hat = BoundaryField::from_function(grid, parse_expression(cfg.v_hat0));
    }

    TimeStepper stepper(prob.op, cfg.mu, cfg.dt);
    const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));

    SimTrace trace;
    trace.observer = (cfg.mode == SimMode::Observer);

    auto record = [&](double u_v) {
        TraceRow row;
        row.t = state.t;
        row.norm_w = norm_omega(state.w);
        row.norm_v = norm_gamma1(state.v);
        row.u_v = u_v;
        row.y_v = grid.gamma1_weights().dot(state.v.values);
        if (trace.observer) {
            ScalarField ew(grid, state.w.values - state.w_hat.values);
            BoundaryField ev(grid, state.v.values - state.v_hat.values);
            row.err_w = norm_omega(ew);
            row.err_v = norm_gamma1(ev);
        }
        trace.rows.push_back(row);
    };
    auto snapshot = [&](int step) {
        if (cfg.snapshot_every > 0 &&
            (step % cfg.snapshot_every == 0 || step == n_steps))
            trace.snapshots.emplace_back(step, state.w);
    };

    record(0.0);
    snapshot(0);
    for (int step = 1; step <= n_steps; ++step) {
        double u_v = 0.0;
        switch (cfg.mode) {
            case SimMode::OpenLoop: stepper.step_open_loop(state, u_input); break;
            case SimMode::ClosedLoop: u_v = stepper.step_closed_loop(state, ctrl); break;
            case SimMode::Observer: stepper.step_observer(state, obs, u_input); break;
        }
        record(u_v);
        snapshot(step);
    }
    trace.grid = std::shared_ptr<const Grid>(std::move(prob.grid));
    return trace;
}

double estimate_decay_rate(const SimTrace& trace, double t_start) {
    std::vector<double> ts, logs;
    bool clamped = false;
    for (const TraceRow& row : trace.rows) {
        if (row.t < t_start) continue;
        double n = trace.observer ? std::hypot(row.err_w, row.err_v) : row.norm_w;
        if (n < 1e-30) {
            n = 1e-30;
            clamped = true;
        }
        ts.push_back(row.t);
        logs.push_back(std::log(n));
    }
    if (clamped) std::cerr << "warning: norm underflow clamped at 1e-30 in decay fit\n";
    if (ts.size() < 5)
        throw config_error("estimate_decay_rate: fewer than 5 samples past t_start");

    double n = static_cast<double>(ts.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
    }
    double slope = (n * stl - st * sl) / (n * stt - st * st);
    return -slope;
}

}  // namespace heatctl
