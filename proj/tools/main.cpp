// heatctl: synthesis and simulation front end.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "heatctl/config.hpp"
#include "heatctl/io.hpp"
#include "heatctl/verify.hpp"

namespace {

using namespace heatctl;

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::string gain_path;
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.config_path, "configuration file (key = value lines)");
    app->add_option("--preset", args.preset_name, "named preset (paper-fig4, paper-fig2b)");
    app->add_option("--out", args.out_dir, "output directory");
    app->add_option("--set", args.overrides, "override key=value (repeatable)")
        ->take_all();
}

SimConfig resolve_config(const CommonArgs& args) {
    KeyValues kv;
    if (!args.preset_name.empty()) kv = preset(args.preset_name);
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw config_error("cannot open config file: " + args.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        KeyValues file_kv = parse_config_text(ss.str());
        kv.insert(kv.end(), file_kv.begin(), file_kv.end());
    }
    if (args.preset_name.empty() && args.config_path.empty())
        throw config_error("provide --config and/or --preset");
    for (const std::string& ov : args.overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw config_error("--set expects key=value, got '" + ov + "'");
        kv.emplace_back(ov.substr(0, eq), ov.substr(eq + 1));
    }
    SimConfig cfg = config_from_pairs(kv);
    if (!args.gain_path.empty()) {
        GainFile gf = load_gain_csv(args.gain_path);
        if (!gf.l.empty()) cfg.gains = gf.l;
        if (!gf.k.empty()) cfg.obs_gains = gf.k;
        if (!gf.p.empty()) cfg.p_values = gf.p;
        if (!gf.q.empty()) cfg.q_values = gf.q;
        if (gf.alpha) cfg.alpha = *gf.alpha;
        if (gf.beta) cfg.beta = *gf.beta;
    }
    return cfg;
}

int cmd_eigs(const CommonArgs& args) {
    SimConfig cfg = resolve_config(args);
    Problem prob = build_problem(cfg);

    // analytic spectrum for the rectangle, matched by value
    std::vector<double> analytic;
    for (int k = 1; k <= 8; ++k)
        for (int l = 1; l <= 8; ++l)
            analytic.push_back(analytic_eigenpair(*prob.grid, k, l).lambda);
    std::sort(analytic.begin(), analytic.end(), std::greater<>());

    std::cout << "scheme: " << scheme_name(cfg.scheme) << ", grid " << cfg.nx << "x" << cfg.ny
              << ", mu = " << cfg.mu << ", N = " << prob.basis.n_trunc << "\n";
    std::cout << std::setw(5) << "j" << std::setw(16) << "lambda" << std::setw(16)
              << "lambda_exact" << std::setw(16) << "lambda+mu" << std::setw(12) << "residual"
              << "\n";
    for (size_t j = 0; j < prob.basis.pairs.size(); ++j) {
        const EigenPair& ep = prob.basis.pairs[j];
        std::cout << std::setw(5) << j + 1 << std::setw(16) << std::setprecision(8)
                  << ep.lambda << std::setw(16) << analytic[j] << std::setw(16)
                  << ep.lambda + cfg.mu << std::setw(12) << std::scientific
                  << std::setprecision(2) << ep.residual << std::defaultfloat << "\n";
    }
    return 0;
}

int cmd_synthesize(const CommonArgs& args) {
    SimConfig cfg = resolve_config(args);
    Problem prob = build_problem(cfg);
    const TruncationBasis& basis = prob.basis;

    std::cout << "N = " << basis.n_trunc << " unstable mode(s), mu = " << cfg.mu << "\n";
    for (int j = 1; j <= static_cast<int>(basis.pairs.size()); ++j)
        std::cout << "  lambda_" << j << " = " << std::setprecision(8) << basis.lambda(j)
                  << "  (lambda+mu = " << basis.lambda(j) + cfg.mu << ")\n";
    if (basis.n_trunc == 0) {
        std::cout << "plant is already exponentially stable (no unstable modes); "
                     "no gains needed\n";
        return 0;
    }

    ControllerSynthesis ctrl = make_controller(prob, cfg);
    std::cout << "controller (alpha = " << cfg.alpha << "):\n";
    std::cout << "  F_N = " << ctrl.f_n.transpose() << "\n";
    std::cout << "  L_N = " << ctrl.l_n << "\n";
    std::cout << "  closed truncated spectrum abscissa = " << ctrl.certificate.abscissa
              << (ctrl.certificate.hurwitz ? "  [Hurwitz]" : "  [NOT Hurwitz]") << "\n";

    ObserverSynthesis obs = make_observer(prob, cfg);
    std::cout << "observer (beta = " << cfg.beta << "):\n";
    std::cout << "  J_N = " << obs.j_n << "\n";
    std::cout << "  K_N = " << obs.k_n.transpose() << "\n";
    std::cout << "  closed truncated spectrum abscissa = " << obs.certificate.abscissa
              << (obs.certificate.hurwitz ? "  [Hurwitz]" : "  [NOT Hurwitz]") << "\n";

    std::filesystem::create_directories(args.out_dir);
    write_gain_csv(args.out_dir + "/gains.csv", &ctrl, &obs);
    std::cout << "gains written to " << args.out_dir << "/gains.csv\n";
    return 0;
}

int run_and_report(SimConfig cfg, const std::string& out_dir) {
    if (cfg.snapshot_every == 0)
        cfg.snapshot_every = std::max(1, static_cast<int>(std::llround(
                                             cfg.t_end / cfg.dt)));  // first + last
    SimTrace trace = run(cfg);
    write_run_outputs(out_dir, trace);
    const TraceRow& first = trace.rows.front();
    const TraceRow& last = trace.rows.back();
    std::cout << "mode " << mode_name(cfg.mode) << ": ||w(0)|| = " << first.norm_w
              << ", ||w(" << last.t << ")|| = " << last.norm_w << "\n";
    if (trace.observer)
        std::cout << "  error norm: " << std::hypot(first.err_w, first.err_v) << " -> "
                  << std::hypot(last.err_w, last.err_v) << "\n";
    try {
        double rate = estimate_decay_rate(trace, cfg.t_fit);
        std::cout << "  estimated decay rate over [" << cfg.t_fit << ", " << last.t
                  << "]: " << rate << "\n";
    } catch (const config_error&) {
        // too few samples; skip the fit
    }
    std::cout << "trace and plot script written to " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    return run_and_report(resolve_config(args), args.out_dir);
}

int cmd_observe(const CommonArgs& args) {
    SimConfig cfg = resolve_config(args);
    cfg.mode = SimMode::Observer;
    return run_and_report(cfg, args.out_dir);
}

int cmd_verify(const CommonArgs& args) {
    SimConfig cfg = resolve_config(args);
    return run_verify(cfg, std::cout) ? 0 : 2;
}

int cmd_sweep(const CommonArgs& args, const std::string& key,
              const std::string& values_csv) {
    std::istringstream ss(values_csv);
    std::string value;
    int rc = 0;
    while (std::getline(ss, value, ';')) {
        CommonArgs one = args;
        one.overrides.push_back(key + "=" + value);
        std::string dir = args.out_dir + "/" + key + "_" + value;
        std::cout << "--- sweep " << key << " = " << value << " ---\n";
        rc = std::max(rc, run_and_report(resolve_config(one), dir));
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary stabilization and observation of the unstable heat equation"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string sweep_key, sweep_values;

    CLI::App* eigs = app.add_subcommand("eigs", "eigenvalue table of the discrete Laplacian");
    add_common(eigs, args);
    CLI::App* synth = app.add_subcommand("synthesize", "build controller and observer gains");
    add_common(synth, args);
    CLI::App* sim = app.add_subcommand("simulate", "time-integrate the configured system");
    add_common(sim, args);
    sim->add_option("--gains", args.gain_path, "gain CSV produced by `synthesize`");
    CLI::App* obs = app.add_subcommand("observe", "plant + observer simulation");
    add_common(obs, args);
    obs->add_option("--gains", args.gain_path, "gain CSV produced by `synthesize`");
    CLI::App* ver = app.add_subcommand("verify", "run the analytic invariant suite");
    add_common(ver, args);
    CLI::App* sweep = app.add_subcommand("sweep", "repeat `simulate` over parameter values");
    add_common(sweep, args);
    sweep->add_option("--key", sweep_key, "config key to sweep")->required();
    sweep->add_option("--values", sweep_values, "semicolon-separated values")->required();

    try {
        app.parse(argc, argv);
        if (eigs->parsed()) return cmd_eigs(args);
        if (synth->parsed()) return cmd_synthesize(args);
        if (sim->parsed()) return cmd_simulate(args);
        if (obs->parsed()) return cmd_observe(args);
        if (ver->parsed()) return cmd_verify(args);
        if (sweep->parsed()) return cmd_sweep(args, sweep_key, sweep_values);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const heatctl::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const heatctl::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
