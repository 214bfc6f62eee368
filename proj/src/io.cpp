#include "heatctl/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace heatctl {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& field) {
    const Grid& g = *field.grid;
    std::ofstream out = open_out(path);
    out << "x,y,value\n";
    for (int id = 0; id < g.n_nodes(); ++id) {
        int i = id % g.nx(), j = id / g.nx();
        int d = g.free_index(id);
        double v = d < 0 ? 0.0 : field.values[d];
        out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ','
            << format_double(v) << '\n';
    }
}

void write_trace_csv(const std::string& path, const SimTrace& trace) {
    std::ofstream out = open_out(path);
    out << "t,norm_w,norm_v,u_v,y_v";
    if (trace.observer) out << ",norm_err_w,norm_err_v";
    out << '\n';
    for (const TraceRow& r : trace.rows) {
        out << format_double(r.t) << ',' << format_double(r.norm_w) << ','
            << format_double(r.norm_v) << ',' << format_double(r.u_v) << ','
            << format_double(r.y_v);
        if (trace.observer) out << ',' << format_double(r.err_w) << ',' << format_double(r.err_v);
        out << '\n';
    }
}

void write_run_outputs(const std::string& out_dir, const SimTrace& trace) {
    std::filesystem::create_directories(out_dir);
    write_trace_csv(out_dir + "/trace.csv", trace);
    for (const auto& [step, field] : trace.snapshots)
        write_field_csv(out_dir + "/w_t" + std::to_string(step) + ".csv", field);

    std::ofstream plot = open_out(out_dir + "/plot.gp");
    plot << "set datafile separator ','\n"
            "set key autotitle columnhead\n"
            "set xlabel 't'\n"
            "set terminal pngcairo size 900,600\n"
            "set output 'norms.png'\n"
            "plot 'trace.csv' using 1:2 with lines title 'norm_w', \\\n"
            "     'trace.csv' using 1:3 with lines title 'norm_v'\n"
            "set output 'log_norm.png'\n"
            "set logscale y\n"
            "plot 'trace.csv' using 1:2 with lines title 'norm_w'\n";
    if (trace.observer)
        plot << "set output 'error.png'\n"
                "plot 'trace.csv' using 1:6 with lines title 'norm_err_w', \\\n"
                "     'trace.csv' using 1:7 with lines title 'norm_err_v'\n";
    if (!trace.snapshots.empty())
        plot << "unset logscale y\n"
                "set output 'w_final.png'\n"
                "set dgrid3d\n"
                "splot 'w_t" << trace.snapshots.back().first
             << ".csv' using 1:2:3 with pm3d title 'w'\n";
}

void write_gain_csv(const std::string& path, const ControllerSynthesis* ctrl,
                    const ObserverSynthesis* obs) {
    std::ofstream out = open_out(path);
    out << "kind,index,value\n";
    auto row = [&](const std::string& kind, int idx, double v) {
        out << kind << ',' << idx << ',' << format_double(v) << '\n';
    };
    if (ctrl) {
        row("mu", 0, ctrl->basis->mu);
        row("alpha", 0, ctrl->alpha);
        for (int k = 0; k < ctrl->l_n.size(); ++k) row("l", k + 1, ctrl->l_n[k]);
        for (int k = 0; k < ctrl->p.values.size(); ++k) row("p", k, ctrl->p.values[k]);
    }
    if (obs) {
        row("mu", 0, obs->basis->mu);
        row("beta", 0, obs->beta);
        for (int k = 0; k < obs->k_n.size(); ++k) row("k", k + 1, obs->k_n[k]);
        for (int k = 0; k < obs->q.values.size(); ++k) row("q", k, obs->q.values[k]);
    }
}

GainFile load_gain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open gain file: " + path);
    GainFile gf;
    std::string line;
    std::getline(in, line);  // header
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string kind, idx_s, val_s;
        if (!std::getline(ss, kind, ',') || !std::getline(ss, idx_s, ',') ||
            !std::getline(ss, val_s))
            throw config_error(path + ":" + std::to_string(lineno) + ": malformed gain row");
        double v = std::stod(val_s);
        if (kind == "mu") gf.mu = v;
        else if (kind == "alpha") gf.alpha = v;
        else if (kind == "beta") gf.beta = v;
        else if (kind == "l") gf.l.push_back(v);
        else if (kind == "k") gf.k.push_back(v);
        else if (kind == "p") gf.p.push_back(v);
        else if (kind == "q") gf.q.push_back(v);
        else
            throw config_error(path + ":" + std::to_string(lineno) + ": unknown kind '" +
                               kind + "'");
    }
    return gf;
}

}  // namespace heatctl
