// CSV serialization for fields, traces, and gain files, plus plot scripts.
#pragma once

#include <optional>
#include <string>

#include "heatctl/simulate.hpp"

namespace heatctl {

// header `x,y,value`, row-major node order, 15 significant digits
void write_field_csv(const std::string& path, const ScalarField& field);

// header `t,norm_w,norm_v,u_v,y_v[,norm_err_w,norm_err_v]`
void write_trace_csv(const std::string& path, const SimTrace& trace);

// trace + snapshots + gnuplot script into out_dir
void write_run_outputs(const std::string& out_dir, const SimTrace& trace);

struct GainFile {
    std::optional<double> mu, alpha, beta;
    std::vector<double> l;  // controller gains
    std::vector<double> k;  // observer gains
    std::vector<double> p;  // shape values per Gamma_1 node
    std::vector<double> q;
};

void write_gain_csv(const std::string& path, const ControllerSynthesis* ctrl,
                    const ObserverSynthesis* obs);
GainFile load_gain_csv(const std::string& path);

std::string format_double(double v);  // %.15g

}  // namespace heatctl
