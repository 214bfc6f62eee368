#include "heatctl/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace heatctl {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(trim(item)));
        } catch (const std::exception&) {
            throw config_error("config: bad number '" + item + "' in key " + key);
        }
    }
    return out;
}

double parse_num(const std::string& s, const std::string& key) {
    try {
        size_t end;
        double v = std::stod(s, &end);
        if (trim(s.substr(end)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw config_error("config: bad number '" + s + "' for key " + key);
}

int parse_int(const std::string& s, const std::string& key) {
    double v = parse_num(s, key);
    int i = static_cast<int>(v);
    if (i != v) throw config_error("config: key " + key + " wants an integer, got " + s);
    return i;
}

const std::set<std::string> kKnownKeys = {
    "a",  "b",  "nx", "ny", "scheme", "mu",    "alpha",   "beta",    "dt",
    "t_end", "n_modes", "mode", "w0", "v0",    "u",       "w_hat0",  "v_hat0",
    "p",  "q",  "gains", "obs_gains", "targets", "sigma", "snapshot_every", "t_fit"};

const std::set<std::string> kRequiredKeys = {"mu", "dt", "t_end", "mode"};

}  // namespace

KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected `key = value`, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config line " + std::to_string(lineno) + ": empty key");
        kv.emplace_back(key, value);
    }
    return kv;
}

KeyValues preset(const std::string& name) {
    if (name == "paper-fig4") {
        // unit-square closed-loop run: mu=6, alpha=3, l1=15, h=dt=0.05
        return {{"a", "1"},        {"b", "1"},
                {"nx", "21"},      {"ny", "21"},
                {"scheme", "ghost"},
                {"mu", "6"},       {"alpha", "3"},
                {"beta", "3"},
                {"dt", "0.05"},    {"t_end", "4"},
                {"mode", "closed_loop"},
                {"w0", "x*sin(2*pi*y)"},
                {"v0", "0"},
                {"p", "sin(x)*sin(y)"},
                {"gains", "15"},
                {"t_fit", "1"}};
    }
    if (name == "paper-fig2b") {
        // companion open-loop (uncontrolled) run
        KeyValues kv = preset("paper-fig4");
        for (auto& [k, v] : kv)
            if (k == "mode") v = "open_loop";
        return kv;
    }
    throw config_error("unknown preset '" + name + "' (available: paper-fig4, paper-fig2b)");
}

std::vector<std::string> preset_names() { return {"paper-fig4", "paper-fig2b"}; }

SimConfig config_from_pairs(const KeyValues& kv) {
    std::set<std::string> seen;
    for (const auto& [k, v] : kv) {
        if (!kKnownKeys.count(k)) throw config_error("config: unknown key '" + k + "'");
        seen.insert(k);
    }
    std::vector<std::string> missing;
    for (const auto& k : kRequiredKeys)
        if (!seen.count(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string msg = "config: missing required keys:";
        for (const auto& k : missing) msg += " " + k;
        throw config_error(msg);
    }

    SimConfig cfg;
    for (const auto& [k, v] : kv) {
        if (k == "a") cfg.a = parse_num(v, k);
        else if (k == "b") cfg.b = parse_num(v, k);
        else if (k == "nx") cfg.nx = parse_int(v, k);
        else if (k == "ny") cfg.ny = parse_int(v, k);
        else if (k == "scheme") {
            if (v == "ghost") cfg.scheme = BoundaryScheme::GhostPoint;
            else if (v == "one-sided") cfg.scheme = BoundaryScheme::OneSided;
            else throw config_error("config: scheme must be 'ghost' or 'one-sided'");
        } else if (k == "mu") cfg.mu = parse_num(v, k);
        else if (k == "alpha") cfg.alpha = parse_num(v, k);
        else if (k == "beta") cfg.beta = parse_num(v, k);
        else if (k == "dt") cfg.dt = parse_num(v, k);
        else if (k == "t_end") cfg.t_end = parse_num(v, k);
        else if (k == "n_modes") cfg.n_modes = parse_int(v, k);
        else if (k == "mode") {
            if (v == "open_loop") cfg.mode = SimMode::OpenLoop;
            else if (v == "closed_loop") cfg.mode = SimMode::ClosedLoop;
            else if (v == "observer") cfg.mode = SimMode::Observer;
            else
                throw config_error(
                    "config: mode must be open_loop, closed_loop, or observer");
        } else if (k == "w0") cfg.w0 = v;
        else if (k == "v0") cfg.v0 = v;
        else if (k == "u") cfg.u = v;
        else if (k == "w_hat0") cfg.w_hat0 = v;
        else if (k == "v_hat0") cfg.v_hat0 = v;
        else if (k == "p") cfg.p_expr = v;
        else if (k == "q") cfg.q_expr = v;
        else if (k == "gains") cfg.gains = parse_list(v, k);
        else if (k == "obs_gains") cfg.obs_gains = parse_list(v, k);
        else if (k == "targets") cfg.targets = parse_list(v, k);
        else if (k == "sigma") cfg.sigma = parse_num(v, k);
        else if (k == "snapshot_every") cfg.snapshot_every = parse_int(v, k);
        else if (k == "t_fit") cfg.t_fit = parse_num(v, k);
    }
    cfg.validate();
    return cfg;
}

std::string scheme_name(BoundaryScheme s) {
    return s == BoundaryScheme::GhostPoint ? "ghost" : "one-sided";
}

std::string mode_name(SimMode m) {
    switch (m) {
        case SimMode::OpenLoop: return "open_loop";
        case SimMode::ClosedLoop: return "closed_loop";
        default: return "observer";
    }
}

}  // namespace heatctl
