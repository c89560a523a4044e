#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "refsde/coefficients.hpp"
#include "refsde/csv.hpp"
#include "refsde/fbm.hpp"
#include "refsde/grid.hpp"
#include "refsde/solver.hpp"

namespace refsde {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` experiment configuration ('#' starts a comment).
/// gamma defaults to hurst - 0.05 and lambda0 to (1/2 + gamma)/2 when omitted.
struct ExperimentConfig {
    double hurst = 0.75;
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double lambda0 = std::numeric_limits<double>::quiet_NaN();
    std::size_t dim = 1;
    std::size_t driver_dim = 1;
    double t_end = 1.0;
    std::size_t n_steps = 256;
    std::string family = "tanh";
    double drift_const = 0.0;
    double drift_tanh = 0.1;
    double sigma_const = 0.3;
    double sigma_tanh = 0.1;
    double time_amp = 0.0;
    double nu = 1.0;
    std::vector<double> x0;
    std::size_t n_paths = 100;
    std::uint64_t master_seed = 1;
    std::vector<double> p_list = {1.0, 2.0, 4.0};
    std::string out_dir = "out";
    double tol = 1e-10;
    std::size_t max_iters = 10000;
    std::string window_mode = "contraction_t1";
    double fixed_window_length = 0.0;
    double epsilon = 0.05;
    std::size_t cholesky_cap = FbmSampler::default_cholesky_cap;

    void apply_defaults() {
        if (std::isnan(gamma)) gamma = hurst - 0.05;
        if (std::isnan(lambda0)) lambda0 = 0.5 * (0.5 + gamma);
        if (x0.empty()) x0.assign(dim, 1.0);
    }

    void validate() const {
        if (!(hurst > 0.0 && hurst < 1.0))
            throw ConfigError("config: constraint \"0 < hurst < 1\" violated");
        if (!(gamma < hurst))
            throw ConfigError("config: constraint \"gamma < hurst\" violated");
        if (!(gamma > 0.5))
            throw ConfigError("config: constraint \"gamma > 1/2\" violated");
        if (!(lambda0 > 0.5))
            throw ConfigError("config: constraint \"lambda0 > 1/2\" violated");
        if (!(lambda0 < gamma))
            throw ConfigError("config: constraint \"lambda0 < gamma\" violated");
        if (dim < 1 || driver_dim < 1)
            throw ConfigError("config: constraint \"dim, driver_dim >= 1\" violated");
        if (n_paths < 1) throw ConfigError("config: constraint \"n_paths >= 1\" violated");
        for (double p : p_list)
            if (p < 1.0) throw ConfigError("config: constraint \"p_list entries >= 1\" violated");
        if (x0.size() != dim)
            throw ConfigError("config: x0 must list exactly dim components");
        for (double v : x0)
            if (!(v > 0.0)) throw ConfigError("config: constraint \"x0 > 0\" violated");
        if (family != "constant" && family != "tanh" && family != "time_modulated")
            throw ConfigError("config: unknown coefficient family \"" + family + "\"");
        if (!(nu > 0.0) || nu > 1.0)
            throw ConfigError("config: constraint \"0 < nu <= 1\" violated");
        if (window_mode != "contraction_t1" && window_mode != "fixed" &&
            window_mode != "whole_interval")
            throw ConfigError("config: unknown window_mode \"" + window_mode + "\"");
        if (!(epsilon > 0.0 && epsilon < hurst))
            throw ConfigError("config: constraint \"0 < epsilon < hurst\" violated");
        if (!(t_end > 0.0)) throw ConfigError("config: constraint \"t_end > 0\" violated");
        if (n_steps < 2) throw ConfigError("config: constraint \"n_steps >= 2\" violated");
    }

    UniformGrid make_grid() const { return UniformGrid(0.0, t_end, n_steps); }

    CoefficientSpec make_coeffs() const {
        if (family == "constant")
            return CoefficientSpec::constant(dim, driver_dim, drift_const, sigma_const, t_end);
        if (family == "tanh")
            return CoefficientSpec::tanh_saturated(dim, driver_dim, drift_const, drift_tanh,
                                                   sigma_const, sigma_tanh, t_end);
        return CoefficientSpec::time_modulated(dim, driver_dim, drift_const, drift_tanh,
                                               sigma_const, sigma_tanh, time_amp, nu, t_end);
    }

    SolverConfig make_solver_config() const {
        SolverConfig cfg;
        cfg.lambda = lambda0;
        cfg.gamma = gamma;
        cfg.tol = tol;
        cfg.max_iters = max_iters;
        cfg.fixed_window_length = fixed_window_length;
        if (window_mode == "contraction_t1")
            cfg.window_mode = WindowMode::contraction_t1;
        else if (window_mode == "fixed")
            cfg.window_mode = WindowMode::fixed_length;
        else
            cfg.window_mode = WindowMode::whole_interval;
        return cfg;
    }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& s, std::size_t line_no,
                                             const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": key \"" + key +
                              "\": cannot parse number \"" + tok + "\"");
        }
    }
    return out;
}

}  // namespace detail

inline ExperimentConfig load_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        auto num = [&](double& dst) {
            const auto lst = detail::parse_double_list(val, line_no, key);
            if (lst.size() != 1)
                throw ConfigError("config line " + std::to_string(line_no) + ": key \"" + key +
                                  "\" expects a single number");
            dst = lst[0];
        };
        auto unum = [&](std::size_t& dst) {
            double d = 0;
            num(d);
            if (d < 0 || d != std::floor(d))
                throw ConfigError("config line " + std::to_string(line_no) + ": key \"" + key +
                                  "\" expects a nonnegative integer");
            dst = static_cast<std::size_t>(d);
        };
        if (key == "hurst") num(cfg.hurst);
        else if (key == "gamma") num(cfg.gamma);
        else if (key == "lambda0") num(cfg.lambda0);
        else if (key == "dim") unum(cfg.dim);
        else if (key == "driver_dim") unum(cfg.driver_dim);
        else if (key == "t_end") num(cfg.t_end);
        else if (key == "n_steps") unum(cfg.n_steps);
        else if (key == "family") cfg.family = val;
        else if (key == "drift_const") num(cfg.drift_const);
        else if (key == "drift_tanh") num(cfg.drift_tanh);
        else if (key == "sigma_const") num(cfg.sigma_const);
        else if (key == "sigma_tanh") num(cfg.sigma_tanh);
        else if (key == "time_amp") num(cfg.time_amp);
        else if (key == "nu") num(cfg.nu);
        else if (key == "x0") cfg.x0 = detail::parse_double_list(val, line_no, key);
        else if (key == "n_paths") unum(cfg.n_paths);
        else if (key == "master_seed") {
            try {
                cfg.master_seed = std::stoull(val);
            } catch (const std::exception&) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": key \"master_seed\" expects an unsigned integer");
            }
        }
        else if (key == "p_list") cfg.p_list = detail::parse_double_list(val, line_no, key);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "tol") num(cfg.tol);
        else if (key == "max_iters") unum(cfg.max_iters);
        else if (key == "window_mode") cfg.window_mode = val;
        else if (key == "fixed_window_length") num(cfg.fixed_window_length);
        else if (key == "epsilon") num(cfg.epsilon);
        else if (key == "cholesky_cap") unum(cfg.cholesky_cap);
        else
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key \"" +
                              key + "\"");
    }
    cfg.apply_defaults();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot open config file " + file);
    return load_config(is);
}

inline void emit_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "hurst = " << fmt(cfg.hurst) << "\n";
    os << "gamma = " << fmt(cfg.gamma) << "\n";
    os << "lambda0 = " << fmt(cfg.lambda0) << "\n";
    os << "dim = " << cfg.dim << "\n";
    os << "driver_dim = " << cfg.driver_dim << "\n";
    os << "t_end = " << fmt(cfg.t_end) << "\n";
    os << "n_steps = " << cfg.n_steps << "\n";
    os << "family = " << cfg.family << "\n";
    os << "drift_const = " << fmt(cfg.drift_const) << "\n";
    os << "drift_tanh = " << fmt(cfg.drift_tanh) << "\n";
    os << "sigma_const = " << fmt(cfg.sigma_const) << "\n";
    os << "sigma_tanh = " << fmt(cfg.sigma_tanh) << "\n";
    os << "time_amp = " << fmt(cfg.time_amp) << "\n";
    os << "nu = " << fmt(cfg.nu) << "\n";
    os << "x0 =";
    for (double v : cfg.x0) os << " " << fmt(v);
    os << "\n";
    os << "n_paths = " << cfg.n_paths << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "p_list =";
    for (double p : cfg.p_list) os << " " << fmt(p);
    os << "\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    os << "tol = " << fmt(cfg.tol) << "\n";
    os << "max_iters = " << cfg.max_iters << "\n";
    os << "window_mode = " << cfg.window_mode << "\n";
    os << "fixed_window_length = " << fmt(cfg.fixed_window_length) << "\n";
    os << "epsilon = " << fmt(cfg.epsilon) << "\n";
    os << "cholesky_cap = " << cfg.cholesky_cap << "\n";
}

inline void emit_config(const std::string& file, const ExperimentConfig& cfg) {
    std::ofstream os(file);
    if (!os) throw ConfigError("cannot open " + file + " for writing");
    emit_config(os, cfg);
}

}  // namespace refsde
