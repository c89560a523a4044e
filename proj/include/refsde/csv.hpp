#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/path.hpp"
#include "refsde/skorokhod.hpp"
#include "refsde/solver.hpp"

namespace refsde {

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_path_csv(std::ostream& os, const DiscretePath& p) {
    os << "t";
    for (std::size_t c = 1; c <= p.dim(); ++c) os << ",x_" << c;
    os << "\n";
    for (std::size_t k = 0; k < p.n_nodes(); ++k) {
        os << fmt(p.grid().time(k));
        for (std::size_t c = 0; c < p.dim(); ++c) os << "," << fmt(p(k, c));
        os << "\n";
    }
}

inline void write_path_csv(const std::string& file, const DiscretePath& p) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file + " for writing");
    write_path_csv(os, p);
}

inline DiscretePath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("path CSV: empty input");
    std::size_t dim = 0;
    for (char ch : line)
        if (ch == ',') ++dim;
    if (dim < 1) throw std::runtime_error("path CSV: header must be t,x_1,...");
    std::vector<double> times, values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::stod(cell);
            if (col == 0)
                times.push_back(v);
            else
                values.push_back(v);
            ++col;
        }
        if (col != dim + 1) throw std::runtime_error("path CSV: ragged row");
    }
    if (times.size() < 2) throw std::runtime_error("path CSV: need at least 2 nodes");
    const std::size_t n = times.size() - 1;
    const UniformGrid grid(times.front(), times.back(), n);
    for (std::size_t k = 0; k <= n; ++k)
        if (std::abs(times[k] - grid.time(k)) > 1e-9 * std::max(1.0, std::abs(times[k])))
            throw std::runtime_error("path CSV: grid is not uniform");
    return DiscretePath(grid, dim, std::move(values));
}

inline DiscretePath read_path_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot open " + file);
    return read_path_csv(is);
}

inline void write_skorokhod_csv(std::ostream& os, const SkorokhodSolution& s) {
    const std::size_t d = s.z.dim();
    os << "t";
    for (std::size_t c = 1; c <= d; ++c) os << ",z_" << c;
    for (std::size_t c = 1; c <= d; ++c) os << ",x_" << c;
    for (std::size_t c = 1; c <= d; ++c) os << ",y_" << c;
    os << "\n";
    for (std::size_t k = 0; k < s.z.n_nodes(); ++k) {
        os << fmt(s.z.grid().time(k));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.z(k, c));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.x(k, c));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.y(k, c));
        os << "\n";
    }
}

inline void write_solution_csv(std::ostream& os, const ReflectedSolution& s) {
    const std::size_t d = s.x.dim();
    os << "t";
    for (std::size_t c = 1; c <= d; ++c) os << ",x_" << c;
    for (std::size_t c = 1; c <= d; ++c) os << ",y_" << c;
    for (std::size_t c = 1; c <= d; ++c) os << ",z_" << c;
    os << "\n";
    for (std::size_t k = 0; k < s.x.n_nodes(); ++k) {
        os << fmt(s.x.grid().time(k));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.x(k, c));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.y(k, c));
        for (std::size_t c = 0; c < d; ++c) os << "," << fmt(s.z(k, c));
        os << "\n";
    }
}

inline void write_ledger_csv(std::ostream& os, const ConstantsLedger& lg) {
    os << "name,value\n";
    os << "C_d," << fmt(lg.C_d) << "\n";
    os << "c_gamma_lambda," << fmt(lg.c_gamma_lambda) << "\n";
    os << "K0," << fmt(lg.K0) << "\n";
    os << "b_inf," << fmt(lg.b_inf) << "\n";
    os << "sigma_inf," << fmt(lg.sigma_inf) << "\n";
    os << "nu," << fmt(lg.nu) << "\n";
    os << "g_holder," << fmt(lg.g_holder) << "\n";
    os << "M1," << fmt(lg.M1) << "\n";
    os << "T1," << fmt(lg.T1) << "\n";
    os << "M_dgl," << fmt(lg.M_dgl) << "\n";
    os << "M2," << fmt(lg.M2) << "\n";
    os << "M3," << fmt(lg.M3) << "\n";
    os << "lambda," << fmt(lg.lambda) << "\n";
    os << "gamma," << fmt(lg.gamma) << "\n";
    os << "horizon," << fmt(lg.horizon) << "\n";
    os << "h_T1," << fmt(std::isfinite(lg.T1) ? lg.h(std::min(lg.T1, lg.horizon)) : lg.h(lg.horizon))
       << "\n";
    os << "K1_measured," << fmt(lg.K1_measured) << "\n";
    os << "K2_measured," << fmt(lg.K2_measured) << "\n";
}

inline void write_counterexample_csv(std::ostream& os, const CounterexampleReport& r) {
    os << "t1,t2,t,lambda,norm_ydiff,norm_zdiff,ratio\n";
    os << fmt(r.t1) << "," << fmt(r.t2) << "," << fmt(r.t) << "," << fmt(r.lambda) << ","
       << fmt(r.norm_ydiff) << "," << fmt(r.norm_zdiff) << "," << fmt(r.ratio) << "\n";
}

}  // namespace refsde
