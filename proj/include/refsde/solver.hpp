#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "refsde/coefficients.hpp"
#include "refsde/grid.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"
#include "refsde/skorokhod.hpp"

namespace refsde {

enum class WindowMode { contraction_t1, fixed_length, whole_interval };

inline std::string to_string(WindowMode m) {
    switch (m) {
        case WindowMode::contraction_t1: return "contraction_t1";
        case WindowMode::fixed_length: return "fixed";
        case WindowMode::whole_interval: return "whole_interval";
    }
    return "?";
}

struct SolverConfig {
    double lambda = 0.55;   // target Holder exponent, in (1/2, gamma)
    double gamma = 0.7;     // driver regularity
    double tol = 1e-10;     // Picard stopping tolerance, sup norm
    std::size_t max_iters = 10000;
    WindowMode window_mode = WindowMode::contraction_t1;
    double fixed_window_length = 0.0;

    void validate() const {
        if (!(lambda > 0.5 && lambda < gamma && gamma <= 1.0))
            throw std::invalid_argument("SolverConfig: require 1/2 < lambda < gamma <= 1");
        if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol > 0 required");
        if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters >= 1 required");
        if (window_mode == WindowMode::fixed_length && !(fixed_window_length > 0.0))
            throw std::invalid_argument("SolverConfig: fixed window length must be positive");
    }
};

/// Every named constant of the contraction / a priori machinery, plus the
/// measured iterate bounds. T1 is +inf when the driver is constant (no
/// window splitting needed).
struct ConstantsLedger {
    double C_d = 0.0;
    double c_gamma_lambda = 0.0;  // (2^(gamma+lambda) - 1)^-1
    double K0 = 0.0;
    double b_inf = 0.0;
    double sigma_inf = 0.0;
    double nu = 1.0;
    double g_holder = 0.0;  // discrete |g|_gamma over the horizon
    double M1 = 0.0;        // C_d c K0 |g|_gamma
    double T1 = std::numeric_limits<double>::infinity();  // 0.99 (1/M1)^(1/gamma)
    double M_dgl = 0.0;     // (C_d + 1) K0 c
    double M2 = 0.0;
    double M3 = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double horizon = 0.0;
    double K1_measured = 0.0;  // sup over iterates of window Holder norms
    double K2_measured = 0.0;  // sup over iterates of sup norms

    double h(double t) const {
        return C_d * (b_inf * std::pow(t, 1.0 - lambda) +
                      sigma_inf * g_holder * std::pow(t, gamma - lambda) +
                      c_gamma_lambda * K0 * g_holder * std::pow(t, gamma - lambda + nu));
    }

    static ConstantsLedger compute(const CoefficientSpec& coeffs, double g_holder,
                                   const SolverConfig& config, double horizon) {
        ConstantsLedger lg;
        lg.lambda = config.lambda;
        lg.gamma = config.gamma;
        lg.horizon = horizon;
        lg.C_d = std::sqrt(static_cast<double>(coeffs.d()));
        lg.c_gamma_lambda = 1.0 / (std::pow(2.0, config.gamma + config.lambda) - 1.0);
        lg.K0 = coeffs.lipschitz();
        lg.b_inf = coeffs.drift_sup();
        lg.sigma_inf = coeffs.diffusion_sup();
        lg.nu = coeffs.time_exponent();
        lg.g_holder = g_holder;
        lg.M1 = lg.C_d * lg.c_gamma_lambda * lg.K0 * g_holder;
        // strict inequality T1 < (1/M1)^(1/gamma) kept by a 0.99 safety factor
        lg.T1 = lg.M1 > 0.0 ? 0.99 * std::pow(1.0 / lg.M1, 1.0 / config.gamma)
                            : std::numeric_limits<double>::infinity();
        lg.M_dgl = (lg.C_d + 1.0) * lg.K0 * lg.c_gamma_lambda;
        lg.M2 = 2.0 * (lg.C_d + 1.0) * lg.b_inf * std::pow(horizon, 1.0 - config.lambda);
        const double sig_term =
            lg.sigma_inf + std::pow(horizon, lg.nu) * lg.K0 * lg.c_gamma_lambda;
        if (lg.M_dgl > 0.0) {
            lg.M3 = std::pow(horizon, 1.0 - config.lambda) *
                    std::pow(2.0, 1.0 + 1.0 / config.gamma) *
                    std::pow(lg.M_dgl, 1.0 / config.gamma - 1.0) * (lg.C_d + 1.0) * sig_term;
        } else {
            // Lipschitz-free coefficients: the covering condition holds on the
            // whole horizon, so the single-window estimate applies; expressed
            // through |g|^(1/gamma) to keep bound = M2 + M3 |g|^(1/gamma).
            lg.M3 = g_holder > 0.0
                        ? 2.0 * (lg.C_d + 1.0) * sig_term *
                              std::pow(horizon, config.gamma - config.lambda) *
                              std::pow(g_holder, 1.0 - 1.0 / config.gamma)
                        : 0.0;
        }
        return lg;
    }
};

struct ReflectedSolution {
    DiscretePath x;
    DiscretePath y;
    DiscretePath z;
    std::vector<std::size_t> iterations_per_window;
    double residual = 0.0;  // final sup-norm Picard defect (0 for the direct recursion)
    ConstantsLedger ledger;
};

class PicardError : public std::runtime_error {
public:
    PicardError(const std::string& what, std::vector<double> defects)
        : std::runtime_error(what), defect_history(std::move(defects)) {}
    std::vector<double> defect_history;
};

namespace detail {

inline void validate_solve_inputs(const CoefficientSpec& coeffs, const DiscretePath& g,
                                  std::span<const double> x0, const SolverConfig& config) {
    config.validate();
    if (g.dim() != coeffs.m())
        throw std::invalid_argument("solve: driver dimension must equal coefficient m");
    if (x0.size() != coeffs.d())
        throw std::invalid_argument("solve: x0 dimension must equal coefficient d");
    for (double v : x0)
        if (!(v > 0.0))
            throw std::invalid_argument("solve: x0 must be componentwise strictly positive");
    if (coeffs.time_exponent() < config.gamma)
        throw std::invalid_argument("solve: hypothesis nu >= gamma violated");
}

inline std::size_t window_cells(const ConstantsLedger& lg, const SolverConfig& config,
                                const UniformGrid& grid) {
    const std::size_t n = grid.n_steps();
    double len = 0.0;
    switch (config.window_mode) {
        case WindowMode::whole_interval: return n;
        case WindowMode::contraction_t1:
            if (!std::isfinite(lg.T1)) return n;
            len = lg.T1;
            break;
        case WindowMode::fixed_length: len = config.fixed_window_length; break;
    }
    const auto cells = static_cast<std::size_t>(std::floor(len / grid.dt()));
    if (cells < 1)
        throw std::invalid_argument(
            "solve: window length " + std::to_string(len) +
            " is below the grid spacing; need at least 2 nodes per window");
    return std::min(cells, n);
}

// Holder seminorm of a window iterate stored as a flat node-major buffer.
inline double buffer_holder_norm(const std::vector<double>& v, std::size_t d, double dt,
                                 double lambda) {
    const std::size_t nodes = v.size() / d;
    double worst = 0.0;
    for (std::size_t lag = 1; lag < nodes; ++lag) {
        const double p = std::pow(static_cast<double>(lag) * dt, lambda);
        const double inv_sq = 1.0 / (p * p);
        for (std::size_t i = 0; i + lag < nodes; ++i) {
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = v[(i + lag) * d + c] - v[i * d + c];
                sq += diff * diff;
            }
            if (sq * inv_sq > worst) worst = sq * inv_sq;
        }
    }
    return std::sqrt(worst);
}

inline double buffer_sup_norm(const std::vector<double>& v, std::size_t d) {
    const std::size_t nodes = v.size() / d;
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        double sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) sq += v[i * d + c] * v[i * d + c];
        if (sq > worst) worst = sq;
    }
    return std::sqrt(worst);
}

inline ReflectedSolution picard_solve_impl(const CoefficientSpec& coeffs, const DiscretePath& g,
                                           std::span<const double> x0,
                                           const SolverConfig& config,
                                           double initial_iterate_offset) {
    validate_solve_inputs(coeffs, g, x0, config);
    const UniformGrid& grid = g.grid();
    const std::size_t n = grid.n_steps();
    const std::size_t d = coeffs.d();
    const std::size_t m = coeffs.m();
    const double dt = grid.dt();

    ConstantsLedger ledger = ConstantsLedger::compute(
        coeffs, holder_norm(g, config.gamma), config, grid.length());
    const std::size_t wcells = window_cells(ledger, config, grid);

    ReflectedSolution sol{DiscretePath(grid, d), DiscretePath(grid, d), DiscretePath(grid, d),
                          {}, 0.0, ledger};
    std::vector<double> z_carry(x0.begin(), x0.end());
    std::vector<double> prev_max(d, 0.0);
    std::vector<double> x_start(x0.begin(), x0.end());
    for (std::size_t c = 0; c < d; ++c) {
        sol.z.at(0, c) = x0[c];
        sol.y.at(0, c) = 0.0;
        sol.x.at(0, c) = x0[c];
    }

    std::vector<double> bvec(d), smat(d * m);
    for (std::size_t a = 0; a < n; a += wcells) {
        const std::size_t b = std::min(a + wcells, n);
        const std::size_t nodes = b - a + 1;
        std::vector<double> x_cur(nodes * d), z_new(nodes * d), y_new(nodes * d),
            x_new(nodes * d);
        for (std::size_t k = 0; k < nodes; ++k)
            for (std::size_t c = 0; c < d; ++c)
                x_cur[k * d + c] = x_start[c] + initial_iterate_offset;
        std::size_t iters = 1;  // the constant iterate x^(1)
        ledger.K2_measured = std::max(ledger.K2_measured, buffer_sup_norm(x_cur, d));
        std::vector<double> history;
        double defect = std::numeric_limits<double>::infinity();
        while (true) {
            for (std::size_t c = 0; c < d; ++c) z_new[c] = z_carry[c];
            for (std::size_t k = 0; k + 1 < nodes; ++k) {
                const std::size_t gk = a + k;
                const double t = grid.time(gk);
                const std::span<const double> xk{x_cur.data() + k * d, d};
                coeffs.drift(t, xk, bvec.data());
                coeffs.diffusion(t, xk, smat.data());
                for (std::size_t i = 0; i < d; ++i) {
                    double acc = z_new[k * d + i] + bvec[i] * dt;
                    for (std::size_t j = 0; j < m; ++j)
                        acc += smat[i * m + j] * (g(gk + 1, j) - g(gk, j));
                    z_new[(k + 1) * d + i] = acc;
                }
            }
            std::vector<double> run = prev_max;
            for (std::size_t k = 0; k < nodes; ++k)
                for (std::size_t c = 0; c < d; ++c) {
                    const double zv = z_new[k * d + c];
                    if (-zv > run[c]) run[c] = -zv;
                    y_new[k * d + c] = run[c];
                    x_new[k * d + c] = zv + run[c];
                }
            defect = 0.0;
            for (std::size_t k = 0; k < nodes; ++k) {
                double sq = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double diff = x_new[k * d + c] - x_cur[k * d + c];
                    sq += diff * diff;
                }
                if (sq > defect) defect = sq;
            }
            defect = std::sqrt(defect);
            history.push_back(defect);
            ++iters;
            ledger.K1_measured =
                std::max(ledger.K1_measured, buffer_holder_norm(x_new, d, dt, config.lambda));
            ledger.K2_measured = std::max(ledger.K2_measured, buffer_sup_norm(x_new, d));
            x_cur.swap(x_new);
            if (defect <= config.tol) break;
            if (iters >= config.max_iters)
                throw PicardError("picard_solve: max_iters = " + std::to_string(config.max_iters) +
                                      " exceeded on window starting at node " + std::to_string(a) +
                                      " (last defect " + std::to_string(defect) + ")",
                                  history);
        }
        for (std::size_t k = 0; k < nodes; ++k)
            for (std::size_t c = 0; c < d; ++c) {
                sol.z.at(a + k, c) = z_new[k * d + c];
                sol.y.at(a + k, c) = y_new[k * d + c];
                sol.x.at(a + k, c) = x_cur[k * d + c];
            }
        for (std::size_t c = 0; c < d; ++c) {
            z_carry[c] = z_new[(nodes - 1) * d + c];
            prev_max[c] = y_new[(nodes - 1) * d + c];
            x_start[c] = x_cur[(nodes - 1) * d + c];
        }
        sol.iterations_per_window.push_back(iters);
        sol.residual = std::max(sol.residual, defect);
    }
    sol.ledger = ledger;
    return sol;
}

}  // namespace detail

/// Picard iteration of the reflected integral equation: on each window,
/// z comes from left-point sums of b and sigma on the previous iterate, the
/// regulator keeps the global running maximum from t = 0, and iterates stop
/// once successive sup distances fall below tol.
inline ReflectedSolution picard_solve(const CoefficientSpec& coeffs, const DiscretePath& g,
                                      std::span<const double> x0, const SolverConfig& config) {
    return detail::picard_solve_impl(coeffs, g, x0, config, 0.0);
}

/// Forward reflected recursion: the discrete fixed point of the same
/// left-point scheme, computable node by node because z at node k only
/// depends on x at earlier nodes. Residual is zero by construction.
inline ReflectedSolution direct_solve(const CoefficientSpec& coeffs, const DiscretePath& g,
                                      std::span<const double> x0, const SolverConfig& config) {
    detail::validate_solve_inputs(coeffs, g, x0, config);
    const UniformGrid& grid = g.grid();
    const std::size_t n = grid.n_steps();
    const std::size_t d = coeffs.d();
    const std::size_t m = coeffs.m();
    const double dt = grid.dt();
    if (n < 1) throw std::invalid_argument("direct_solve: degenerate grid");

    ConstantsLedger ledger = ConstantsLedger::compute(
        coeffs, holder_norm(g, config.gamma), config, grid.length());
    ReflectedSolution sol{DiscretePath(grid, d), DiscretePath(grid, d), DiscretePath(grid, d),
                          {}, 0.0, ledger};
    std::vector<double> run(d, 0.0), bvec(d), smat(d * m), xk(d);
    for (std::size_t c = 0; c < d; ++c) {
        sol.z.at(0, c) = x0[c];
        sol.y.at(0, c) = 0.0;
        sol.x.at(0, c) = x0[c];
        xk[c] = x0[c];
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.time(k);
        coeffs.drift(t, xk, bvec.data());
        coeffs.diffusion(t, xk, smat.data());
        for (std::size_t i = 0; i < d; ++i) {
            double acc = sol.z(k, i) + bvec[i] * dt;
            for (std::size_t j = 0; j < m; ++j) acc += smat[i * m + j] * (g(k + 1, j) - g(k, j));
            sol.z.at(k + 1, i) = acc;
            if (-acc > run[i]) run[i] = -acc;
            sol.y.at(k + 1, i) = run[i];
            sol.x.at(k + 1, i) = acc + run[i];
            xk[i] = acc + run[i];
        }
    }
    sol.ledger.K1_measured = holder_norm(sol.x, config.lambda);
    sol.ledger.K2_measured = sup_norm(sol.x);
    return sol;
}

struct AprioriBound {
    double M2;
    double M3;
    double bound;  // M2 + M3 * (discrete |g|_gamma)^(1/gamma)
};

/// The Holder a priori bound with constants assembled from the coefficient
/// hypotheses; both sides use discrete norms.
inline AprioriBound apriori_bound(const CoefficientSpec& coeffs, const DiscretePath& g,
                                  double lambda, double gamma, double T) {
    if (!(lambda > 0.5 && lambda < gamma && gamma <= 1.0))
        throw std::invalid_argument("apriori_bound: require 1/2 < lambda < gamma <= 1");
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.gamma = gamma;
    const double g_holder = holder_norm(g, gamma);
    const ConstantsLedger lg = ConstantsLedger::compute(coeffs, g_holder, cfg, T);
    const double bound = lg.M2 + lg.M3 * std::pow(g_holder, 1.0 / gamma);
    return AprioriBound{lg.M2, lg.M3, bound};
}

struct UniquenessReport {
    double divergence_time;  // first node time where a component reaches the zero threshold
    double max_gap;          // sup distance of the two converged solutions before that time
    bool hit_zero;
};

/// Remark-scope local uniqueness probe: rerun the Picard scheme from a
/// perturbed (strictly positive) initial iterate and compare the converged
/// solutions up to the first zero hit of the reflected path.
inline UniquenessReport local_uniqueness_check(const CoefficientSpec& coeffs,
                                               const DiscretePath& g,
                                               std::span<const double> x0,
                                               const SolverConfig& config) {
    if (coeffs.time_dependent())
        throw std::invalid_argument(
            "local_uniqueness_check: sigma must not depend on time");
    const ReflectedSolution base = detail::picard_solve_impl(coeffs, g, x0, config, 0.0);
    double min_x0 = std::numeric_limits<double>::infinity();
    double x0_sq = 0.0;
    for (double v : x0) {
        min_x0 = std::min(min_x0, v);
        x0_sq += v * v;
    }
    const ReflectedSolution other =
        detail::picard_solve_impl(coeffs, g, x0, config, 0.5 * min_x0);

    const double threshold = 1e-8 * (1.0 + std::sqrt(x0_sq));
    std::size_t tau_node = g.grid().n_steps();
    bool hit = false;
    for (std::size_t k = 0; k <= g.grid().n_steps() && !hit; ++k)
        for (std::size_t c = 0; c < coeffs.d(); ++c)
            if (base.x(k, c) <= threshold) {
                tau_node = k;
                hit = true;
                break;
            }
    double gap = 0.0;
    for (std::size_t k = 0; k <= tau_node; ++k) {
        double sq = 0.0;
        for (std::size_t c = 0; c < coeffs.d(); ++c) {
            const double diff = base.x(k, c) - other.x(k, c);
            sq += diff * diff;
        }
        gap = std::max(gap, std::sqrt(sq));
    }
    return UniquenessReport{g.grid().time(tau_node), gap, hit};
}

}  // namespace refsde
