#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"

namespace refsde {

/// Exponent triple of the a priori Young bound: |I| <= |f|_inf |g|_gamma |t-s|^gamma
///   + c |f|_inf^beta |f|_kappa^(1-beta) |g|_gamma |t-s|^mu
/// with mu = gamma + kappa (1 - beta) and c = 2^beta (2^mu - 1)^(-1).
struct YoungBoundParams {
    double gamma;
    double kappa;
    double beta;

    YoungBoundParams(double gamma_, double kappa_, double beta_ = 0.0)
        : gamma(gamma_), kappa(kappa_), beta(beta_) {
        if (!(gamma > 0.0) || gamma > 1.0 || !(kappa > 0.0) || kappa > 1.0)
            throw std::invalid_argument("YoungBoundParams: exponents must lie in (0, 1]");
        if (beta < 0.0 || beta >= 1.0)
            throw std::invalid_argument("YoungBoundParams: beta must lie in [0, 1)");
        if (!(gamma + kappa > 1.0))
            throw std::invalid_argument("YoungBoundParams: require gamma + kappa > 1");
        if (!(mu_beta() > 1.0))
            throw std::invalid_argument("YoungBoundParams: mu_beta must exceed 1");
    }

    double mu_beta() const { return gamma + kappa * (1.0 - beta); }
    double c_coeff() const { return std::pow(2.0, beta) / (std::pow(2.0, mu_beta()) - 1.0); }
};

namespace detail {

inline void require_same_grid(const DiscretePath& f, const DiscretePath& g) {
    if (f.grid() != g.grid())
        throw std::invalid_argument("young_integral: integrand and driver share one grid");
}

}  // namespace detail

/// Left-point Riemann-Stieltjes sum of a matrix-valued integrand against dg.
/// f stores rows*cols components row-major per node; cols must equal g.dim().
inline std::vector<double> young_integral_matrix(const DiscretePath& f, std::size_t rows,
                                                 std::size_t cols, const DiscretePath& g,
                                                 Window w) {
    detail::require_same_grid(f, g);
    detail::require_window(f, w);
    if (rows * cols != f.dim() || cols != g.dim())
        throw std::invalid_argument("young_integral: non-conformable dimensions");
    std::vector<double> acc(rows, 0.0);
    for (std::size_t k = w.lo; k < w.hi; ++k) {
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < cols; ++c)
                s += f(k, r * cols + c) * (g(k + 1, c) - g(k, c));
            acc[r] += s;
        }
    }
    return acc;
}

/// Left-point sum for the two common pairings:
///   f scalar (dim 1): returns the g.dim()-vector of sums f dg_c,
///   f.dim() == g.dim(): returns the scalar sum of the dot products f . dg.
inline std::vector<double> young_integral(const DiscretePath& f, const DiscretePath& g,
                                          Window w) {
    detail::require_same_grid(f, g);
    detail::require_window(f, w);
    if (f.dim() == 1 && g.dim() > 1) {
        std::vector<double> acc(g.dim(), 0.0);
        for (std::size_t k = w.lo; k < w.hi; ++k)
            for (std::size_t c = 0; c < g.dim(); ++c)
                acc[c] += f(k, 0) * (g(k + 1, c) - g(k, c));
        return acc;
    }
    if (f.dim() != g.dim())
        throw std::invalid_argument("young_integral: non-conformable dimensions");
    return young_integral_matrix(f, 1, g.dim(), g, w);
}

inline double young_integral_scalar(const DiscretePath& f, const DiscretePath& g, Window w) {
    const std::vector<double> v = young_integral(f, g, w);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return v.size() == 1 ? v[0] : std::sqrt(sq);
}

/// |I_l - I_(l-1)| for l = 1..levels, I_l the left-point sum on the grid
/// coarsened 2^l times. The decay of this sequence toward fine grids is the
/// computable shadow of the sewing-map contraction.
inline std::vector<double> refinement_defect(const DiscretePath& f, const DiscretePath& g,
                                             Window w, std::size_t levels) {
    detail::require_same_grid(f, g);
    detail::require_window(f, w);
    const std::size_t cells = w.n_cells();
    if (cells == 0) throw std::invalid_argument("refinement_defect: empty window");
    if (cells % (std::size_t{1} << levels) != 0)
        throw std::invalid_argument("refinement_defect: cell count must be divisible by 2^levels");

    const bool broadcast = (f.dim() == 1 && g.dim() > 1);
    const std::size_t out_dim = broadcast ? g.dim() : 1;
    auto coarse_sum = [&](std::size_t stride) {
        std::vector<double> acc(out_dim, 0.0);
        for (std::size_t k = w.lo; k < w.hi; k += stride) {
            const std::size_t k1 = k + stride;
            if (broadcast) {
                for (std::size_t c = 0; c < g.dim(); ++c)
                    acc[c] += f(k, 0) * (g(k1, c) - g(k, c));
            } else {
                double s = 0.0;
                for (std::size_t c = 0; c < g.dim(); ++c) s += f(k, c) * (g(k1, c) - g(k, c));
                acc[0] += s;
            }
        }
        return acc;
    };

    std::vector<double> defects(levels, 0.0);
    std::vector<double> prev = coarse_sum(1);
    for (std::size_t l = 1; l <= levels; ++l) {
        const std::vector<double> cur = coarse_sum(std::size_t{1} << l);
        double sq = 0.0;
        for (std::size_t c = 0; c < out_dim; ++c) {
            const double diff = cur[c] - prev[c];
            sq += diff * diff;
        }
        defects[l - 1] = std::sqrt(sq);
        prev = cur;
    }
    return defects;
}

/// Fitted slope of log2(defect) against coarsening level; for kappa,gamma
/// regular inputs it approaches kappa + gamma - 1. NaN when every defect
/// vanishes (e.g. constant integrand).
inline double fit_defect_decay(const std::vector<double>& defects) {
    std::vector<double> xs, ys;
    for (std::size_t l = 0; l < defects.size(); ++l)
        if (defects[l] > 0.0) {
            xs.push_back(static_cast<double>(l));
            ys.push_back(std::log2(defects[l]));
        }
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Right-hand side of the a priori bound, evaluated with discrete norms on
/// the window.
inline double young_bound(const DiscretePath& f, const DiscretePath& g, Window w,
                          const YoungBoundParams& p) {
    detail::require_same_grid(f, g);
    detail::require_window(f, w);
    if (w.lo == w.hi) throw std::invalid_argument("young_bound: degenerate window");
    if (!(p.mu_beta() > 1.0))
        throw std::invalid_argument("young_bound: bound invalid for mu_beta <= 1");
    const double len = static_cast<double>(w.n_cells()) * f.grid().dt();
    const double f_inf = sup_norm(f, w);
    const double f_kap = holder_norm(f, p.kappa, w);
    const double g_gam = holder_norm(g, p.gamma, w);
    const double first = f_inf * g_gam * std::pow(len, p.gamma);
    const double interp = (p.beta == 0.0 ? f_kap : std::pow(f_inf, p.beta) *
                                                       std::pow(f_kap, 1.0 - p.beta));
    const double second = p.c_coeff() * interp * g_gam * std::pow(len, p.mu_beta());
    return first + second;
}

}  // namespace refsde
