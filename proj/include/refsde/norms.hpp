#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/path.hpp"

namespace refsde {

namespace detail {

inline void require_window(const DiscretePath& f, Window w) {
    if (w.hi >= f.n_nodes())
        throw std::invalid_argument("window exceeds grid");
}

inline void require_exponent(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("Holder exponent must lie in (0, 1]");
}

// (k*dt)^lambda for k = 0..max_lag
inline std::vector<double> lag_powers(const UniformGrid& g, double lambda, std::size_t max_lag) {
    std::vector<double> pw(max_lag + 1, 0.0);
    for (std::size_t k = 1; k <= max_lag; ++k)
        pw[k] = std::pow(static_cast<double>(k) * g.dt(), lambda);
    return pw;
}

}  // namespace detail

/// sup_{u in window} |f(u)|, Euclidean norm on R^d.
inline double sup_norm(const DiscretePath& f, Window w) {
    detail::require_window(f, w);
    double worst_sq = 0.0;
    for (std::size_t k = w.lo; k <= w.hi; ++k) {
        double sq = 0.0;
        for (std::size_t c = 0; c < f.dim(); ++c) sq += f(k, c) * f(k, c);
        if (sq > worst_sq) worst_sq = sq;
    }
    return std::sqrt(worst_sq);
}

inline double sup_norm(const DiscretePath& f) { return sup_norm(f, whole(f.grid())); }

/// Discrete lambda-Holder seminorm: max over grid pairs u < v inside the
/// window of |f(v) - f(u)| / (v - u)^lambda. Underestimates the continuum sup.
inline double holder_norm(const DiscretePath& f, double lambda, Window w) {
    detail::require_window(f, w);
    detail::require_exponent(lambda);
    if (w.lo == w.hi)
        throw std::invalid_argument("holder_norm: window is degenerate (no pairs)");
    const std::size_t d = f.dim();
    const std::size_t max_lag = w.hi - w.lo;
    const std::vector<double> pw = detail::lag_powers(f.grid(), lambda, max_lag);
    const double* v = f.raw().data();
    double worst = 0.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        const double inv_sq = 1.0 / (pw[lag] * pw[lag]);
        double lag_worst = 0.0;
        for (std::size_t i = w.lo; i + lag <= w.hi; ++i) {
            const double* a = v + i * d;
            const double* b = v + (i + lag) * d;
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = b[c] - a[c];
                sq += diff * diff;
            }
            if (sq > lag_worst) lag_worst = sq;
        }
        const double cand = lag_worst * inv_sq;
        if (cand > worst) worst = cand;
    }
    return std::sqrt(worst);
}

inline double holder_norm(const DiscretePath& f, double lambda) {
    return holder_norm(f, lambda, whole(f.grid()));
}

/// Per-component discrete Holder seminorms.
inline std::vector<double> holder_norm_componentwise(const DiscretePath& f, double lambda,
                                                     Window w) {
    detail::require_window(f, w);
    detail::require_exponent(lambda);
    if (w.lo == w.hi)
        throw std::invalid_argument("holder_norm: window is degenerate (no pairs)");
    const std::size_t d = f.dim();
    const std::size_t max_lag = w.hi - w.lo;
    const std::vector<double> pw = detail::lag_powers(f.grid(), lambda, max_lag);
    std::vector<double> worst(d, 0.0);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        const double inv = 1.0 / pw[lag];
        for (std::size_t i = w.lo; i + lag <= w.hi; ++i)
            for (std::size_t c = 0; c < d; ++c) {
                const double r = std::abs(f(i + lag, c) - f(i, c)) * inv;
                if (r > worst[c]) worst[c] = r;
            }
    }
    return worst;
}

inline std::vector<double> holder_norm_componentwise(const DiscretePath& f, double lambda) {
    return holder_norm_componentwise(f, lambda, whole(f.grid()));
}

/// Magnitude scale of a path, used to normalize roundoff tolerances.
inline double scale_of(const DiscretePath& f) {
    double m = 0.0;
    for (double v : f.raw()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace refsde
