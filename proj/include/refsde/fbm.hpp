#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"
#include "refsde/rng.hpp"

extern "C" void dpotrf_(const char* uplo, const int* n, double* a, const int* lda, int* info);

namespace refsde {

/// Fractional Brownian motion covariance (1/2)(s^2H + t^2H - |t-s|^2H).
inline double fbm_covariance(double s, double t, double hurst) {
    if (s < 0.0 || t < 0.0)
        throw std::invalid_argument("fbm_covariance: times must be nonnegative");
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("fbm_covariance: Hurst parameter must lie in (0, 1)");
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

struct FbmSpec {
    double hurst;
    std::size_t dim;
    UniformGrid grid;
    std::uint64_t seed;

    FbmSpec(double hurst_, std::size_t dim_, UniformGrid grid_, std::uint64_t seed_)
        : hurst(hurst_), dim(dim_), grid(std::move(grid_)), seed(seed_) {
        if (!(hurst > 0.0 && hurst < 1.0))
            throw std::invalid_argument("FbmSpec: Hurst parameter must lie in (0, 1)");
        if (dim < 1) throw std::invalid_argument("FbmSpec: dim >= 1 required");
    }
};

/// Exact fBm sampler: Cholesky factor of the covariance matrix of the grid
/// values (t = 0 excluded as a degenerate row, prepended as exact zero).
/// Factoring once amortizes the O(n^3) cost over all draws on the same grid.
class FbmSampler {
public:
    static constexpr std::size_t default_cholesky_cap = 4096;

    FbmSampler(UniformGrid grid, double hurst, std::size_t cholesky_cap = default_cholesky_cap)
        : grid_(std::move(grid)), hurst_(hurst) {
        if (!(hurst > 0.0 && hurst < 1.0))
            throw std::invalid_argument("FbmSampler: Hurst parameter must lie in (0, 1)");
        if (grid_.t_start() != 0.0)
            throw std::invalid_argument("FbmSampler: grid must start at t = 0");
        const std::size_t n = grid_.n_steps();
        if (n > cholesky_cap)
            throw std::invalid_argument("FbmSampler: n_steps = " + std::to_string(n) +
                                        " exceeds the Cholesky cap " + std::to_string(cholesky_cap));
        factor();
    }

    const UniformGrid& grid() const { return grid_; }
    double hurst() const { return hurst_; }

    /// One draw of `dim` independent components; component j uses the
    /// substream (seed, j). Deterministic in (grid, hurst, dim, seed).
    DiscretePath sample(std::size_t dim, std::uint64_t seed) const {
        const std::size_t n = grid_.n_steps();
        DiscretePath out(grid_, dim);
        std::vector<double> xi(n), v(n);
        for (std::size_t j = 0; j < dim; ++j) {
            NormalSampler rng(derive_seed(seed, j));
            for (std::size_t i = 0; i < n; ++i) xi[i] = rng.normal();
            // v = L * xi, L lower triangular in column-major storage
            std::fill(v.begin(), v.end(), 0.0);
            for (std::size_t c = 0; c < n; ++c) {
                const double x = xi[c];
                const double* col = chol_.data() + c * n;
                for (std::size_t r = c; r < n; ++r) v[r] += col[r] * x;
            }
            out.at(0, j) = 0.0;
            for (std::size_t k = 1; k <= n; ++k) out.at(k, j) = v[k - 1];
        }
        return out;
    }

private:
    void factor() {
        const std::size_t n = grid_.n_steps();
        const double h2 = 2.0 * hurst_;
        // t_k^2H and lag powers (k*dt)^2H; cov(t_i, t_j) needs only these
        std::vector<double> tp(n + 1, 0.0), lp(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            tp[k] = std::pow(grid_.time(k), h2);
            lp[k] = std::pow(static_cast<double>(k) * grid_.dt(), h2);
        }
        chol_.assign(n * n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            double* col = chol_.data() + c * n;
            for (std::size_t r = c; r < n; ++r)
                col[r] = 0.5 * (tp[r + 1] + tp[c + 1] - lp[r - c]);
        }
        const int ni = static_cast<int>(n);
        int info = 0;
        dpotrf_("L", &ni, chol_.data(), &ni, &info);
        if (info != 0)
            throw std::runtime_error(
                "FbmSampler: Cholesky factorization failed (info = " + std::to_string(info) +
                ") for grid with n_steps = " + std::to_string(n));
    }

    UniformGrid grid_;
    double hurst_;
    std::vector<double> chol_;  // n x n column-major, lower triangle valid
};

inline DiscretePath sample_fbm(const FbmSpec& spec,
                               std::size_t cholesky_cap = FbmSampler::default_cholesky_cap) {
    return FbmSampler(spec.grid, spec.hurst, cholesky_cap).sample(spec.dim, spec.seed);
}

struct HolderReport {
    double lambda;              // exponent used (H - epsilon)
    double holder_value;        // discrete Holder seminorm at that exponent
    double estimated_exponent;  // log-regression slope over dyadic lags
    double eta_proxy;           // max |W_t - W_s| / |t-s|^(H-eps) over grid pairs
};

/// Measure discrete path regularity: the eta proxy at exponent H - epsilon and
/// the slope of log(mean |increment|) against log(lag) over lags 1,2,4,...,n/8.
inline HolderReport measure_regularity(const DiscretePath& path, double hurst,
                                       double epsilon = 0.05) {
    if (!(epsilon > 0.0 && epsilon < hurst))
        throw std::invalid_argument("measure_regularity: require 0 < epsilon < hurst");
    const std::size_t n = path.grid().n_steps();
    if (n / 8 < 4)
        throw std::invalid_argument("measure_regularity: grid too coarse for >= 3 lags");

    const std::size_t d = path.dim();
    std::vector<double> log_lag, log_mean;
    for (std::size_t lag = 1; lag <= n / 8; lag *= 2) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag <= n; ++i) {
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = path(i + lag, c) - path(i, c);
                sq += diff * diff;
            }
            acc += std::sqrt(sq);
        }
        const double mean = acc / static_cast<double>(n - lag + 1);
        if (mean > 0.0) {
            log_lag.push_back(std::log(static_cast<double>(lag) * path.grid().dt()));
            log_mean.push_back(std::log(mean));
        }
    }

    double slope = std::numeric_limits<double>::quiet_NaN();
    if (log_lag.size() >= 2) {
        const double m = static_cast<double>(log_lag.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_lag.size(); ++i) {
            sx += log_lag[i];
            sy += log_mean[i];
            sxx += log_lag[i] * log_lag[i];
            sxy += log_lag[i] * log_mean[i];
        }
        slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    const double lambda = hurst - epsilon;
    const double eta = holder_norm(path, lambda);
    return HolderReport{lambda, eta, slope, eta};
}

}  // namespace refsde
