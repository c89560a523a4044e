#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace refsde {

enum class CoefficientFamily { constant, tanh_saturated, time_modulated };

inline std::string to_string(CoefficientFamily f) {
    switch (f) {
        case CoefficientFamily::constant: return "constant";
        case CoefficientFamily::tanh_saturated: return "tanh";
        case CoefficientFamily::time_modulated: return "time_modulated";
    }
    return "?";
}

/// Drift b : [0,T] x R^d -> R^d and diffusion sigma : [0,T] x R^d -> R^{d x m}
/// drawn from built-in families whose boundedness / Lipschitz / time-Holder
/// constants are known in closed form, so the standing hypotheses are
/// verified rather than assumed.
///
///   constant:        b = bc * 1,              sigma_ij = sc * P_ij
///   tanh:            b_i = bc + bt tanh(x_i), sigma_ij = (sc + st tanh(x_i)) P_ij
///   time_modulated:  tanh scaled by m(t) = 1 + ta * t^nu on the diffusion
///
/// where P_ij = 1 exactly when j == i mod m (one nonzero per row).
class CoefficientSpec {
public:
    static CoefficientSpec constant(std::size_t d, std::size_t m, double drift_const,
                                    double sigma_const, double horizon = 1.0) {
        return CoefficientSpec(CoefficientFamily::constant, d, m, drift_const, 0.0, sigma_const,
                               0.0, 0.0, 1.0, horizon);
    }

    static CoefficientSpec tanh_saturated(std::size_t d, std::size_t m, double drift_const,
                                          double drift_tanh, double sigma_const,
                                          double sigma_tanh, double horizon = 1.0) {
        return CoefficientSpec(CoefficientFamily::tanh_saturated, d, m, drift_const, drift_tanh,
                               sigma_const, sigma_tanh, 0.0, 1.0, horizon);
    }

    static CoefficientSpec time_modulated(std::size_t d, std::size_t m, double drift_const,
                                          double drift_tanh, double sigma_const,
                                          double sigma_tanh, double time_amp, double nu,
                                          double horizon = 1.0) {
        return CoefficientSpec(CoefficientFamily::time_modulated, d, m, drift_const, drift_tanh,
                               sigma_const, sigma_tanh, time_amp, nu, horizon);
    }

    CoefficientFamily family() const { return family_; }
    std::size_t d() const { return d_; }
    std::size_t m() const { return m_; }
    double lipschitz() const { return k0_; }       // K0 of (H1)/(H2)
    double drift_sup() const { return b_inf_; }    // |b|_inf over [0,T] x R^d
    double diffusion_sup() const { return sigma_inf_; }
    double time_exponent() const { return nu_; }   // nu of (H1)(ii)
    double horizon() const { return horizon_; }

    double drift_const() const { return bc_; }
    double drift_tanh() const { return bt_; }
    double sigma_const() const { return sc_; }
    double sigma_tanh() const { return st_; }
    double time_amp() const { return ta_; }

    bool time_dependent() const {
        return family_ == CoefficientFamily::time_modulated && ta_ != 0.0;
    }

    void drift(double /*t*/, std::span<const double> x, double* out) const {
        for (std::size_t i = 0; i < d_; ++i) {
            double v = bc_;
            if (bt_ != 0.0) v += bt_ * std::tanh(x[i]);
            out[i] = v;
        }
    }

    /// Row-major d x m matrix.
    void diffusion(double t, std::span<const double> x, double* out) const {
        const double mod =
            family_ == CoefficientFamily::time_modulated ? 1.0 + ta_ * std::pow(t, nu_) : 1.0;
        for (std::size_t i = 0; i < d_; ++i) {
            double v = sc_;
            if (st_ != 0.0) v += st_ * std::tanh(x[i]);
            v *= mod;
            for (std::size_t j = 0; j < m_; ++j) out[i * m_ + j] = (j == i % m_) ? v : 0.0;
        }
    }

private:
    CoefficientSpec(CoefficientFamily family, std::size_t d, std::size_t m, double bc, double bt,
                    double sc, double st, double ta, double nu, double horizon)
        : family_(family), d_(d), m_(m), bc_(bc), bt_(bt), sc_(sc), st_(st), ta_(ta), nu_(nu),
          horizon_(horizon) {
        if (d < 1 || m < 1) throw std::invalid_argument("CoefficientSpec: d, m >= 1 required");
        if (!(nu > 0.0) || nu > 1.0)
            throw std::invalid_argument("CoefficientSpec: nu must lie in (0, 1]");
        if (horizon <= 0.0) throw std::invalid_argument("CoefficientSpec: horizon > 0 required");
        const double sd = std::sqrt(static_cast<double>(d));
        const double mod_sup = 1.0 + std::abs(ta_) * std::pow(horizon, nu_);
        b_inf_ = sd * (std::abs(bc_) + std::abs(bt_));
        sigma_inf_ = mod_sup * sd * (std::abs(sc_) + std::abs(st_));
        const double lip_b = std::abs(bt_);
        const double lip_sigma = mod_sup * std::abs(st_);
        // |m(t) - m(s)| <= |ta| |t - s|^nu since t^nu is nu-Holder with constant 1
        const double time_holder = std::abs(ta_) * sd * (std::abs(sc_) + std::abs(st_));
        k0_ = std::max({lip_b, lip_sigma, time_holder});
    }

    CoefficientFamily family_;
    std::size_t d_;
    std::size_t m_;
    double bc_, bt_, sc_, st_, ta_, nu_;
    double horizon_;
    double k0_ = 0.0, b_inf_ = 0.0, sigma_inf_ = 0.0;
};

}  // namespace refsde
