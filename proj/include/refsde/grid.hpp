#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace refsde {

/// Uniform time grid t_k = t_start + k * dt, k = 0..n_steps.
class UniformGrid {
public:
    UniformGrid(double t_start, double t_end, std::size_t n_steps)
        : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
        if (!(t_start < t_end))
            throw std::invalid_argument("UniformGrid: require t_start < t_end");
        if (n_steps < 1)
            throw std::invalid_argument("UniformGrid: require n_steps >= 1");
        if (!std::isfinite(t_start) || !std::isfinite(t_end))
            throw std::invalid_argument("UniformGrid: endpoints must be finite");
        dt_ = (t_end - t_start) / static_cast<double>(n_steps);
    }

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_nodes() const { return n_steps_ + 1; }
    double dt() const { return dt_; }
    double length() const { return t_end_ - t_start_; }

    double time(std::size_t k) const {
        return k == n_steps_ ? t_end_ : t_start_ + static_cast<double>(k) * dt_;
    }

    /// Node index of a time that must coincide with a grid node.
    std::size_t index_of(double t) const {
        const double pos = (t - t_start_) / dt_;
        const auto k = static_cast<std::size_t>(std::llround(pos));
        if (k > n_steps_ || std::abs(time(k) - t) > 1e-9 * std::max(1.0, std::abs(t)))
            throw std::invalid_argument("UniformGrid: t = " + std::to_string(t) +
                                        " is not a grid node");
        return k;
    }

    bool operator==(const UniformGrid& o) const {
        return t_start_ == o.t_start_ && t_end_ == o.t_end_ && n_steps_ == o.n_steps_;
    }
    bool operator!=(const UniformGrid& o) const { return !(*this == o); }

private:
    double t_start_;
    double t_end_;
    std::size_t n_steps_;
    double dt_;
};

/// Closed node-index window [lo, hi] on a grid.
struct Window {
    std::size_t lo;
    std::size_t hi;

    Window(std::size_t lo_, std::size_t hi_) : lo(lo_), hi(hi_) {
        if (lo > hi) throw std::invalid_argument("Window: require lo <= hi");
    }
    std::size_t n_cells() const { return hi - lo; }
};

inline Window whole(const UniformGrid& g) { return Window(0, g.n_steps()); }

}  // namespace refsde
