#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "refsde/grid.hpp"

namespace refsde {

/// d-dimensional path sampled on a uniform grid. Values are stored
/// node-major: values[k * dim + c] is component c at node k.
class DiscretePath {
public:
    DiscretePath(UniformGrid grid, std::size_t dim)
        : grid_(std::move(grid)), dim_(dim), values_(grid_.n_nodes() * dim, 0.0) {
        if (dim < 1) throw std::invalid_argument("DiscretePath: dim >= 1 required");
    }

    DiscretePath(UniformGrid grid, std::size_t dim, std::vector<double> values)
        : grid_(std::move(grid)), dim_(dim), values_(std::move(values)) {
        if (dim < 1) throw std::invalid_argument("DiscretePath: dim >= 1 required");
        if (values_.size() != grid_.n_nodes() * dim_)
            throw std::invalid_argument("DiscretePath: value count must be (n_steps+1)*dim");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("DiscretePath: values must be finite");
    }

    /// Sample a vector-valued function t -> out[0..dim) on the grid nodes.
    static DiscretePath sample(const UniformGrid& grid, std::size_t dim,
                               const std::function<void(double, double*)>& f) {
        DiscretePath p(grid, dim);
        for (std::size_t k = 0; k < grid.n_nodes(); ++k)
            f(grid.time(k), p.values_.data() + k * dim);
        p.check_finite();
        return p;
    }

    static DiscretePath sample_scalar(const UniformGrid& grid,
                                      const std::function<double(double)>& f) {
        return sample(grid, 1, [&](double t, double* out) { *out = f(t); });
    }

    const UniformGrid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    std::size_t n_nodes() const { return grid_.n_nodes(); }

    double operator()(std::size_t node, std::size_t comp) const {
        return values_[node * dim_ + comp];
    }
    double& at(std::size_t node, std::size_t comp) { return values_[node * dim_ + comp]; }

    std::span<const double> node_values(std::size_t node) const {
        return {values_.data() + node * dim_, dim_};
    }
    std::span<const double> raw() const { return values_; }
    std::span<double> raw_mutable() { return values_; }

    void check_finite() const {
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("DiscretePath: values must be finite");
    }

private:
    UniformGrid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

inline DiscretePath operator-(const DiscretePath& a, const DiscretePath& b) {
    if (a.grid() != b.grid() || a.dim() != b.dim())
        throw std::invalid_argument("path difference: grid/dim mismatch");
    DiscretePath out(a.grid(), a.dim());
    for (std::size_t k = 0; k < a.n_nodes(); ++k)
        for (std::size_t c = 0; c < a.dim(); ++c) out.at(k, c) = a(k, c) - b(k, c);
    return out;
}

inline DiscretePath operator*(double c, const DiscretePath& p) {
    DiscretePath out(p.grid(), p.dim());
    for (std::size_t k = 0; k < p.n_nodes(); ++k)
        for (std::size_t j = 0; j < p.dim(); ++j) out.at(k, j) = c * p(k, j);
    return out;
}

}  // namespace refsde
