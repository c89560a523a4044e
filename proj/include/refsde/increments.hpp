#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/path.hpp"

namespace refsde {

/// 1-increment h_{st} on node pairs s <= t. Dense upper-triangular storage up
/// to dense_cap steps; above the cap values are produced on demand from the
/// source (a path coboundary or a user callable).
class Increment2 {
public:
    static constexpr std::size_t dense_cap = 512;
    using Eval = std::function<void(std::size_t, std::size_t, double*)>;

    Increment2(UniformGrid grid, std::size_t dim, Eval eval)
        : grid_(std::move(grid)), dim_(dim), eval_(std::move(eval)) {
        if (dim < 1) throw std::invalid_argument("Increment2: dim >= 1 required");
        if (grid_.n_steps() <= dense_cap) densify();
        check_diagonal();
    }

    static Increment2 coboundary_of(DiscretePath path) {
        Increment2 h(path.grid(), path.dim());
        h.path_ = std::make_shared<const DiscretePath>(std::move(path));
        if (h.grid_.n_steps() <= dense_cap) h.densify();
        return h;
    }

    const UniformGrid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    bool dense() const { return !table_.empty(); }

    void eval(std::size_t s, std::size_t t, double* out) const {
        if (s > t) throw std::invalid_argument("Increment2::eval: require s <= t");
        if (!table_.empty()) {
            const double* p = table_.data() + (offset(s) + (t - s)) * dim_;
            for (std::size_t c = 0; c < dim_; ++c) out[c] = p[c];
        } else if (path_) {
            for (std::size_t c = 0; c < dim_; ++c) out[c] = (*path_)(t, c) - (*path_)(s, c);
        } else {
            eval_(s, t, out);
        }
    }

    double at(std::size_t s, std::size_t t, std::size_t comp) const {
        if (s > t) throw std::invalid_argument("Increment2::at: require s <= t");
        if (!table_.empty()) return table_[(offset(s) + (t - s)) * dim_ + comp];
        if (path_) return (*path_)(t, comp) - (*path_)(s, comp);
        std::vector<double> buf(dim_);
        eval_(s, t, buf.data());
        return buf[comp];
    }

    /// Dense rows: entries (s, t) for t = s..n_steps, dim doubles per entry.
    std::span<const double> row(std::size_t s) const {
        if (table_.empty())
            throw std::logic_error("Increment2::row: only available in dense storage");
        return {table_.data() + offset(s) * dim_, (grid_.n_nodes() - s) * dim_};
    }

private:
    Increment2(UniformGrid grid, std::size_t dim) : grid_(std::move(grid)), dim_(dim) {}

    std::size_t offset(std::size_t s) const {
        // row s starts after rows 0..s-1 of lengths n+1, n, ...
        const std::size_t n1 = grid_.n_nodes();
        return s * n1 - s * (s - 1) / 2;
    }

    void densify() {
        const std::size_t n1 = grid_.n_nodes();
        table_.resize((n1 * (n1 + 1) / 2) * dim_);
        for (std::size_t s = 0; s < n1; ++s) {
            double* rowp = table_.data() + offset(s) * dim_;
            for (std::size_t t = s; t < n1; ++t) {
                double* e = rowp + (t - s) * dim_;
                if (path_)
                    for (std::size_t c = 0; c < dim_; ++c) e[c] = (*path_)(t, c) - (*path_)(s, c);
                else
                    eval_(s, t, e);
            }
        }
    }

    void check_diagonal() const {
        std::vector<double> buf(dim_);
        for (std::size_t k = 0; k < grid_.n_nodes(); ++k) {
            eval(k, k, buf.data());
            for (double v : buf)
                if (v != 0.0)
                    throw std::invalid_argument("Increment2: h_{tt} must vanish on the diagonal");
        }
    }

    UniformGrid grid_;
    std::size_t dim_;
    std::vector<double> table_;  // dense triangular, empty when lazy
    std::shared_ptr<const DiscretePath> path_;
    Eval eval_;
};

/// 2-increment h_{sut} on node triples s <= u <= t.
class Increment3 {
public:
    static constexpr std::size_t dense_cap = 128;
    using Eval = std::function<void(std::size_t, std::size_t, std::size_t, double*)>;

    Increment3(UniformGrid grid, std::size_t dim, Eval eval)
        : grid_(std::move(grid)), dim_(dim), eval_(std::move(eval)) {
        if (dim < 1) throw std::invalid_argument("Increment3: dim >= 1 required");
        if (grid_.n_steps() <= dense_cap) densify();
        check_degenerate();
    }

    static Increment3 coboundary_of(Increment2 h) {
        Increment3 out(h.grid(), h.dim());
        out.parent_ = std::make_shared<const Increment2>(std::move(h));
        if (out.grid_.n_steps() <= dense_cap) out.densify();
        out.check_degenerate();
        return out;
    }

    const UniformGrid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    bool dense() const { return !table_.empty(); }

    void eval(std::size_t s, std::size_t u, std::size_t t, double* out) const {
        if (s > u || u > t)
            throw std::invalid_argument("Increment3::eval: require s <= u <= t");
        if (!table_.empty()) {
            const double* p = table_.data() + index(s, u, t) * dim_;
            for (std::size_t c = 0; c < dim_; ++c) out[c] = p[c];
        } else if (parent_) {
            eval_coboundary(s, u, t, out);
        } else {
            eval_(s, u, t, out);
        }
    }

    double at(std::size_t s, std::size_t u, std::size_t t, std::size_t comp) const {
        std::vector<double> buf(dim_);
        eval(s, u, t, buf.data());
        return buf[comp];
    }

private:
    Increment3(UniformGrid grid, std::size_t dim) : grid_(std::move(grid)), dim_(dim) {}

    void eval_coboundary(std::size_t s, std::size_t u, std::size_t t, double* out) const {
        // stack scratch for the common small dimensions
        std::array<double, 16> stack_a, stack_b;
        std::vector<double> heap_a, heap_b;
        double *a = stack_a.data(), *b = stack_b.data();
        if (dim_ > stack_a.size()) {
            heap_a.resize(dim_);
            heap_b.resize(dim_);
            a = heap_a.data();
            b = heap_b.data();
        }
        parent_->eval(s, t, out);
        parent_->eval(s, u, a);
        parent_->eval(u, t, b);
        for (std::size_t i = 0; i < dim_; ++i) out[i] = out[i] - a[i] - b[i];
    }

    // triples (s, u, t) with s <= u <= t, lexicographic
    std::size_t index(std::size_t s, std::size_t u, std::size_t t) const {
        const std::size_t n1 = grid_.n_nodes();
        // count of triples with first coordinate < s
        std::size_t base = 0;
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t r = n1 - i;
            base += r * (r + 1) / 2;
        }
        const std::size_t rs = n1 - s;  // choices left
        const std::size_t du = u - s;
        // within block s: pairs (u, t) ordered by u then t
        std::size_t off = du * rs - du * (du - 1) / 2;
        return base + off + (t - u);
    }

    void densify() {
        const std::size_t n1 = grid_.n_nodes();
        std::size_t total = 0;
        for (std::size_t i = 0; i < n1; ++i) {
            const std::size_t r = n1 - i;
            total += r * (r + 1) / 2;
        }
        table_.resize(total * dim_);
        std::vector<double> buf(dim_);
        std::size_t idx = 0;
        for (std::size_t s = 0; s < n1; ++s)
            for (std::size_t u = s; u < n1; ++u)
                for (std::size_t t = u; t < n1; ++t) {
                    if (parent_)
                        eval_coboundary(s, u, t, buf.data());
                    else
                        eval_(s, u, t, buf.data());
                    for (std::size_t c = 0; c < dim_; ++c) table_[idx * dim_ + c] = buf[c];
                    ++idx;
                }
    }

    void check_degenerate() const {
        // h_{sut} = 0 whenever two consecutive arguments coincide; spot-check
        // a stratified node subset so large lazy increments stay cheap.
        const std::size_t n1 = grid_.n_nodes();
        const std::size_t stride = n1 > 64 ? n1 / 64 : 1;
        std::vector<double> buf(dim_);
        for (std::size_t a = 0; a < n1; a += stride)
            for (std::size_t b = a; b < n1; b += stride) {
                eval(a, a, b, buf.data());
                for (double v : buf)
                    if (v != 0.0)
                        throw std::invalid_argument("Increment3: h_{sut} must vanish when s = u");
                eval(a, b, b, buf.data());
                for (double v : buf)
                    if (v != 0.0)
                        throw std::invalid_argument("Increment3: h_{sut} must vanish when u = t");
            }
    }

    UniformGrid grid_;
    std::size_t dim_;
    std::vector<double> table_;
    std::shared_ptr<const Increment2> parent_;
    Eval eval_;
};

/// (delta g)_{st} = g_t - g_s.
inline Increment2 delta1(const DiscretePath& g) { return Increment2::coboundary_of(g); }

/// (delta h)_{sut} = h_{st} - h_{su} - h_{ut}.
inline Increment3 delta2(const Increment2& h) { return Increment3::coboundary_of(h); }

/// Largest |delta2(delta1(g))| entry over all node triples, Euclidean across
/// components. This sweep runs on the dense pair table of delta1 for speed.
inline double delta_delta_sup(const DiscretePath& g) {
    const std::size_t n1 = g.n_nodes();
    const std::size_t d = g.dim();
    const Increment2 h = delta1(g);
    double worst_sq = 0.0;
    std::vector<double> buf(d);
    if (h.dense()) {
        for (std::size_t s = 0; s < n1; ++s) {
            const std::span<const double> row_s = h.row(s);
            for (std::size_t u = s; u < n1; ++u) {
                const double* h_su = row_s.data() + (u - s) * d;
                const std::span<const double> row_u = h.row(u);
                for (std::size_t t = u; t < n1; ++t) {
                    const double* h_st = row_s.data() + (t - s) * d;
                    const double* h_ut = row_u.data() + (t - u) * d;
                    double sq = 0.0;
                    for (std::size_t c = 0; c < d; ++c) {
                        const double v = h_st[c] - h_su[c] - h_ut[c];
                        sq += v * v;
                    }
                    if (sq > worst_sq) worst_sq = sq;
                }
            }
        }
    } else {
        const Increment3 hh = delta2(h);
        for (std::size_t s = 0; s < n1; ++s)
            for (std::size_t u = s; u < n1; ++u)
                for (std::size_t t = u; t < n1; ++t) {
                    hh.eval(s, u, t, buf.data());
                    double sq = 0.0;
                    for (std::size_t c = 0; c < d; ++c) sq += buf[c] * buf[c];
                    if (sq > worst_sq) worst_sq = sq;
                }
    }
    return std::sqrt(worst_sq);
}

}  // namespace refsde
