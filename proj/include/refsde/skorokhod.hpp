#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"

namespace refsde {

/// Componentwise orthant regulator y_i(t_k) = max_{j <= k} (z_i(t_j))^-,
/// the running maximum of the negative part.
inline DiscretePath regulator(const DiscretePath& z) {
    for (std::size_t c = 0; c < z.dim(); ++c)
        if (z(0, c) < 0.0)
            throw std::invalid_argument("regulator: z(0) must be componentwise nonnegative");
    DiscretePath y(z.grid(), z.dim());
    std::vector<double> run(z.dim(), 0.0);
    for (std::size_t k = 0; k < z.n_nodes(); ++k)
        for (std::size_t c = 0; c < z.dim(); ++c) {
            const double neg = z(k, c) < 0.0 ? -z(k, c) : 0.0;
            if (neg > run[c]) run[c] = neg;
            y.at(k, c) = run[c];
        }
    return y;
}

struct SkorokhodSolution {
    DiscretePath z;  // input
    DiscretePath x;  // reflector, z + y
    DiscretePath y;  // regulator
};

inline SkorokhodSolution solve_skorokhod(const DiscretePath& z) {
    DiscretePath y = regulator(z);
    DiscretePath x(z.grid(), z.dim());
    for (std::size_t k = 0; k < z.n_nodes(); ++k)
        for (std::size_t c = 0; c < z.dim(); ++c) x.at(k, c) = z(k, c) + y(k, c);
    return SkorokhodSolution{z, std::move(x), std::move(y)};
}

/// Discrete complementarity sum for one component. The increment of y at node
/// k+1 is paired with x(t_{k+1}): whenever the running maximum renews, x
/// vanishes exactly at that node, so the sum is zero up to roundoff.
inline double complementarity_defect(const SkorokhodSolution& s, std::size_t comp) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < s.x.n_nodes(); ++k)
        acc += s.x(k + 1, comp) * (s.y(k + 1, comp) - s.y(k, comp));
    return acc;
}

/// Holder comparison of regulator and input: lhs = |y|_lambda, rhs = sqrt(d) |z|_lambda
/// on the window; the contract is lhs <= rhs.
inline std::pair<double, double> regulator_holder_check(const DiscretePath& z, double lambda,
                                                        Window w) {
    const DiscretePath y = regulator(z);
    const double lhs = holder_norm(y, lambda, w);
    const double rhs = std::sqrt(static_cast<double>(z.dim())) * holder_norm(z, lambda, w);
    return {lhs, rhs};
}

/// Uniform distances taken in the componentwise max norm (over nodes and
/// components): that is the norm in which the running-maximum regulator is
/// nonexpansive, giving the sharp constants 1 and 2 for this map. The
/// Euclidean-in-space variant would pick up an extra sqrt(d).
struct LipschitzCheck {
    double reflector_dist;  // |phi(z1) - phi(z2)|_inf
    double regulator_dist;  // |varphi(z1) - varphi(z2)|_inf
    double z_dist;          // |z1 - z2|_inf

    static constexpr double regulator_constant = 1.0;
    static constexpr double reflector_constant = 2.0;
};

namespace detail {

inline double max_abs_diff(const DiscretePath& a, const DiscretePath& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.n_nodes(); ++k)
        for (std::size_t c = 0; c < a.dim(); ++c)
            worst = std::max(worst, std::abs(a(k, c) - b(k, c)));
    return worst;
}

}  // namespace detail

inline LipschitzCheck lipschitz_check(const DiscretePath& z1, const DiscretePath& z2) {
    if (z1.grid() != z2.grid() || z1.dim() != z2.dim())
        throw std::invalid_argument("lipschitz_check: grid/dim mismatch");
    const SkorokhodSolution a = solve_skorokhod(z1);
    const SkorokhodSolution b = solve_skorokhod(z2);
    return LipschitzCheck{detail::max_abs_diff(a.x, b.x), detail::max_abs_diff(a.y, b.y),
                          detail::max_abs_diff(z1, z2)};
}

struct CounterexampleReport {
    double t1;
    double t2;
    double t;
    double lambda;
    double norm_ydiff;  // |y2 - y1|_lambda, equals (t2 - t1)^-lambda
    double norm_zdiff;  // |z2 - z1|_lambda, equals t1^-lambda
    double ratio;
};

/// The two-path construction showing that the regulator map is not Lipschitz
/// in Holder norm: z1 ramps 0 -> -1 over (t1, t2] and stays, z2 rises to 1
/// over [0, t1] and ramps back to 0. Breakpoints must be grid nodes so the
/// closed-form norms are reproduced exactly.
inline CounterexampleReport counterexample(double t1, double t2, double t, double lambda,
                                           std::size_t n_steps) {
    if (!(0.0 < t1 && t1 < t2 && t2 < t))
        throw std::invalid_argument("counterexample: require 0 < t1 < t2 < t");
    const UniformGrid grid(0.0, t, n_steps);
    std::size_t i1 = 0, i2 = 0;
    try {
        i1 = grid.index_of(t1);
        i2 = grid.index_of(t2);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("counterexample: breakpoints t1, t2 must be grid nodes");
    }
    // canonical node times keep the piecewise-linear samples exact
    const double b1 = grid.time(i1);
    const double b2 = grid.time(i2);

    DiscretePath z1(grid, 1), z2(grid, 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double s = grid.time(k);
        if (k <= i1) {
            z1.at(k, 0) = 0.0;
            z2.at(k, 0) = s / b1;
        } else if (k <= i2) {
            z1.at(k, 0) = (b2 - s) / (b2 - b1) - 1.0;
            z2.at(k, 0) = (b2 - s) / (b2 - b1);
        } else {
            z1.at(k, 0) = -1.0;
            z2.at(k, 0) = 0.0;
        }
    }
    const DiscretePath y1 = regulator(z1);
    const DiscretePath y2 = regulator(z2);
    const double nyd = holder_norm(y2 - y1, lambda);
    const double nzd = holder_norm(z2 - z1, lambda);
    return CounterexampleReport{b1, b2, t, lambda, nyd, nzd, nyd / nzd};
}

}  // namespace refsde
