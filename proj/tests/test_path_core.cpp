#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "refsde/grid.hpp"
#include "refsde/increments.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"
#include "testutil.hpp"

using namespace refsde;
using Catch::Approx;

TEST_CASE("uniform grid basics") {
    UniformGrid g(0.0, 1.0, 10);
    REQUIRE(g.n_nodes() == 11);
    REQUIRE(g.dt() == Approx(0.1));
    REQUIRE(g.time(10) == 1.0);
    REQUIRE(g.index_of(0.5) == 5);
    REQUIRE_THROWS_AS(g.index_of(0.55), std::invalid_argument);
    REQUIRE_THROWS_AS(UniformGrid(1.0, 1.0, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(UniformGrid(0.0, 1.0, 0), std::invalid_argument);

    // spacing stays constant to within ulp scale
    UniformGrid fine(0.0, 0.7, 997);
    double max_dev = 0.0;
    for (std::size_t k = 0; k < fine.n_steps(); ++k)
        max_dev = std::max(max_dev, std::abs((fine.time(k + 1) - fine.time(k)) - fine.dt()));
    REQUIRE(max_dev <= 1e-15);
}

TEST_CASE("path construction validates shape and finiteness") {
    UniformGrid g(0.0, 1.0, 4);
    REQUIRE_THROWS_AS(DiscretePath(g, 2, std::vector<double>(7, 0.0)), std::invalid_argument);
    std::vector<double> bad(10, 0.0);
    bad[3] = std::nan("");
    REQUIRE_THROWS_AS(DiscretePath(g, 2, bad), std::invalid_argument);
}

TEST_CASE("delta1 on simple paths") {
    UniformGrid g10(0.0, 1.0, 10);

    // linear path: increment equals time difference
    auto lin = DiscretePath::sample_scalar(g10, [](double t) { return t; });
    Increment2 d = delta1(lin);
    REQUIRE(d.at(g10.index_of(0.2), g10.index_of(0.7), 0) == Approx(0.5).margin(1e-15));

    // vanishing diagonal
    for (std::size_t k = 0; k <= 10; ++k) REQUIRE(d.at(k, k, 0) == 0.0);

    // t^2 on [0,1], pair (0.3, 0.5): 0.25 - 0.09
    auto sq = DiscretePath::sample_scalar(g10, [](double t) { return t * t; });
    REQUIRE(delta1(sq).at(3, 5, 0) == Approx(0.16).margin(1e-15));
}

TEST_CASE("delta2 of a coboundary vanishes and direct evaluation works") {
    UniformGrid g(0.0, 1.0, 16);

    // h_st = (t-s)^2, triple (0, 0.5, 1) -> 1 - 0.25 - 0.25 = 0.5
    Increment2 h(g, 1, [&](std::size_t s, std::size_t t, double* out) {
        const double d = g.time(t) - g.time(s);
        *out = d * d;
    });
    Increment3 dh = delta2(h);
    REQUIRE(dh.at(0, 8, 16, 0) == Approx(0.5).margin(1e-15));

    // h identically zero stays zero
    Increment2 zero(g, 1, [](std::size_t, std::size_t, double* out) { *out = 0.0; });
    REQUIRE(delta2(zero).at(2, 7, 13, 0) == 0.0);

    // delta delta = 0 for path coboundaries
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto p = testutil::random_walk_path(g, 2, seed);
        REQUIRE(delta_delta_sup(p) <= 1e-12 * std::max(1.0, scale_of(p)));
    }
}

TEST_CASE("increments reject nonvanishing degenerate entries") {
    UniformGrid g(0.0, 1.0, 8);
    REQUIRE_THROWS_AS(Increment2(g, 1, [](std::size_t, std::size_t, double* o) { *o = 1.0; }),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        Increment3(g, 1, [](std::size_t, std::size_t, std::size_t, double* o) { *o = 1.0; }),
        std::invalid_argument);
}

TEST_CASE("lazy increments above the dense cap agree with dense evaluation") {
    UniformGrid big(0.0, 1.0, Increment2::dense_cap + 8);
    auto p = testutil::random_walk_path(big, 1, 7);
    Increment2 d = delta1(p);
    REQUIRE_FALSE(d.dense());
    REQUIRE(d.at(3, 500, 0) == Approx(p(500, 0) - p(3, 0)));
    REQUIRE(delta_delta_sup(p) <= 1e-12 * std::max(1.0, scale_of(p)));
}

TEST_CASE("holder_norm oracle values") {
    UniformGrid g(0.0, 1.0, 100);

    auto lin = DiscretePath::sample_scalar(g, [](double t) { return t; });
    REQUIRE(holder_norm(lin, 0.5) == Approx(1.0).epsilon(1e-12));

    auto cst = DiscretePath::sample_scalar(g, [](double) { return 3.25; });
    REQUIRE(holder_norm(cst, 0.7) == 0.0);

    // |f|_1 of t^2 approaches 2 from below under refinement
    auto sq100 = DiscretePath::sample_scalar(g, [](double t) { return t * t; });
    const double n100 = holder_norm(sq100, 1.0);
    REQUIRE(n100 == Approx(2.0 - g.dt()).epsilon(1e-12));
    UniformGrid g1000(0.0, 1.0, 1000);
    auto sq1000 = DiscretePath::sample_scalar(g1000, [](double t) { return t * t; });
    const double n1000 = holder_norm(sq1000, 1.0);
    REQUIRE(n1000 > n100);
    REQUIRE(n1000 < 2.0);
    REQUIRE(n1000 == Approx(2.0).margin(2e-3));

    REQUIRE_THROWS_AS(holder_norm(lin, 0.5, Window(4, 4)), std::invalid_argument);
    REQUIRE_THROWS_AS(holder_norm(lin, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(holder_norm(lin, 1.5), std::invalid_argument);
}

TEST_CASE("sup_norm oracle values") {
    UniformGrid g(0.0, 1.0, 50);
    auto f = DiscretePath::sample_scalar(g, [](double t) { return t - 0.5; });
    REQUIRE(sup_norm(f) == Approx(0.5));
    auto zero = DiscretePath::sample_scalar(g, [](double) { return 0.0; });
    REQUIRE(sup_norm(zero) == 0.0);
    auto two = DiscretePath::sample(g, 2, [](double t, double* out) {
        out[0] = t;
        out[1] = -2.0 * t;
    });
    REQUIRE(sup_norm(two) == Approx(std::sqrt(5.0)));
}

TEST_CASE("componentwise holder norms") {
    UniformGrid g(0.0, 1.0, 64);
    auto two = DiscretePath::sample(g, 2, [](double t, double* out) {
        out[0] = t;
        out[1] = 2.0 * t;
    });
    const auto comp = holder_norm_componentwise(two, 1.0, whole(g));
    REQUIRE(comp[0] == Approx(1.0));
    REQUIRE(comp[1] == Approx(2.0));

    auto cst = DiscretePath::sample(g, 3, [](double, double* out) {
        out[0] = 1.0;
        out[1] = -2.0;
        out[2] = 0.5;
    });
    for (double v : holder_norm_componentwise(cst, 0.6, whole(g))) REQUIRE(v == 0.0);

    // Euclidean recombination and sandwich bounds on random paths
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto p = testutil::random_walk_path(g, 3, seed);
        const double full = holder_norm(p, 0.6);
        const auto parts = holder_norm_componentwise(p, 0.6, whole(g));
        double sq = 0.0, worst = 0.0;
        for (double v : parts) {
            sq += v * v;
            worst = std::max(worst, v);
            REQUIRE(full >= v - 1e-12);
        }
        REQUIRE(full <= std::sqrt(sq) + 1e-12);
        REQUIRE(full <= std::sqrt(3.0) * worst + 1e-12);
    }
}

TEST_CASE("norm monotonicity, scaling, refinement") {
    UniformGrid g(0.0, 1.0, 128);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto p = testutil::random_walk_path(g, 2, seed);
        const double inner = holder_norm(p, 0.55, Window(16, 80));
        const double outer = holder_norm(p, 0.55, Window(8, 100));
        REQUIRE(inner <= outer + 1e-15);

        const double base = holder_norm(p, 0.75);
        REQUIRE(holder_norm(-2.5 * p, 0.75) == Approx(2.5 * base).epsilon(1e-12));
    }

    // discrete norm is nondecreasing under refinement of analytic samples
    auto fn = [](double t) { return std::sin(7.0 * t) + 0.3 * std::cos(19.0 * t); };
    double prev = 0.0;
    for (std::size_t n : {32, 64, 128, 256}) {
        auto p = DiscretePath::sample_scalar(UniformGrid(0.0, 1.0, n), fn);
        const double cur = holder_norm(p, 0.8);
        REQUIRE(cur >= prev * (1.0 - 1e-12));
        prev = cur;
    }
}

TEST_CASE("dense and lazy 2-increments agree") {
    // same coboundary evaluated through the dense triangular table (small
    // grid) and through lazy composition (same data re-gridded above the cap)
    UniformGrid small(0.0, 1.0, 96);
    auto p = testutil::random_walk_path(small, 2, 21);
    Increment3 dense3 = delta2(delta1(p));
    REQUIRE(dense3.dense());

    Increment2 lazy2(small, 2, [&](std::size_t s, std::size_t t, double* out) {
        out[0] = p(t, 0) - p(s, 0);
        out[1] = p(t, 1) - p(s, 1);
    });
    Increment3 lazy3(small, 2, [&](std::size_t s, std::size_t u, std::size_t t, double* out) {
        for (std::size_t c = 0; c < 2; ++c)
            out[c] = (p(t, c) - p(s, c)) - (p(u, c) - p(s, c)) - (p(t, c) - p(u, c));
    });
    REQUIRE(lazy3.dense());  // still under the cap, but built from a callable

    std::vector<double> a(2), b(2);
    for (std::size_t s = 0; s <= 96; s += 7)
        for (std::size_t u = s; u <= 96; u += 5)
            for (std::size_t t = u; t <= 96; t += 3) {
                dense3.eval(s, u, t, a.data());
                lazy3.eval(s, u, t, b.data());
                for (std::size_t c = 0; c < 2; ++c)
                    REQUIRE(a[c] == Approx(b[c]).margin(1e-15));
            }
}
