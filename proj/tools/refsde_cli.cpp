// Command-line front end: seeded path generation, inequality corpora and
// Monte Carlo experiments, all emitting deterministic CSV.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "refsde/refsde.hpp"

namespace fs = std::filesystem;
using namespace refsde;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::size_t workers = 1;
};

void attach_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file (key = value lines)");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--workers", opts.workers, "worker thread count")->default_val(1);
}

ExperimentConfig resolve_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = load_config(opts.config_path);
    } else {
        cfg.apply_defaults();
        cfg.validate();
    }
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot open " + (dir / name).string());
    return os;
}

std::string zero_pad(std::size_t i, int width = 4) {
    std::string s = std::to_string(i);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

int cmd_fbm(const CommonOpts& opts) {
    const ExperimentConfig cfg = resolve_config(opts);
    const UniformGrid grid = cfg.make_grid();
    const FbmSampler sampler(grid, cfg.hurst, cfg.cholesky_cap);
    const bool report_regularity = grid.n_steps() / 8 >= 4;
    std::ofstream reg;
    if (report_regularity) {
        reg = open_out(cfg.out_dir, "regularity.csv");
        reg << "i,seed,lambda,holder_value,estimated_exponent,eta_proxy\n";
    }
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, i);
        const DiscretePath p = sampler.sample(cfg.driver_dim, seed);
        auto os = open_out(cfg.out_dir, "fbm_" + zero_pad(i) + ".csv");
        write_path_csv(os, p);
        if (report_regularity) {
            const HolderReport r = measure_regularity(p, cfg.hurst, cfg.epsilon);
            reg << i << "," << seed << "," << fmt(r.lambda) << "," << fmt(r.holder_value)
                << "," << fmt(r.estimated_exponent) << "," << fmt(r.eta_proxy) << "\n";
        }
    }
    std::cout << "wrote " << cfg.n_paths << " fBm paths (H = " << cfg.hurst << ", n = "
              << grid.n_steps() << ") to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_young(const CommonOpts& opts, std::size_t smooth_pairs, std::size_t fbm_pairs) {
    const ExperimentConfig cfg = resolve_config(opts);
    const UniformGrid grid = cfg.make_grid();
    const double betas[3] = {0.0, 0.3, 0.7};
    const double gamma = cfg.gamma;
    auto os = open_out(cfg.out_dir, "young.csv");
    os << "pair_id,window,integral,bound,beta,defect_rate\n";

    std::size_t violations = 0;
    FbmSampler sampler(grid, cfg.hurst, cfg.cholesky_cap);
    std::size_t levels = 1;
    while (grid.n_steps() % (std::size_t{1} << (levels + 1)) == 0 && levels < 6) ++levels;

    auto emit_pair = [&](std::size_t id, const DiscretePath& f, const DiscretePath& g,
                         double kappa) {
        const double rate =
            grid.n_steps() % 2 == 0
                ? fit_defect_decay(refinement_defect(f, g, whole(grid), levels))
                : std::numeric_limits<double>::quiet_NaN();
        NormalSampler wrng(derive_seed(cfg.master_seed, 0xabc ^ id, 7));
        for (int w = 0; w < 5; ++w) {
            const std::size_t span = grid.n_steps() / 2;
            const auto lo = static_cast<std::size_t>(wrng.uniform01() * (grid.n_steps() - span));
            Window win(lo, lo + 8 + static_cast<std::size_t>(wrng.uniform01() * (span - 8)));
            const double I = young_integral_scalar(f, g, win);
            for (double beta : betas) {
                // the bound only exists while mu_beta = gamma + kappa (1 - beta) > 1
                if (gamma + kappa * (1.0 - beta) <= 1.0) continue;
                const double B = young_bound(f, g, win, YoungBoundParams(gamma, kappa, beta));
                if (std::abs(I) > B) ++violations;
                os << id << "," << fmt(grid.time(win.lo)) << ":" << fmt(grid.time(win.hi))
                   << "," << fmt(I) << "," << fmt(B) << "," << fmt(beta) << "," << fmt(rate)
                   << "\n";
            }
        }
    };

    std::size_t id = 0;
    for (std::size_t i = 0; i < smooth_pairs; ++i, ++id) {
        // smooth trigonometric pairs, Lipschitz on the grid
        NormalSampler rng(derive_seed(cfg.master_seed, 1, i));
        auto mk = [&](std::uint64_t) {
            std::vector<double> a(5), b(5);
            for (auto& v : a) v = rng.normal();
            for (auto& v : b) v = rng.normal();
            return DiscretePath::sample_scalar(grid, [&](double t) {
                double acc = 0.0;
                for (std::size_t j = 1; j <= 5; ++j)
                    acc += (a[j - 1] * std::cos(6.283185307179586 * j * t) +
                            b[j - 1] * std::sin(6.283185307179586 * j * t)) /
                           static_cast<double>(j * j);
                return acc;
            });
        };
        emit_pair(id, mk(0), mk(1), 0.9);
    }
    for (std::size_t i = 0; i < fbm_pairs; ++i, ++id) {
        auto f = sampler.sample(1, derive_seed(cfg.master_seed, 2, i));
        auto g = sampler.sample(1, derive_seed(cfg.master_seed, 3, i));
        emit_pair(id, f, g, gamma);
    }
    std::cout << "young corpus: " << id << " pairs, " << violations << " bound violations\n";
    return violations == 0 ? 0 : 2;
}

int cmd_skorokhod(const CommonOpts& opts, const std::string& input) {
    const ExperimentConfig cfg = resolve_config(opts);
    DiscretePath z = input.empty()
                         ? FbmSampler(cfg.make_grid(), cfg.hurst, cfg.cholesky_cap)
                               .sample(cfg.dim, derive_seed(cfg.master_seed, 0))
                         : read_path_csv(input);
    const SkorokhodSolution sol = solve_skorokhod(z);
    auto os = open_out(cfg.out_dir, "skorokhod.csv");
    write_skorokhod_csv(os, sol);
    double comp = 0.0;
    for (std::size_t c = 0; c < z.dim(); ++c)
        comp = std::max(comp, std::abs(complementarity_defect(sol, c)));
    std::cout << "skorokhod map applied (d = " << z.dim() << ", n = " << z.grid().n_steps()
              << "); max complementarity defect " << comp << "\n";
    return 0;
}

int cmd_counterexample(const CommonOpts& opts, double t1, double t2, double t, double lambda,
                       std::size_t n) {
    const ExperimentConfig cfg = resolve_config(opts);
    const CounterexampleReport rep = counterexample(t1, t2, t, lambda, n);
    auto os = open_out(cfg.out_dir, "counterexample.csv");
    write_counterexample_csv(os, rep);
    std::cout << "|y2-y1|_l = " << rep.norm_ydiff << " (closed form "
              << std::pow(t2 - t1, -lambda) << ")\n"
              << "|z2-z1|_l = " << rep.norm_zdiff << " (closed form " << std::pow(t1, -lambda)
              << ")\n"
              << "ratio     = " << rep.ratio << "\n";
    return 0;
}

int cmd_solve(const CommonOpts& opts, const std::string& driver, const std::string& method) {
    const ExperimentConfig cfg = resolve_config(opts);
    const CoefficientSpec coeffs = cfg.make_coeffs();
    DiscretePath g = driver.empty()
                         ? FbmSampler(cfg.make_grid(), cfg.hurst, cfg.cholesky_cap)
                               .sample(cfg.driver_dim, derive_seed(cfg.master_seed, 0))
                         : read_path_csv(driver);
    const SolverConfig scfg = cfg.make_solver_config();
    const ReflectedSolution sol = method == "direct" ? direct_solve(coeffs, g, cfg.x0, scfg)
                                                     : picard_solve(coeffs, g, cfg.x0, scfg);
    auto os = open_out(cfg.out_dir, "solution.csv");
    write_solution_csv(os, sol);
    auto ls = open_out(cfg.out_dir, "ledger.csv");
    write_ledger_csv(ls, sol.ledger);
    std::cout << "solved on [" << 0 << ", " << fmt(g.grid().t_end()) << "] with " << method
              << "; residual " << sol.residual << "; windows "
              << sol.iterations_per_window.size() << "\n";
    return 0;
}

int cmd_mc(const CommonOpts& opts) {
    const ExperimentConfig cfg = resolve_config(opts);
    const MomentReport rep = run_mc(cfg, opts.workers);
    emit_report(rep, cfg.out_dir);
    std::size_t ok = 0;
    for (const auto& r : rep.records) ok += r.ok ? 1 : 0;
    std::cout << "monte carlo: " << rep.records.size() << " paths, " << ok
              << " satisfy the a priori bound\n";
    for (const auto& m : rep.moments)
        std::cout << "  E|X|^" << m.p << " = " << m.estimate << " (stderr " << m.std_error
                  << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pathwise reflected SDE toolkit (fBm drivers, H > 1/2)"};
    app.require_subcommand(1);

    CommonOpts fbm_opts, young_opts, sk_opts, ce_opts, solve_opts, mc_opts;

    auto* fbm = app.add_subcommand("fbm", "sample exact fBm paths to CSV");
    attach_common(fbm, fbm_opts);

    auto* young = app.add_subcommand("young", "Young bound and refinement-decay corpus");
    attach_common(young, young_opts);
    std::size_t smooth_pairs = 20, fbm_pairs = 50;
    young->add_option("--smooth-pairs", smooth_pairs, "number of smooth pairs")->default_val(20);
    young->add_option("--fbm-pairs", fbm_pairs, "number of fBm pairs")->default_val(50);

    auto* sk = app.add_subcommand("skorokhod", "apply the orthant Skorokhod map");
    attach_common(sk, sk_opts);
    std::string sk_input;
    sk->add_option("--input", sk_input, "input path CSV (otherwise a seeded fBm draw)");

    auto* ce = app.add_subcommand("counterexample", "regulator Holder-norm counterexample");
    attach_common(ce, ce_opts);
    double t1 = 0.4, t2 = 0.5, t = 1.0, lambda = 0.75;
    std::size_t ce_n = 100;
    ce->add_option("--t1", t1)->default_val(0.4);
    ce->add_option("--t2", t2)->default_val(0.5);
    ce->add_option("--t", t)->default_val(1.0);
    ce->add_option("--lambda", lambda)->default_val(0.75);
    ce->add_option("--n", ce_n, "grid steps (breakpoints must land on nodes)")->default_val(100);

    auto* solve = app.add_subcommand("solve", "solve the reflected equation for one driver");
    attach_common(solve, solve_opts);
    std::string driver, method = "picard";
    solve->add_option("--driver", driver, "driver path CSV (otherwise a seeded fBm draw)");
    solve->add_option("--method", method, "picard | direct")
        ->check(CLI::IsMember({"picard", "direct"}))
        ->default_val("picard");

    auto* mc = app.add_subcommand("mc", "seeded Monte Carlo moment experiment");
    attach_common(mc, mc_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // flag/usage problems count as validation errors
    }

    try {
        if (fbm->parsed()) return cmd_fbm(fbm_opts);
        if (young->parsed()) return cmd_young(young_opts, smooth_pairs, fbm_pairs);
        if (sk->parsed()) return cmd_skorokhod(sk_opts, sk_input);
        if (ce->parsed()) return cmd_counterexample(ce_opts, t1, t2, t, lambda, ce_n);
        if (solve->parsed()) return cmd_solve(solve_opts, driver, method);
        if (mc->parsed()) return cmd_mc(mc_opts);
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
