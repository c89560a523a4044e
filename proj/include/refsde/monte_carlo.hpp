#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "refsde/config.hpp"
#include "refsde/csv.hpp"
#include "refsde/fbm.hpp"
#include "refsde/norms.hpp"
#include "refsde/solver.hpp"

namespace refsde {

struct PathRecord {
    std::size_t index;
    std::uint64_t seed;
    double holder_x;  // discrete |x|_lambda0 over [0, T]
    double holder_g;  // discrete |g|_gamma
    double bound;     // M2 + M3 |g|_gamma^(1/gamma)
    bool ok;          // holder_x <= bound
};

struct MomentEntry {
    double p;
    double estimate;  // sample mean of |x|_lambda0^p
    double std_error;
    std::size_t n;
};

struct MomentReport {
    std::vector<MomentEntry> moments;
    std::vector<PathRecord> records;
};

inline void write_moments_csv(std::ostream& os, const MomentReport& r) {
    os << "p,estimate,stderr,n\n";
    for (const MomentEntry& e : r.moments)
        os << fmt(e.p) << "," << fmt(e.estimate) << "," << fmt(e.std_error) << "," << e.n
           << "\n";
}

inline void write_records_csv(std::ostream& os, const MomentReport& r) {
    os << "i,seed,holder_x,holder_g,bound,ok\n";
    for (const PathRecord& rec : r.records)
        os << rec.index << "," << rec.seed << "," << fmt(rec.holder_x) << ","
           << fmt(rec.holder_g) << "," << fmt(rec.bound) << "," << (rec.ok ? 1 : 0) << "\n";
}

/// Write moments.csv and paths.csv into a directory.
inline void emit_report(const MomentReport& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream ms(fs::path(dir) / "moments.csv");
    std::ofstream rs(fs::path(dir) / "paths.csv");
    if (!ms || !rs) throw std::runtime_error("emit_report: cannot write to " + dir);
    write_moments_csv(ms, r);
    write_records_csv(rs, r);
}

/// Seeded Monte Carlo over fBm drivers. Path i draws its driver from the
/// substream (master_seed, i) and is solved by the forward recursion; the
/// report is a deterministic fold in path-index order, so the output does not
/// depend on the worker count.
inline MomentReport run_mc(const ExperimentConfig& cfg, std::size_t workers = 1) {
    cfg.validate();
    const UniformGrid grid = cfg.make_grid();
    const CoefficientSpec coeffs = cfg.make_coeffs();
    const SolverConfig scfg = cfg.make_solver_config();
    if (coeffs.time_exponent() < cfg.gamma)
        throw ConfigError("config: hypothesis nu >= gamma violated for this family");
    const FbmSampler sampler(grid, cfg.hurst, cfg.cholesky_cap);

    struct Failure {
        std::size_t index;
        std::uint64_t seed;
        std::string what;
    };
    std::vector<PathRecord> records(cfg.n_paths);
    std::vector<std::unique_ptr<Failure>> failures(cfg.n_paths);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.n_paths) return;
            const std::uint64_t seed = derive_seed(cfg.master_seed, i);
            try {
                const DiscretePath g = sampler.sample(cfg.driver_dim, seed);
                const ReflectedSolution sol = direct_solve(coeffs, g, cfg.x0, scfg);
                const double hx = holder_norm(sol.x, cfg.lambda0);
                const double hg = sol.ledger.g_holder;
                const double bound = sol.ledger.M2 + sol.ledger.M3 * std::pow(hg, 1.0 / cfg.gamma);
                records[i] = PathRecord{i, seed, hx, hg, bound, hx <= bound};
            } catch (const std::exception& e) {
                failures[i] = std::make_unique<Failure>(Failure{i, seed, e.what()});
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    for (const auto& f : failures)
        if (f)
            throw std::runtime_error("run_mc: path " + std::to_string(f->index) + " (seed " +
                                     std::to_string(f->seed) + ") failed: " + f->what);

    MomentReport report;
    report.records = std::move(records);
    for (double p : cfg.p_list) {
        double mean = 0.0;
        for (const PathRecord& r : report.records) mean += std::pow(r.holder_x, p);
        mean /= static_cast<double>(cfg.n_paths);
        double var = 0.0;
        for (const PathRecord& r : report.records) {
            const double dev = std::pow(r.holder_x, p) - mean;
            var += dev * dev;
        }
        var = cfg.n_paths > 1 ? var / static_cast<double>(cfg.n_paths - 1) : 0.0;
        report.moments.push_back(
            MomentEntry{p, mean, std::sqrt(var / static_cast<double>(cfg.n_paths)),
                        cfg.n_paths});
    }
    return report;
}

}  // namespace refsde
