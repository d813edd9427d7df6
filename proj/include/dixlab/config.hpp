#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "dixlab/error.hpp"

namespace dixlab {

/// Global tunables, read once from the environment:
///   DIXLAB_ANGLES   - size of the direction grid used for sweeps and fattening (default 720)
///   DIXLAB_TOL_GEOM - geometric membership tolerance (default 1e-7)
///   DIXLAB_THREADS  - worker count for per-point loops (default 1)
struct Config {
    int angles = 720;
    double tol_geom = 1e-7;
    int threads = 1;

    static Config& instance() {
        static Config cfg = from_env();
        return cfg;
    }

    static Config from_env() {
        Config cfg;
        if (const char* s = std::getenv("DIXLAB_ANGLES")) {
            cfg.angles = std::atoi(s);
            if (cfg.angles < 8 || cfg.angles % 4 != 0)
                throw BadParams("DIXLAB_ANGLES must be a multiple of 4, >= 8");
        }
        if (const char* s = std::getenv("DIXLAB_TOL_GEOM")) {
            cfg.tol_geom = std::atof(s);
            if (cfg.tol_geom <= 0) throw BadParams("DIXLAB_TOL_GEOM must be positive");
        }
        if (const char* s = std::getenv("DIXLAB_THREADS")) {
            cfg.threads = std::max(1, std::atoi(s));
        }
        return cfg;
    }
};

inline int grid_angles() { return Config::instance().angles; }
inline double geom_tol() { return Config::instance().tol_geom; }

/// Runs fn(i) for i in [0, n). With t > 1 worker threads the indices are
/// partitioned statically, so results written per-index are identical to the
/// sequential run regardless of thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int t = Config::instance().threads;
    if (t <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace dixlab
