// Benchmark of the pairwise validation sweep: OpenMP kernel vs the serial
// reference, on a synthetic price panel.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "cryptonet/permval.hpp"
#include "cryptonet/synth.hpp"

using namespace cryptonet;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pair-sweep benchmark"};
    std::size_t n_assets = 200, n_days = 160;
    std::uint32_t n_permutations = 200;
    std::uint64_t seed = 1;
    bool skip_serial = false;
    app.add_option("--assets", n_assets);
    app.add_option("--days", n_days);
    app.add_option("--permutations", n_permutations);
    app.add_option("--seed", seed);
    app.add_flag("--skip-serial", skip_serial, "run only the OpenMP kernel");
    CLI11_PARSE(app, argc, argv);

    SynthSpec spec;
    spec.n_assets = n_assets;
    spec.n_days = n_days;
    spec.factor_loading = 0.3;
    spec.seed = seed;
    Panel panel = generate(spec).panel;
    const auto rows = panel.rows_of_kind(SeriesKind::Price);

    PermutationConfig cfg;
    cfg.n_permutations = n_permutations;
    cfg.global_seed = seed;

    std::printf("assets=%zu days=%zu permutations=%u pairs=%zu threads=%d\n", n_assets, n_days,
                n_permutations, rows.size() * (rows.size() - 1) / 2, omp_get_max_threads());

    auto t0 = std::chrono::steady_clock::now();
    EdgeMatrix parallel = validate_all_pairs(panel, rows, rows, StatKind::TauPrice, cfg);
    const double t_parallel = seconds_since(t0);
    std::printf("openmp  : %8.2f s\n", t_parallel);

    if (!skip_serial) {
        t0 = std::chrono::steady_clock::now();
        EdgeMatrix serial = validate_all_pairs_serial(panel, rows, rows, StatKind::TauPrice, cfg);
        const double t_serial = seconds_since(t0);
        std::printf("serial  : %8.2f s  (speedup %.2fx)\n", t_serial, t_serial / t_parallel);

        bool identical = serial.cells.size() == parallel.cells.size();
        for (std::size_t i = 0; identical && i < serial.cells.size(); ++i) {
            const EdgeResult &a = serial.cells[i], &b = parallel.cells[i];
            identical = a.z == b.z && a.null_mean == b.null_mean &&
                        (a.statistic == b.statistic ||
                         (std::isnan(a.statistic) && std::isnan(b.statistic))) &&
                        a.valid == b.valid;
        }
        std::printf("results : %s\n", identical ? "bitwise identical" : "MISMATCH");
        return identical ? 0 : 1;
    }
    return 0;
}
