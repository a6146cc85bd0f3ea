#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "cryptonet/causality.hpp"
#include "cryptonet/errors.hpp"
#include "cryptonet/panel.hpp"
#include "cryptonet/rankstats.hpp"
#include "cryptonet/rng.hpp"

namespace cryptonet {

// Which pair statistic a sweep evaluates. Also part of each pair's RNG key,
// so re-running a different statistic never reuses a permutation stream.
enum class StatKind : std::uint32_t {
    TauPrice = 1,
    TauPosSent = 2,
    TauNegSent = 3,
    TauCross = 4,        // sentiment (row) vs price (col), bipartite
    TeSentToPrice = 5,
    TePriceToSent = 6,
    GrangerSentToPrice = 7,
    GrangerPriceToSent = 8,
};

const char* stat_kind_name(StatKind k);
StatKind stat_kind_from_name(const std::string& name);
bool stat_kind_is_symmetric(StatKind k); // tau within one signal
bool stat_kind_is_directed(StatKind k);  // TE / Granger
bool stat_kind_is_te(StatKind k);

struct PermutationConfig {
    std::uint32_t n_permutations = 200;
    double z_star = 3.0;
    std::uint32_t min_obs = 20; // strict: a pair needs n_obs > min_obs
    std::uint64_t global_seed = 0;

    void validate() const;
};

struct PairIdentity {
    std::uint32_t src = 0; // panel row of the x / source series
    std::uint32_t dst = 0; // panel row of the y / target series
    StatKind kind = StatKind::TauPrice;
};

struct EdgeResult {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    double statistic = 0.0;
    double null_mean = 0.0;
    double null_std = 0.0;
    double z = 0.0;
    std::uint32_t n_obs = 0;
    bool degenerate = false;
    bool valid = false;
};

// Validity at an alternative threshold; statistics and null moments are
// threshold-independent, so sweeps re-use stored results.
bool edge_valid_at(const EdgeResult& e, double z_star, std::uint32_t min_obs);

// Core permutation test: builds the null by `n_permutations` uniform shuffles
// of the evaluator's exchangeable side (the observed side stays fixed), then
// standardizes the observed statistic. Deterministic given
// (global_seed, pair identity), independent of evaluation order.
template <typename Evaluator>
EdgeResult permutation_z_with(Evaluator& evaluator, std::size_t n_obs,
                              const PermutationConfig& cfg, PairIdentity id) {
    EdgeResult result;
    result.src = id.src;
    result.dst = id.dst;
    result.n_obs = static_cast<std::uint32_t>(n_obs);
    result.statistic = evaluator.observed();

    PairRng rng(cfg.global_seed, id.src, id.dst, static_cast<std::uint32_t>(id.kind));
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint32_t k = 0; k < cfg.n_permutations; ++k) {
        const double v = evaluator.permuted(rng);
        sum += v;
        sum_sq += v * v;
    }
    const double m = static_cast<double>(cfg.n_permutations);
    result.null_mean = sum / m;
    const double var = (sum_sq - m * result.null_mean * result.null_mean) / (m - 1.0);
    result.null_std = var > 0.0 ? std::sqrt(var) : 0.0;
    if (result.null_std > 0.0) result.z = (result.statistic - result.null_mean) / result.null_std;
    result.valid = n_obs > cfg.min_obs && result.null_std > 0.0 && result.z > cfg.z_star;
    return result;
}

// Generic entry point over a paired sample: stat_fn(xs, ys) is re-evaluated
// against a cumulatively shuffled working copy of ys (xs fixed). Degenerate
// samples come back flagged instead of throwing. Pairs failing min_obs
// short-circuit before any random draw.
template <typename StatFn>
EdgeResult permutation_z(StatFn&& stat_fn, const PairedSample& sample,
                         const PermutationConfig& cfg, PairIdentity id) {
    cfg.validate();
    if (sample.n() <= cfg.min_obs) {
        EdgeResult r;
        r.src = id.src;
        r.dst = id.dst;
        r.n_obs = static_cast<std::uint32_t>(sample.n());
        r.statistic = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    struct Wrapper {
        StatFn& fn;
        const std::vector<double>& xs;
        std::vector<double> ys;
        double observed() const { return fn(xs, ys); }
        double permuted(PairRng& rng) {
            rng.shuffle(std::span<double>(ys));
            return fn(xs, ys);
        }
    };
    try {
        Wrapper w{stat_fn, sample.xs, sample.ys};
        w.observed(); // degeneracy surfaces here, before any draw
        return permutation_z_with(w, sample.n(), cfg, id);
    } catch (const DegenerateSampleError&) {
        EdgeResult r;
        r.src = id.src;
        r.dst = id.dst;
        r.n_obs = static_cast<std::uint32_t>(sample.n());
        r.statistic = std::numeric_limits<double>::quiet_NaN();
        r.degenerate = true;
        return r;
    }
}

// One EdgeResult per (row in `rows`, col in `cols`). Symmetric kinds require
// rows == cols and skip the diagonal; bipartite/directed kinds evaluate the
// full grid including the diagonal. OpenMP-parallel over pairs; bitwise
// deterministic for any thread count.
struct EdgeMatrix {
    StatKind kind = StatKind::TauPrice;
    std::vector<std::string> row_nodes; // asset ids
    std::vector<std::string> col_nodes;
    std::vector<std::uint32_t> row_panel_rows;
    std::vector<std::uint32_t> col_panel_rows;
    std::vector<EdgeResult> cells; // row-major |rows| x |cols|
    PermutationConfig config;

    std::size_t n_rows() const { return row_nodes.size(); }
    std::size_t n_cols() const { return col_nodes.size(); }
    const EdgeResult& at(std::size_t r, std::size_t c) const { return cells[r * n_cols() + c]; }

    bool directed() const { return stat_kind_is_directed(kind); }
    bool bipartite() const { return kind == StatKind::TauCross; }
};

EdgeMatrix validate_all_pairs(const Panel& panel, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols, StatKind kind,
                              const PermutationConfig& cfg, int n_bins = 4);

// Serial reference path; identical results, no OpenMP, plain scalar
// statistics re-evaluated from scratch each permutation. Kept for testing.
EdgeMatrix validate_all_pairs_serial(const Panel& panel, const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols, StatKind kind,
                                     const PermutationConfig& cfg, int n_bins = 4);

// CSV export/import: header src,dst,kind,stat,null_mean,null_std,z,n_obs,valid
// plus degenerate flag. Byte-stable across runs and thread counts.
void write_edge_csv(const EdgeMatrix& m, std::ostream& out);
void save_edge_csv(const EdgeMatrix& m, const std::string& path);
EdgeMatrix load_edge_csv(const std::string& path);

} // namespace cryptonet
