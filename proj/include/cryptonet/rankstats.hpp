#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptonet/rng.hpp"

namespace cryptonet {

// A pair of aligned observation vectors (typically the pairwise-complete
// overlap of two panel rows).
struct PairedSample {
    std::vector<double> xs;
    std::vector<double> ys;

    std::size_t n() const { return xs.size(); }
};

// Tie-corrected Kendall tau (tau-b), computed in O(n log n) by sorting on x
// and merge-counting discordant pairs on y. Throws DegenerateSampleError when
// n < 2 or either margin is constant.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);
double kendall_tau(const PairedSample& sample);

// Spearman rank correlation with mid-ranks for ties.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);
double spearman_rho(const PairedSample& sample);

// Product-moment correlation.
double pearson_r(std::span<const double> xs, std::span<const double> ys);
double pearson_r(const PairedSample& sample);

// Mid-ranks (1-based averages over tied runs).
std::vector<double> mid_ranks(std::span<const double> values);

// Incremental Kendall evaluator for permutation sweeps: the x margin is fixed
// and pre-sorted once; each permuted() call shuffles an internal copy of y and
// re-evaluates tau against the fixed x ordering.
class KendallEvaluator {
public:
    KendallEvaluator(std::span<const double> xs, std::span<const double> ys);

    double observed() const { return observed_; }
    double permuted(PairRng& rng);

private:
    double eval();

    std::size_t n_;
    std::vector<std::uint32_t> x_order_;           // indices sorted by x
    std::vector<std::uint32_t> x_run_starts_;      // boundaries of equal-x runs
    std::vector<double> y_working_;                // current (possibly shuffled) y
    std::vector<double> y_by_x_;                   // scratch: y arranged in x order
    std::vector<double> merge_tmp_;
    std::uint64_t total_pairs_ = 0;
    std::uint64_t x_ties_ = 0;
    std::uint64_t y_ties_ = 0;                     // invariant under shuffling
    double observed_ = 0.0;
};

} // namespace cryptonet
