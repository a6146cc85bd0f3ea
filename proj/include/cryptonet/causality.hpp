#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptonet/panel.hpp"
#include "cryptonet/rng.hpp"

namespace cryptonet {

struct TEConfig {
    int n_bins = 4; // equally spaced bins over each margin's own range
    // log base fixed at 2: transfer entropy is reported in bits

    void validate() const;
};

// Lag-1 embedding of a source/target pair: rows aligned so that element k
// holds (y at t+1, y at t, x at t) for one fully observed consecutive-day
// window.
struct LaggedTriple {
    std::vector<double> y_next;
    std::vector<double> y_now;
    std::vector<double> x_now;

    std::size_t n() const { return y_next.size(); }
};

// Windows (t, t+1) where the calendar days are consecutive, y is observed at
// both and x at t. src = x (candidate cause), dst = y (effect). n may be 0.
LaggedTriple build_lagged_triple(const Panel& panel, std::size_t src, std::size_t dst);

// Equally spaced bins over [min, max] of the input; the max value lands in the
// top bin. Throws DegenerateSampleError for a constant list.
std::vector<int> discretize(std::span<const double> values, int n_bins);

// Plug-in histogram transfer entropy TE(X->Y) in bits: the conditional mutual
// information I(Y_{t+1}; X_t | Y_t) of the discretized empirical distribution.
// Always >= 0.
double transfer_entropy(const LaggedTriple& triple, const TEConfig& cfg = {});

// F-statistic of the lag-1 Granger regression: restricted y' ~ 1 + y against
// unrestricted y' ~ 1 + y + x, compared by residual sum of squares.
double granger_f(const LaggedTriple& triple);

// te_xy - te_yx; positive means X->Y dominates.
double net_information_flow(double te_xy, double te_yx);

// Permutation evaluator for TE: y-margin bins are fixed, each permuted() call
// shuffles the x bin assignments (equivalent to shuffling x_now itself, since
// bin edges are permutation-invariant).
class TransferEntropyEvaluator {
public:
    TransferEntropyEvaluator(const LaggedTriple& triple, const TEConfig& cfg);

    double observed() const { return observed_; }
    double permuted(PairRng& rng);

private:
    double eval();

    int n_bins_;
    std::size_t n_;
    std::vector<int> yn_bins_;
    std::vector<int> y_bins_;
    std::vector<int> x_bins_; // shuffled in place across permutations
    std::vector<std::uint32_t> joint_;   // n_bins^3 cell counts
    std::vector<std::uint32_t> c_yx_;
    std::vector<std::uint32_t> c_yny_;
    std::vector<std::uint32_t> c_y_;
    double observed_ = 0.0;
};

// Permutation evaluator for the Granger F-statistic; shuffles x_now only,
// preserving the (y_next, y_now) joint.
class GrangerEvaluator {
public:
    explicit GrangerEvaluator(const LaggedTriple& triple);

    double observed() const { return observed_; }
    double permuted(PairRng& rng);

private:
    LaggedTriple working_;
    double observed_ = 0.0;
};

} // namespace cryptonet
