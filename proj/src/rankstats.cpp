#include "cryptonet/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cryptonet/errors.hpp"

namespace cryptonet {

namespace {

bool is_constant(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] != v[0]) return false;
    }
    return true;
}

void check_margins(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw ValidationError("paired sample sides have different lengths");
    if (xs.size() < 2)
        throw DegenerateSampleError("need at least 2 paired observations");
    if (is_constant(xs) || is_constant(ys))
        throw DegenerateSampleError("constant margin: statistic undefined");
}

// Pairs (i < j) with v[i] strictly greater than v[j], counted during a
// bottom-up merge sort. `v` ends up sorted.
std::uint64_t merge_count_inversions(std::vector<double>& v, std::vector<double>& tmp) {
    const std::size_t n = v.size();
    tmp.resize(n);
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    inversions += mid - a;
                    tmp[out++] = v[b++];
                } else {
                    tmp[out++] = v[a++];
                }
            }
            while (a < mid) tmp[out++] = v[a++];
            while (b < hi) tmp[out++] = v[b++];
            std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
                      tmp.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

// Tied pairs in a sorted vector: sum over runs of c*(c-1)/2.
std::uint64_t tied_pairs_sorted(const std::vector<double>& sorted) {
    std::uint64_t ties = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] == sorted[i - 1]) {
            ++run;
        } else {
            ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
            run = 1;
        }
    }
    ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
    return ties;
}

} // namespace

KendallEvaluator::KendallEvaluator(std::span<const double> xs, std::span<const double> ys) {
    check_margins(xs, ys);
    n_ = xs.size();
    total_pairs_ = static_cast<std::uint64_t>(n_) * (n_ - 1) / 2;

    x_order_.resize(n_);
    std::iota(x_order_.begin(), x_order_.end(), 0u);
    std::sort(x_order_.begin(), x_order_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return xs[a] < xs[b]; });

    // Equal-x run boundaries; x_ties_ never changes (only y is shuffled).
    x_run_starts_.push_back(0);
    for (std::size_t i = 1; i < n_; ++i) {
        if (xs[x_order_[i]] != xs[x_order_[i - 1]]) {
            x_run_starts_.push_back(static_cast<std::uint32_t>(i));
        }
    }
    x_run_starts_.push_back(static_cast<std::uint32_t>(n_));
    for (std::size_t r = 0; r + 1 < x_run_starts_.size(); ++r) {
        std::uint64_t len = x_run_starts_[r + 1] - x_run_starts_[r];
        x_ties_ += len * (len - 1) / 2;
    }

    y_working_.assign(ys.begin(), ys.end());
    std::vector<double> y_sorted = y_working_;
    std::sort(y_sorted.begin(), y_sorted.end());
    y_ties_ = tied_pairs_sorted(y_sorted);

    y_by_x_.resize(n_);
    observed_ = eval();
}

double KendallEvaluator::eval() {
    // Arrange current y in x order, then sort within equal-x runs so that
    // tied-x pairs never register as discordant.
    for (std::size_t i = 0; i < n_; ++i) y_by_x_[i] = y_working_[x_order_[i]];

    std::uint64_t joint_ties = 0;
    for (std::size_t r = 0; r + 1 < x_run_starts_.size(); ++r) {
        const std::size_t lo = x_run_starts_[r], hi = x_run_starts_[r + 1];
        if (hi - lo > 1) {
            std::sort(y_by_x_.begin() + static_cast<std::ptrdiff_t>(lo),
                      y_by_x_.begin() + static_cast<std::ptrdiff_t>(hi));
            std::size_t run = 1;
            for (std::size_t i = lo + 1; i < hi; ++i) {
                if (y_by_x_[i] == y_by_x_[i - 1]) {
                    ++run;
                } else {
                    joint_ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
                    run = 1;
                }
            }
            joint_ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
        }
    }

    const std::uint64_t discordant = merge_count_inversions(y_by_x_, merge_tmp_);

    // Knight's identity: C - D = P - Tx - Ty + Txy - 2*discordant.
    const double numerator =
        static_cast<double>(total_pairs_) - static_cast<double>(x_ties_) -
        static_cast<double>(y_ties_) + static_cast<double>(joint_ties) -
        2.0 * static_cast<double>(discordant);
    const double dx = static_cast<double>(total_pairs_ - x_ties_);
    const double dy = static_cast<double>(total_pairs_ - y_ties_);
    return std::clamp(numerator / std::sqrt(dx * dy), -1.0, 1.0);
}

double KendallEvaluator::permuted(PairRng& rng) {
    rng.shuffle(std::span<double>(y_working_));
    return eval();
}

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
    return KendallEvaluator(xs, ys).observed();
}

double kendall_tau(const PairedSample& sample) {
    return kendall_tau(std::span<const double>(sample.xs), std::span<const double>(sample.ys));
}

std::vector<double> mid_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    check_margins(xs, ys);
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateSampleError("zero variance margin");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

double pearson_r(const PairedSample& sample) {
    return pearson_r(std::span<const double>(sample.xs), std::span<const double>(sample.ys));
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    check_margins(xs, ys);
    const std::vector<double> rx = mid_ranks(xs);
    const std::vector<double> ry = mid_ranks(ys);
    return pearson_r(rx, ry);
}

double spearman_rho(const PairedSample& sample) {
    return spearman_rho(std::span<const double>(sample.xs), std::span<const double>(sample.ys));
}

} // namespace cryptonet
