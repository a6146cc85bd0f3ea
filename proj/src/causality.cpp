#include "cryptonet/causality.hpp"

#include <algorithm>
#include <cmath>

#include "cryptonet/errors.hpp"

namespace cryptonet {

void TEConfig::validate() const {
    if (n_bins < 3 || n_bins > 6)
        throw ConfigError("n_bins must be in [3, 6], got " + std::to_string(n_bins));
}

LaggedTriple build_lagged_triple(const Panel& panel, std::size_t src, std::size_t dst) {
    LaggedTriple triple;
    const std::size_t nd = panel.n_days();
    if (nd < 2) return triple;
    const std::uint8_t* mx = panel.mask.data() + src * nd;
    const std::uint8_t* my = panel.mask.data() + dst * nd;
    const double* vx = panel.data.data() + src * nd;
    const double* vy = panel.data.data() + dst * nd;
    for (std::size_t t = 0; t + 1 < nd; ++t) {
        if (panel.calendar[t + 1] != panel.calendar[t] + 1) continue;
        if (my[t] && my[t + 1] && mx[t]) {
            triple.y_next.push_back(vy[t + 1]);
            triple.y_now.push_back(vy[t]);
            triple.x_now.push_back(vx[t]);
        }
    }
    return triple;
}

std::vector<int> discretize(std::span<const double> values, int n_bins) {
    if (values.empty()) throw DegenerateSampleError("cannot discretize an empty list");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw DegenerateSampleError("constant list: bins undefined");
    const double scale = static_cast<double>(n_bins) / (hi - lo);
    std::vector<int> bins(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int b = static_cast<int>((values[i] - lo) * scale);
        bins[i] = std::min(b, n_bins - 1); // the max value joins the top bin
    }
    return bins;
}

TransferEntropyEvaluator::TransferEntropyEvaluator(const LaggedTriple& triple,
                                                   const TEConfig& cfg) {
    cfg.validate();
    if (triple.n() < 2)
        throw DegenerateSampleError("need at least 2 lag windows for transfer entropy");
    n_bins_ = cfg.n_bins;
    n_ = triple.n();
    yn_bins_ = discretize(triple.y_next, n_bins_);
    y_bins_ = discretize(triple.y_now, n_bins_);
    x_bins_ = discretize(triple.x_now, n_bins_);
    const std::size_t b = static_cast<std::size_t>(n_bins_);
    joint_.resize(b * b * b);
    c_yx_.resize(b * b);
    c_yny_.resize(b * b);
    c_y_.resize(b);
    observed_ = eval();
}

double TransferEntropyEvaluator::eval() {
    const std::size_t b = static_cast<std::size_t>(n_bins_);
    std::fill(joint_.begin(), joint_.end(), 0u);
    std::fill(c_yx_.begin(), c_yx_.end(), 0u);
    std::fill(c_yny_.begin(), c_yny_.end(), 0u);
    std::fill(c_y_.begin(), c_y_.end(), 0u);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t yn = static_cast<std::size_t>(yn_bins_[i]);
        const std::size_t y = static_cast<std::size_t>(y_bins_[i]);
        const std::size_t x = static_cast<std::size_t>(x_bins_[i]);
        joint_[(yn * b + y) * b + x] += 1;
        c_yx_[y * b + x] += 1;
        c_yny_[yn * b + y] += 1;
        c_y_[y] += 1;
    }
    // TE = (1/n) * sum c(y',y,x) * log2( c(y',y,x) c(y) / (c(y,x) c(y',y)) );
    // empty cells contribute nothing.
    double te = 0.0;
    for (std::size_t yn = 0; yn < b; ++yn) {
        for (std::size_t y = 0; y < b; ++y) {
            for (std::size_t x = 0; x < b; ++x) {
                const std::uint32_t c = joint_[(yn * b + y) * b + x];
                if (c == 0) continue;
                const double num = static_cast<double>(c) * static_cast<double>(c_y_[y]);
                const double den = static_cast<double>(c_yx_[y * b + x]) *
                                   static_cast<double>(c_yny_[yn * b + y]);
                te += static_cast<double>(c) * std::log2(num / den);
            }
        }
    }
    te /= static_cast<double>(n_);
    return std::max(te, 0.0);
}

double TransferEntropyEvaluator::permuted(PairRng& rng) {
    rng.shuffle(std::span<int>(x_bins_));
    return eval();
}

double transfer_entropy(const LaggedTriple& triple, const TEConfig& cfg) {
    return TransferEntropyEvaluator(triple, cfg).observed();
}

namespace {

// Residual sum of squares of the least-squares fit of y' on the given
// regressor columns (plus intercept), via normal equations with partial
// pivoting. Throws on a (near-)singular design.
double regression_rss(const std::vector<const std::vector<double>*>& cols,
                      const std::vector<double>& target) {
    const std::size_t p = cols.size() + 1; // intercept first
    const std::size_t n = target.size();
    double a[4][4] = {};
    double rhs[4] = {};
    auto col_val = [&](std::size_t j, std::size_t i) -> double {
        return j == 0 ? 1.0 : (*cols[j - 1])[i];
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            const double vr = col_val(r, i);
            for (std::size_t c = r; c < p; ++c) a[r][c] += vr * col_val(c, i);
            rhs[r] += vr * target[i];
        }
    }
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < r; ++c) a[r][c] = a[c][r];

    // Scale for the singularity check.
    double scale = 0.0;
    for (std::size_t r = 0; r < p; ++r) scale = std::max(scale, std::abs(a[r][r]));
    if (scale == 0.0) throw DegenerateSampleError("all-zero regression design");

    double beta[4] = {};
    for (std::size_t k = 0; k < p; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < p; ++r)
            if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
        if (std::abs(a[piv][k]) < 1e-12 * scale)
            throw DegenerateSampleError("collinear regression design");
        if (piv != k) {
            for (std::size_t c = 0; c < p; ++c) std::swap(a[k][c], a[piv][c]);
            std::swap(rhs[k], rhs[piv]);
        }
        for (std::size_t r = k + 1; r < p; ++r) {
            const double f = a[r][k] / a[k][k];
            for (std::size_t c = k; c < p; ++c) a[r][c] -= f * a[k][c];
            rhs[r] -= f * rhs[k];
        }
    }
    for (std::size_t k = p; k-- > 0;) {
        double v = rhs[k];
        for (std::size_t c = k + 1; c < p; ++c) v -= a[k][c] * beta[c];
        beta[k] = v / a[k][k];
    }

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = beta[0];
        for (std::size_t j = 1; j < p; ++j) fit += beta[j] * col_val(j, i);
        const double r = target[i] - fit;
        rss += r * r;
    }
    return rss;
}

} // namespace

double granger_f(const LaggedTriple& triple) {
    const std::size_t n = triple.n();
    if (n < 5) throw DegenerateSampleError("need at least 5 lag windows for the F test");
    const double rss_restricted = regression_rss({&triple.y_now}, triple.y_next);
    const double rss_full = regression_rss({&triple.y_now, &triple.x_now}, triple.y_next);
    if (rss_full <= 0.0)
        throw DegenerateSampleError("perfect fit: F undefined");
    const double df_resid = static_cast<double>(n) - 3.0;
    const double f = (rss_restricted - rss_full) / (rss_full / df_resid);
    return std::max(f, 0.0);
}

double net_information_flow(double te_xy, double te_yx) {
    return te_xy - te_yx;
}

GrangerEvaluator::GrangerEvaluator(const LaggedTriple& triple) : working_(triple) {
    observed_ = granger_f(working_);
}

double GrangerEvaluator::permuted(PairRng& rng) {
    rng.shuffle(std::span<double>(working_.x_now));
    return granger_f(working_);
}

} // namespace cryptonet
