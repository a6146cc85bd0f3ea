#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cryptonet/panel.hpp"

namespace cryptonet {

// Ground-truth synthetic panel: factor-correlated price-like series and
// lag-1 coupled sentiment-like series. All randomness flows from `seed`.
struct SynthSpec {
    std::size_t n_assets = 50;
    std::size_t n_days = 150;
    double factor_loading = 0.0;    // in [0, 1): common-driver strength
    double loading_spread = 0.0;    // per-asset loading jitter: u_i ~ U[1-spread, 1]
    double factor_ar = 0.0;         // AR(1) persistence of the factor, [0, 1)
    double sentiment_loading = 0.0; // sentiment series' own factor loading, [0, 1)
    double couple_fraction = 0.0;   // share of assets with sentiment->price coupling
    double coupling = 0.0;          // lag-1 coefficient of own positive sentiment
    double missing_rate = 0.0;      // per-cell mask thinning, [0, 1)
    std::uint64_t seed = 0;

    void validate() const;
};

struct GroundTruth {
    std::vector<std::string> coupled_assets; // own pos-sentiment -> own price, lag 1
    std::vector<std::string> factor_assets;  // assets loading on the common driver
};

struct SynthPanel {
    Panel panel;
    GroundTruth truth;
};

// Rows per asset: price, pos_sentiment, neg_sentiment (log-variations
// directly; the panel plugs into the same pipeline as ingested data).
SynthPanel generate(const SynthSpec& spec);

} // namespace cryptonet
