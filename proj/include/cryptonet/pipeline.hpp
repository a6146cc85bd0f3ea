#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cryptonet/ingest.hpp"
#include "cryptonet/network.hpp"
#include "cryptonet/permval.hpp"
#include "cryptonet/similarity.hpp"

namespace cryptonet {

// Shared knobs of a pipeline run; every subcommand draws from this.
struct RunConfig {
    double z_star = 3.0;
    std::uint32_t n_permutations = 200;
    std::uint32_t min_obs_corr = 20; // strict ">" rule for correlations
    std::uint32_t min_obs_te = 40;   // strict ">" rule for transfer entropy
    int n_bins = 4;
    std::uint64_t seed = 0;
    ZeroVolumePolicy zero_volume = ZeroVolumePolicy::TreatMissing;

    PermutationConfig corr_config() const {
        return {n_permutations, z_star, min_obs_corr, seed};
    }
    PermutationConfig te_config() const { return {n_permutations, z_star, min_obs_te, seed}; }
};

enum class CorrelateKind { Price, Pos, Neg, Cross };
CorrelateKind correlate_kind_from_name(const std::string& name);

enum class CausalityMethod { TransferEntropy, Granger };

// Pairwise Kendall validation for one signal kind (or the bipartite
// sentiment-price cross kind, diagonal included).
EdgeMatrix run_correlate(const Panel& panel, CorrelateKind kind, const RunConfig& cfg);

// Both causality directions: first sentiment->price, then price->sentiment.
// Diagonals (within-currency causality) are included.
EdgeMatrix run_causality(const Panel& panel, bool sent_to_price, const RunConfig& cfg,
                         CausalityMethod method = CausalityMethod::TransferEntropy);

// Aggregate summary of a validated sweep (density, average degree, average
// valid statistic, giant component size) as a JSON string. Counts always
// equal a direct recount of the exported edge file.
std::string edge_summary_json(const EdgeMatrix& edges);

struct QuartileReport {
    std::size_t n_assets = 0;
    std::size_t top_quartile_links = 0;    // causality links of top-25% betweenness assets
    std::size_t bottom_quartile_links = 0; // same for the bottom 25%
    double top20_share = 0.0;              // top-20% assets' share of per-asset link counts
    std::size_t total_links = 0;           // valid directed edges across both TE networks
};

// Ranks assets by weighted betweenness in the validated price correlation
// network (ties broken by ascending node id) and compares causality link
// counts across centrality quartiles. Throws ConfigError below 8 shared assets.
QuartileReport centrality_quartiles(const EdgeMatrix& price_edges, const EdgeMatrix& te_s2p,
                                    const EdgeMatrix& te_p2s);
std::string quartile_report_json(const QuartileReport& report);

} // namespace cryptonet
