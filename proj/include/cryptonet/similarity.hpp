#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cryptonet/network.hpp"

namespace cryptonet {

// A per-node centrality with its network tag (P, pS, nS, TESP).
struct CentralityVector {
    std::vector<std::string> node_ids;
    std::vector<double> values;
    std::string tag;
    std::size_t dropped_nodes = 0; // alignment casualties, if any
};

// Degree (or impacting+impacted for directed) centrality of one network.
CentralityVector degree_centrality(const ValidatedNetwork& net, const std::string& tag);

// Combined causality centrality: per asset, the sum of incoming and outgoing
// valid edges across both directed transfer entropy networks. Mismatched
// asset sets are aligned by intersection (dropped count reported).
CentralityVector combined_te_centrality(const ValidatedNetwork& te_s2p,
                                        const ValidatedNetwork& te_p2s);

struct CompareResult {
    double rho = 0.0;
    double t_p_value = 1.0;
    std::size_t n = 0;
};

// Spearman correlation of the two vectors on their node-id overlap, with a
// two-sided Student-t significance test (t = rho * sqrt((n-2)/(1-rho^2))).
CompareResult compare_networks(const CentralityVector& a, const CentralityVector& b);

// Network-pair column order of the similarity table.
inline constexpr std::array<const char*, 6> kSweepPairs = {
    "P-pS", "P-nS", "pS-nS", "TESP-P", "TESP-pS", "TESP-nS"};

struct SweepRow {
    double z = 0.0;
    std::array<std::optional<CompareResult>, 6> entries; // nullopt = undefined
};

struct ThresholdSweep {
    std::vector<SweepRow> rows;
};

struct SweepInputs {
    const EdgeMatrix* price;    // tau within prices
    const EdgeMatrix* pos;      // tau within positive sentiment
    const EdgeMatrix* neg;      // tau within negative sentiment
    const EdgeMatrix* te_s2p;   // sentiment -> price
    const EdgeMatrix* te_p2s;   // price -> sentiment
};

// Re-thresholds the cached edge results at each z (statistics and null
// moments are threshold-independent; nothing is recomputed) and emits the
// degree-centrality similarity per network pair. Zero-degree nodes are
// included unless exclude_zero_degree is set.
ThresholdSweep threshold_sweep(const SweepInputs& inputs, const std::vector<double>& z_values,
                               std::uint32_t min_obs_corr, std::uint32_t min_obs_te,
                               bool exclude_zero_degree = false);

// Comma-separated tables, one row per z: rho values, and the matching t-test
// p-values. Undefined entries print as "undefined".
void write_sweep_csv(const ThresholdSweep& sweep, std::ostream& out);
void write_sweep_pvalues_csv(const ThresholdSweep& sweep, std::ostream& out);

} // namespace cryptonet
