#include "cryptonet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cryptonet/errors.hpp"

namespace cryptonet {

CorrelateKind correlate_kind_from_name(const std::string& name) {
    if (name == "price") return CorrelateKind::Price;
    if (name == "pos") return CorrelateKind::Pos;
    if (name == "neg") return CorrelateKind::Neg;
    if (name == "cross") return CorrelateKind::Cross;
    throw ConfigError("unknown correlation kind '" + name + "' (price|pos|neg|cross)");
}

EdgeMatrix run_correlate(const Panel& panel, CorrelateKind kind, const RunConfig& cfg) {
    const auto price_rows = panel.rows_of_kind(SeriesKind::Price);
    const auto pos_rows = panel.rows_of_kind(SeriesKind::PosSentiment);
    const auto neg_rows = panel.rows_of_kind(SeriesKind::NegSentiment);
    switch (kind) {
    case CorrelateKind::Price:
        if (price_rows.empty()) throw ConfigError("panel has no price series");
        return validate_all_pairs(panel, price_rows, price_rows, StatKind::TauPrice,
                                  cfg.corr_config());
    case CorrelateKind::Pos:
        if (pos_rows.empty()) throw ConfigError("panel has no positive sentiment series");
        return validate_all_pairs(panel, pos_rows, pos_rows, StatKind::TauPosSent,
                                  cfg.corr_config());
    case CorrelateKind::Neg:
        if (neg_rows.empty()) throw ConfigError("panel has no negative sentiment series");
        return validate_all_pairs(panel, neg_rows, neg_rows, StatKind::TauNegSent,
                                  cfg.corr_config());
    case CorrelateKind::Cross:
        if (pos_rows.empty())
            throw ConfigError("cross correlation requires positive sentiment series");
        if (price_rows.empty()) throw ConfigError("panel has no price series");
        return validate_all_pairs(panel, pos_rows, price_rows, StatKind::TauCross,
                                  cfg.corr_config());
    }
    throw ConfigError("bad correlation kind");
}

EdgeMatrix run_causality(const Panel& panel, bool sent_to_price, const RunConfig& cfg,
                         CausalityMethod method) {
    const auto price_rows = panel.rows_of_kind(SeriesKind::Price);
    const auto pos_rows = panel.rows_of_kind(SeriesKind::PosSentiment);
    if (price_rows.empty()) throw ConfigError("panel has no price series");
    if (pos_rows.empty()) throw ConfigError("panel has no positive sentiment series");
    const bool te = method == CausalityMethod::TransferEntropy;
    if (sent_to_price) {
        return validate_all_pairs(panel, pos_rows, price_rows,
                                  te ? StatKind::TeSentToPrice : StatKind::GrangerSentToPrice,
                                  cfg.te_config(), cfg.n_bins);
    }
    return validate_all_pairs(panel, price_rows, pos_rows,
                              te ? StatKind::TePriceToSent : StatKind::GrangerPriceToSent,
                              cfg.te_config(), cfg.n_bins);
}

std::string edge_summary_json(const EdgeMatrix& edges) {
    ValidatedNetwork net = build_network(edges);
    MetricsReport report = compute_metrics(net, false);

    double stat_sum = 0.0;
    std::size_t stat_count = 0;
    for (std::size_t i = 0; i < net.n_rows(); ++i) {
        const std::size_t j0 = (net.directed || net.bipartite) ? 0 : i + 1;
        for (std::size_t j = j0; j < net.n_cols(); ++j) {
            if (net.edge(i, j)) {
                stat_sum += net.stats[i * net.n_cols() + j];
                ++stat_count;
            }
        }
    }

    nlohmann::json doc;
    doc["kind"] = stat_kind_name(edges.kind);
    doc["n_nodes"] = net.row_nodes.size();
    doc["evaluated_pairs"] = net.evaluated_pairs();
    doc["valid_links"] = report.n_edges;
    doc["density"] = report.density;
    doc["avg_degree"] = report.avg_degree;
    doc["avg_valid_stat"] = stat_count ? stat_sum / static_cast<double>(stat_count) : 0.0;
    if (net.square()) doc["giant_size"] = report.giant_size;
    return doc.dump(2) + "\n";
}

QuartileReport centrality_quartiles(const EdgeMatrix& price_edges, const EdgeMatrix& te_s2p,
                                    const EdgeMatrix& te_p2s) {
    ValidatedNetwork price_net = build_network(price_edges);
    if (!price_net.square()) throw ConfigError("price edge file must be a within-price sweep");
    const std::vector<double> betweenness = weighted_betweenness(price_net);

    CentralityVector causality = combined_te_centrality(build_network(te_s2p),
                                                        build_network(te_p2s));
    std::map<std::string, double> links;
    for (std::size_t i = 0; i < causality.node_ids.size(); ++i)
        links[causality.node_ids[i]] = causality.values[i];

    // Shared assets only: those with both a betweenness rank and a causality count.
    struct Entry {
        std::string id;
        double betweenness;
        double links;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < price_net.row_nodes.size(); ++i) {
        auto it = links.find(price_net.row_nodes[i]);
        if (it != links.end()) entries.push_back({price_net.row_nodes[i], betweenness[i], it->second});
    }
    if (entries.size() < 8)
        throw ConfigError("centrality quartiles need at least 8 shared assets, got " +
                          std::to_string(entries.size()));

    // Descending betweenness, ties broken by ascending node id.
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.betweenness != b.betweenness) return a.betweenness > b.betweenness;
        return a.id < b.id;
    });

    QuartileReport report;
    report.n_assets = entries.size();
    const std::size_t quartile = entries.size() / 4;
    const std::size_t top20 = entries.size() / 5;
    double top_links = 0.0, bottom_links = 0.0, top20_links = 0.0, all_links = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        all_links += entries[i].links;
        if (i < quartile) top_links += entries[i].links;
        if (i < top20) top20_links += entries[i].links;
        if (i >= entries.size() - quartile) bottom_links += entries[i].links;
    }
    report.top_quartile_links = static_cast<std::size_t>(top_links);
    report.bottom_quartile_links = static_cast<std::size_t>(bottom_links);
    report.top20_share = all_links > 0.0 ? top20_links / all_links : 0.0;
    report.total_links = build_network(te_s2p).edge_count() + build_network(te_p2s).edge_count();
    return report;
}

std::string quartile_report_json(const QuartileReport& report) {
    nlohmann::json doc;
    doc["n_assets"] = report.n_assets;
    doc["top_quartile_links"] = report.top_quartile_links;
    doc["bottom_quartile_links"] = report.bottom_quartile_links;
    doc["top20_share"] = report.top20_share;
    doc["total_links"] = report.total_links;
    return doc.dump(2) + "\n";
}

} // namespace cryptonet
