#include "cryptonet/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>

#include <nlohmann/json.hpp>

#include "cryptonet/errors.hpp"

namespace cryptonet {

namespace {

constexpr double kMinDistance = 1e-12; // clamp for zero-cost geodesic chains
constexpr double kDistTol = 1e-12;     // equal-length geodesic tolerance

} // namespace

std::size_t ValidatedNetwork::edge_count() const {
    std::size_t count = 0;
    if (directed || bipartite) {
        for (std::uint8_t a : adj) count += a;
        return count;
    }
    for (std::size_t i = 0; i < n_rows(); ++i)
        for (std::size_t j = i + 1; j < n_cols(); ++j) count += edge(i, j) ? 1 : 0;
    return count;
}

std::size_t ValidatedNetwork::evaluated_pairs() const {
    if (bipartite) return n_rows() * n_cols(); // diagonal evaluated too
    if (directed) return n_rows() * (n_cols() - 1) + (square() ? n_rows() : 0);
    return n_rows() * (n_rows() - 1) / 2;
}

ValidatedNetwork build_network(const EdgeMatrix& edges, double z_star, std::uint32_t min_obs) {
    ValidatedNetwork net;
    net.directed = stat_kind_is_directed(edges.kind);
    net.bipartite = edges.kind == StatKind::TauCross;
    net.row_nodes = edges.row_nodes;
    net.col_nodes = edges.col_nodes;
    const std::size_t nr = net.n_rows(), nc = net.n_cols();
    net.adj.assign(nr * nc, 0);
    net.weights.assign(nr * nc, 1.0);
    net.stats.assign(nr * nc, std::numeric_limits<double>::quiet_NaN());
    net.zs.assign(nr * nc, 0.0);
    const bool correlation = !stat_kind_is_directed(edges.kind);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const EdgeResult& e = edges.at(i, j);
            if (!edge_valid_at(e, z_star, min_obs)) continue;
            const std::size_t cell = i * nc + j;
            net.adj[cell] = 1;
            net.stats[cell] = e.statistic;
            net.zs[cell] = e.z;
            if (correlation) {
                const double w = 1.0 - e.statistic * e.statistic;
                net.weights[cell] = std::clamp(w, 0.0, 1.0);
            }
        }
    }
    return net;
}

ValidatedNetwork build_network(const EdgeMatrix& edges) {
    ValidatedNetwork net = build_network(edges, edges.config.z_star, edges.config.min_obs);
    // Honor the stored valid flags exactly (covers matrices loaded from CSV,
    // whose generating config is not serialized).
    const std::size_t nc = net.n_cols();
    for (std::size_t i = 0; i < net.n_rows(); ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const EdgeResult& e = edges.at(i, j);
            const std::size_t cell = i * nc + j;
            if (e.valid && !net.adj[cell]) {
                net.adj[cell] = 1;
                net.stats[cell] = e.statistic;
                net.zs[cell] = e.z;
                if (!stat_kind_is_directed(edges.kind))
                    net.weights[cell] =
                        std::clamp(1.0 - e.statistic * e.statistic, 0.0, 1.0);
            } else if (!e.valid && net.adj[cell]) {
                net.adj[cell] = 0;
                net.stats[cell] = std::numeric_limits<double>::quiet_NaN();
                net.zs[cell] = 0.0;
                net.weights[cell] = 1.0;
            }
        }
    }
    return net;
}

void degrees(const ValidatedNetwork& net, MetricsReport& report) {
    const std::size_t nr = net.n_rows(), nc = net.n_cols();
    if (net.directed || net.bipartite) {
        report.impacting.assign(nr, 0);
        report.impacted.assign(nc, 0);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                if (net.edge(i, j)) {
                    report.impacting[i] += 1;
                    report.impacted[j] += 1;
                }
            }
        }
    } else {
        report.degree.assign(nr, 0);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) report.degree[i] += net.edge(i, j) ? 1 : 0;
    }
}

std::vector<std::pair<double, double>> ccdf(const std::vector<std::uint32_t>& values) {
    if (values.empty()) throw ConfigError("ccdf of an empty value list");
    std::vector<std::uint32_t> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        // strictly-greater survival at this distinct value
        out.emplace_back(static_cast<double>(sorted[i]),
                         static_cast<double>(sorted.size() - j - 1) / n);
        i = j + 1;
    }
    return out;
}

namespace {

// Undirected neighbor view; directed networks are analyzed as weakly
// connected for components and symmetrized for path metrics.
std::vector<std::vector<std::pair<std::uint32_t, double>>>
undirected_adjacency(const ValidatedNetwork& net) {
    if (!net.square())
        throw ConfigError("path metrics need a square network (shared node set)");
    const std::size_t n = net.n_rows();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> nbr(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool fwd = net.edge(i, j), bwd = net.edge(j, i);
            if (!fwd && !bwd) continue;
            double w = std::numeric_limits<double>::infinity();
            if (fwd) w = std::min(w, net.weight(i, j));
            if (bwd) w = std::min(w, net.weight(j, i));
            nbr[i].emplace_back(static_cast<std::uint32_t>(j), w);
            nbr[j].emplace_back(static_cast<std::uint32_t>(i), w);
        }
    }
    return nbr;
}

struct ShortestPaths {
    std::vector<double> dist;                 // inf if unreachable
    std::vector<std::uint32_t> settle_order;  // vertices in settling order
    std::vector<double> sigma;                // geodesic multiplicities
    std::vector<std::vector<std::uint32_t>> preds;
};

// Dijkstra with geodesic counting. Predecessor edges require both the
// distance identity (within tolerance) and an earlier settling position, so
// zero-weight edges cannot create cycles in the path DAG.
ShortestPaths dijkstra_count(const std::vector<std::vector<std::pair<std::uint32_t, double>>>& nbr,
                             std::uint32_t source, bool count_paths) {
    const std::size_t n = nbr.size();
    ShortestPaths sp;
    sp.dist.assign(n, std::numeric_limits<double>::infinity());
    sp.dist[source] = 0.0;
    std::vector<std::uint8_t> settled(n, 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        sp.settle_order.push_back(u);
        for (auto [v, w] : nbr[u]) {
            const double nd = d + w;
            if (nd < sp.dist[v] - kDistTol) {
                sp.dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    if (!count_paths) return sp;

    sp.sigma.assign(n, 0.0);
    sp.sigma[source] = 1.0;
    sp.preds.resize(n);
    std::vector<std::uint32_t> settle_pos(n, 0);
    for (std::uint32_t k = 0; k < sp.settle_order.size(); ++k)
        settle_pos[sp.settle_order[k]] = k;
    for (std::uint32_t v : sp.settle_order) {
        if (v == source) continue;
        for (auto [u, w] : nbr[v]) {
            if (!std::isfinite(sp.dist[u])) continue;
            if (std::abs(sp.dist[u] + w - sp.dist[v]) <= kDistTol &&
                settle_pos[u] < settle_pos[v]) {
                sp.preds[v].push_back(u);
                sp.sigma[v] += sp.sigma[u];
            }
        }
    }
    return sp;
}

std::vector<double> closeness_impl(const ValidatedNetwork& net, bool parallel) {
    auto nbr = undirected_adjacency(net);
    const std::int64_t n = static_cast<std::int64_t>(nbr.size());
    std::vector<double> score(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        auto sp = dijkstra_count(nbr, static_cast<std::uint32_t>(i), false);
        double sum = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == i || !std::isfinite(sp.dist[static_cast<std::size_t>(j)])) continue;
            sum += 1.0 / std::max(sp.dist[static_cast<std::size_t>(j)], kMinDistance);
        }
        score[static_cast<std::size_t>(i)] = sum;
    }
    return score;
}

std::vector<double> betweenness_impl(const ValidatedNetwork& net, bool parallel) {
    auto nbr = undirected_adjacency(net);
    const std::int64_t n = static_cast<std::int64_t>(nbr.size());
    // Per-source dependency vectors reduced in fixed source order afterwards,
    // so sums are bitwise identical for any thread count.
    std::vector<std::vector<double>> per_source(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (std::int64_t s = 0; s < n; ++s) {
        auto sp = dijkstra_count(nbr, static_cast<std::uint32_t>(s), true);
        std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
        for (auto it = sp.settle_order.rbegin(); it != sp.settle_order.rend(); ++it) {
            const std::uint32_t w = *it;
            for (std::uint32_t u : sp.preds[w]) {
                delta[u] += sp.sigma[u] / sp.sigma[w] * (1.0 + delta[w]);
            }
        }
        delta[static_cast<std::size_t>(s)] = 0.0;
        per_source[static_cast<std::size_t>(s)] = std::move(delta);
    }
    std::vector<double> score(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t s = 0; s < n; ++s)
        for (std::int64_t i = 0; i < n; ++i)
            score[static_cast<std::size_t>(i)] += per_source[static_cast<std::size_t>(s)]
                                                            [static_cast<std::size_t>(i)];
    // ordered pairs were accumulated; undirected geodesics are symmetric
    for (double& v : score) v *= 0.5;
    return score;
}

} // namespace

std::vector<double> weighted_closeness(const ValidatedNetwork& net) {
    return closeness_impl(net, true);
}
std::vector<double> weighted_closeness_serial(const ValidatedNetwork& net) {
    return closeness_impl(net, false);
}
std::vector<double> weighted_betweenness(const ValidatedNetwork& net) {
    return betweenness_impl(net, true);
}
std::vector<double> weighted_betweenness_serial(const ValidatedNetwork& net) {
    return betweenness_impl(net, false);
}

void components(const ValidatedNetwork& net, MetricsReport& report) {
    auto nbr = undirected_adjacency(net);
    const std::size_t n = nbr.size();
    report.component_id.assign(n, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next_id = 0;
    std::vector<std::uint32_t> stack;
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < n; ++s) {
        if (report.component_id[s] != std::numeric_limits<std::uint32_t>::max()) continue;
        std::size_t size = 0;
        stack.push_back(static_cast<std::uint32_t>(s));
        report.component_id[s] = next_id;
        while (!stack.empty()) {
            const std::uint32_t u = stack.back();
            stack.pop_back();
            ++size;
            for (auto [v, w] : nbr[u]) {
                (void)w;
                if (report.component_id[v] == std::numeric_limits<std::uint32_t>::max()) {
                    report.component_id[v] = next_id;
                    stack.push_back(v);
                }
            }
        }
        sizes.push_back(size);
        ++next_id;
    }
    report.giant_size = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

MetricsReport compute_metrics(const ValidatedNetwork& net, bool with_centralities) {
    MetricsReport report;
    report.nodes = net.row_nodes;
    degrees(net, report);
    report.n_edges = net.edge_count();
    const std::size_t evaluated = net.evaluated_pairs();
    report.density = evaluated ? static_cast<double>(report.n_edges) /
                                     static_cast<double>(evaluated)
                               : 0.0;
    if (net.directed || net.bipartite) {
        report.avg_degree =
            net.n_rows() ? static_cast<double>(report.n_edges) / static_cast<double>(net.n_rows())
                         : 0.0;
    } else {
        report.avg_degree = net.n_rows() ? 2.0 * static_cast<double>(report.n_edges) /
                                               static_cast<double>(net.n_rows())
                                         : 0.0;
    }
    if (net.square()) {
        components(net, report);
        if (with_centralities) {
            report.closeness = weighted_closeness(net);
            report.betweenness = weighted_betweenness(net);
        }
    }
    return report;
}

void write_metrics_json(const MetricsReport& report, bool directed, std::ostream& out) {
    nlohmann::json doc;
    auto& nodes = doc["nodes"];
    for (std::size_t i = 0; i < report.nodes.size(); ++i) {
        nlohmann::json& n = nodes[report.nodes[i]];
        if (!report.degree.empty()) n["degree"] = report.degree[i];
        if (!report.impacting.empty()) n["impacting"] = report.impacting[i];
        if (!report.impacted.empty()) n["impacted"] = report.impacted[i];
        if (!report.component_id.empty()) n["component"] = report.component_id[i];
        if (!report.closeness.empty()) n["closeness"] = report.closeness[i];
        if (!report.betweenness.empty()) n["betweenness"] = report.betweenness[i];
    }
    doc["aggregates"] = {
        {"n_nodes", report.nodes.size()},   {"n_edges", report.n_edges},
        {"avg_degree", report.avg_degree},  {"density", report.density},
        {"giant_size", report.giant_size},  {"directed", directed},
    };
    out << doc.dump(2) << "\n";
}

void save_metrics_json(const MetricsReport& report, bool directed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    write_metrics_json(report, directed, out);
}

void write_edge_list(const ValidatedNetwork& net, std::ostream& out) {
    out << "src,dst,stat,weight,z\n";
    char buf[128];
    for (std::size_t i = 0; i < net.n_rows(); ++i) {
        const std::size_t j0 = (net.directed || net.bipartite) ? 0 : i + 1;
        for (std::size_t j = j0; j < net.n_cols(); ++j) {
            if (!net.edge(i, j)) continue;
            const std::size_t cell = i * net.n_cols() + j;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", net.stats[cell],
                          net.weights[cell], net.zs[cell]);
            out << net.row_nodes[i] << ',' << net.col_nodes[j] << ',' << buf << '\n';
        }
    }
}

void write_ccdf(const std::vector<std::pair<double, double>>& points, std::ostream& out) {
    out << "x,ccdf\n";
    char buf[64];
    for (const auto& [x, p] : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", x, p);
        out << buf << '\n';
    }
}

} // namespace cryptonet
