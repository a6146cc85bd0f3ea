#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cryptonet/permval.hpp"

namespace cryptonet {

// Thresholded view of an EdgeMatrix. Square unless bipartite with differing
// node sets; undirected correlation networks have symmetric adjacency and
// distance-like edge weights w = 1 - tau^2.
struct ValidatedNetwork {
    bool directed = false;
    bool bipartite = false;
    std::vector<std::string> row_nodes;
    std::vector<std::string> col_nodes; // == row_nodes unless bipartite
    std::vector<std::uint8_t> adj;      // n_rows x n_cols
    std::vector<double> weights;        // valid cells only, 1.0 elsewhere
    std::vector<double> stats;          // underlying statistic (NaN where absent)
    std::vector<double> zs;

    std::size_t n_rows() const { return row_nodes.size(); }
    std::size_t n_cols() const { return col_nodes.size(); }
    bool square() const { return row_nodes == col_nodes; }
    bool edge(std::size_t i, std::size_t j) const { return adj[i * n_cols() + j] != 0; }
    double weight(std::size_t i, std::size_t j) const { return weights[i * n_cols() + j]; }

    std::size_t edge_count() const;      // unordered pairs if undirected
    std::size_t evaluated_pairs() const; // pair universe for the density ratio
};

struct MetricsReport {
    std::vector<std::string> nodes;
    std::vector<std::uint32_t> degree;    // undirected
    std::vector<std::uint32_t> impacting; // directed/bipartite row sums
    std::vector<std::uint32_t> impacted;  // column sums
    std::vector<std::uint32_t> component_id;
    std::size_t giant_size = 0;
    std::size_t n_edges = 0;
    double avg_degree = 0.0;
    double density = 0.0;
    std::vector<double> closeness;
    std::vector<double> betweenness;
};

// Threshold with the EdgeMatrix's own config, or explicitly.
ValidatedNetwork build_network(const EdgeMatrix& edges);
ValidatedNetwork build_network(const EdgeMatrix& edges, double z_star, std::uint32_t min_obs);

// Degree fields only (degree for undirected; impacting/impacted otherwise).
void degrees(const ValidatedNetwork& net, MetricsReport& report);

// Survival function P(value > x) at each distinct value, non-increasing.
std::vector<std::pair<double, double>> ccdf(const std::vector<std::uint32_t>& values);

// Connected components (weak for directed); fills component_id and giant_size.
void components(const ValidatedNetwork& net, MetricsReport& report);

// Harmonic closeness: sum over reachable j != i of 1 / d(i, j), shortest
// paths under the edge weights. Distances below 1e-12 (perfect-correlation
// chains) are clamped to 1e-12. OpenMP-parallel over source nodes.
std::vector<double> weighted_closeness(const ValidatedNetwork& net);

// Fraction-of-geodesics betweenness (Brandes accumulation over a shortest
// path DAG); unordered pairs for undirected networks. Parallel over sources.
std::vector<double> weighted_betweenness(const ValidatedNetwork& net);

// Serial reference implementations, kept for testing the parallel kernels.
std::vector<double> weighted_closeness_serial(const ValidatedNetwork& net);
std::vector<double> weighted_betweenness_serial(const ValidatedNetwork& net);

// Full report: degrees, components, density, centralities.
MetricsReport compute_metrics(const ValidatedNetwork& net, bool with_centralities = true);

// JSON document keyed by node id, plus network-level aggregates.
void write_metrics_json(const MetricsReport& report, bool directed, std::ostream& out);
void save_metrics_json(const MetricsReport& report, bool directed, const std::string& path);

// Valid edges only: src,dst,stat,weight,z.
void write_edge_list(const ValidatedNetwork& net, std::ostream& out);

// Two-column plot-ready CCDF (x,ccdf).
void write_ccdf(const std::vector<std::pair<double, double>>& points, std::ostream& out);

} // namespace cryptonet
