#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

#include <omp.h>

#include "cryptonet/network.hpp"
#include "cryptonet/rng.hpp"

using namespace cryptonet;

namespace {

// A hand-built undirected network over n nodes with explicit weighted edges.
ValidatedNetwork make_undirected(std::size_t n,
                                 const std::vector<std::tuple<int, int, double>>& edges) {
    ValidatedNetwork net;
    for (std::size_t i = 0; i < n; ++i) net.row_nodes.push_back("N" + std::to_string(i));
    net.col_nodes = net.row_nodes;
    net.adj.assign(n * n, 0);
    net.weights.assign(n * n, 1.0);
    net.stats.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    net.zs.assign(n * n, 0.0);
    for (const auto& [a, b, w] : edges) {
        net.adj[a * n + b] = net.adj[b * n + a] = 1;
        net.weights[a * n + b] = net.weights[b * n + a] = w;
    }
    return net;
}

EdgeMatrix matrix_from_taus(const std::vector<std::vector<double>>& taus,
                            const std::vector<std::vector<int>>& valid) {
    EdgeMatrix m;
    m.kind = StatKind::TauPrice;
    const std::size_t n = taus.size();
    for (std::size_t i = 0; i < n; ++i) {
        m.row_nodes.push_back("N" + std::to_string(i));
        m.row_panel_rows.push_back(static_cast<std::uint32_t>(i));
    }
    m.col_nodes = m.row_nodes;
    m.col_panel_rows = m.row_panel_rows;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            EdgeResult e;
            e.src = static_cast<std::uint32_t>(i);
            e.dst = static_cast<std::uint32_t>(j);
            e.statistic = taus[i][j];
            e.n_obs = 100;
            e.z = valid[i][j] ? 10.0 : 0.0;
            e.null_std = 1.0;
            e.valid = valid[i][j] != 0;
            m.cells.push_back(e);
        }
    return m;
}

constexpr double kTol = 1e-12; // same geodesic tolerance the library pins

// Exhaustive simple-path oracle: closeness and betweenness by enumerating
// every simple path between every ordered pair.
struct BruteCentrality {
    std::vector<double> closeness;
    std::vector<double> betweenness;
};

void enumerate_paths(const ValidatedNetwork& net, std::size_t cur, std::size_t dst, double len,
                     std::vector<int>& on_path, std::vector<std::size_t>& path,
                     std::vector<std::pair<double, std::vector<std::size_t>>>& found) {
    if (cur == dst) {
        found.emplace_back(len, path);
        return;
    }
    const std::size_t n = net.n_rows();
    for (std::size_t next = 0; next < n; ++next) {
        if (!net.edge(cur, next) || on_path[next]) continue;
        on_path[next] = 1;
        path.push_back(next);
        enumerate_paths(net, next, dst, len + net.weight(cur, next), on_path, path, found);
        path.pop_back();
        on_path[next] = 0;
    }
}

BruteCentrality brute_centrality(const ValidatedNetwork& net) {
    const std::size_t n = net.n_rows();
    BruteCentrality out;
    out.closeness.assign(n, 0.0);
    out.betweenness.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (s == t) continue;
            std::vector<std::pair<double, std::vector<std::size_t>>> found;
            std::vector<int> on_path(n, 0);
            std::vector<std::size_t> path{s};
            on_path[s] = 1;
            enumerate_paths(net, s, t, 0.0, on_path, path, found);
            if (found.empty()) continue;
            double best = found.front().first;
            for (const auto& [len, p] : found) best = std::min(best, len);
            std::vector<const std::vector<std::size_t>*> geodesics;
            for (const auto& [len, p] : found)
                if (len <= best + kTol) geodesics.push_back(&p);
            out.closeness[s] += 1.0 / std::max(best, kTol);
            const double share = 1.0 / static_cast<double>(geodesics.size());
            for (const auto* g : geodesics)
                for (std::size_t k = 1; k + 1 < g->size(); ++k)
                    out.betweenness[(*g)[k]] += share;
        }
    }
    for (auto& b : out.betweenness) b *= 0.5; // undirected: unordered pairs
    return out;
}

} // namespace

TEST_CASE("build_network applies the 1 - tau^2 weight rule") {
    const std::vector<std::vector<double>> taus{{0, 0.5, 1.0, 0.0},
                                                {0.5, 0, -1.0, 0.2},
                                                {1.0, -1.0, 0, 0.3},
                                                {0.0, 0.2, 0.3, 0}};
    const std::vector<std::vector<int>> valid{{0, 1, 1, 1},
                                              {1, 0, 1, 0},
                                              {1, 1, 0, 0},
                                              {1, 0, 0, 0}};
    const ValidatedNetwork net = build_network(matrix_from_taus(taus, valid));
    CHECK(net.edge(0, 1));
    CHECK(net.weight(0, 1) == doctest::Approx(0.75).epsilon(1e-15)); // 1 - 0.25
    CHECK(net.weight(0, 2) == doctest::Approx(0.0).epsilon(1e-15));  // tau = 1
    CHECK(net.weight(1, 2) == doctest::Approx(0.0).epsilon(1e-15));  // tau = -1
    CHECK(net.weight(0, 3) == doctest::Approx(1.0).epsilon(1e-15));  // tau = 0
    CHECK_FALSE(net.edge(1, 3));
    CHECK(net.edge_count() == 4);
    // symmetry of the undirected adjacency
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(net.edge(i, j) == net.edge(j, i));
}

TEST_CASE("all-invalid edge matrices build an edgeless network") {
    const std::vector<std::vector<double>> taus{{0, 0.5}, {0.5, 0}};
    const std::vector<std::vector<int>> valid{{0, 0}, {0, 0}};
    const ValidatedNetwork net = build_network(matrix_from_taus(taus, valid));
    CHECK(net.edge_count() == 0);
    MetricsReport r;
    degrees(net, r);
    CHECK(r.degree == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("degrees of a triangle and a directed single edge") {
    const ValidatedNetwork tri = make_undirected(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    MetricsReport r;
    degrees(tri, r);
    CHECK(r.degree == std::vector<std::uint32_t>{2, 2, 2});

    ValidatedNetwork d = make_undirected(2, {});
    d.directed = true;
    d.adj[0 * 2 + 1] = 1; // 0 -> 1 only
    MetricsReport rd;
    degrees(d, rd);
    CHECK(rd.impacting == std::vector<std::uint32_t>{1, 0});
    CHECK(rd.impacted == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("ccdf is the strict survival function") {
    const auto pts = ccdf({3, 1, 1, 0});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].first == 0);
    CHECK(pts[0].second == doctest::Approx(0.75));
    CHECK(pts[1].first == 1);
    CHECK(pts[1].second == doctest::Approx(0.25));
    CHECK(pts[2].first == 3);
    CHECK(pts[2].second == 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].second <= pts[k - 1].second);

    const auto flat = ccdf({2, 2, 2});
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].second == 0.0);

    const auto single = ccdf({5});
    REQUIRE(single.size() == 1);
    CHECK(single[0].first == 5);
    CHECK(single[0].second == 0.0);
}

TEST_CASE("components partition the nodes") {
    const ValidatedNetwork net =
        make_undirected(4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); // triangle + isolated 3
    MetricsReport r;
    components(net, r);
    CHECK(r.giant_size == 3);
    CHECK(r.component_id[0] == r.component_id[1]);
    CHECK(r.component_id[1] == r.component_id[2]);
    CHECK(r.component_id[3] != r.component_id[0]);

    const ValidatedNetwork empty5 = make_undirected(5, {});
    MetricsReport re;
    components(empty5, re);
    CHECK(re.giant_size == 1);
    std::vector<std::uint32_t> ids = re.component_id;
    std::sort(ids.begin(), ids.end());
    CHECK(std::unique(ids.begin(), ids.end()) == ids.end()); // five distinct components

    const ValidatedNetwork path5 =
        make_undirected(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    MetricsReport rp;
    components(path5, rp);
    CHECK(rp.giant_size == 5);
}

TEST_CASE("closeness and betweenness on a 3-node path") {
    const ValidatedNetwork net = make_undirected(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto close = weighted_closeness(net);
    CHECK(close[1] == doctest::Approx(2.0));
    CHECK(close[0] == doctest::Approx(1.5));
    CHECK(close[2] == doctest::Approx(1.5));
    const auto btw = weighted_betweenness(net);
    CHECK(btw[1] == doctest::Approx(1.0));
    CHECK(btw[0] == doctest::Approx(0.0));
    CHECK(btw[2] == doctest::Approx(0.0));
}

TEST_CASE("complete graphs with equal weights have zero betweenness everywhere") {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) edges.emplace_back(i, j, 0.7);
    const auto btw = weighted_betweenness(make_undirected(5, edges));
    for (double b : btw) CHECK(b == doctest::Approx(0.0));
}

TEST_CASE("isolated nodes have zero closeness") {
    const auto close = weighted_closeness(make_undirected(3, {{0, 1, 0.5}}));
    CHECK(close[2] == 0.0);
    CHECK(close[0] == doctest::Approx(2.0));
}

TEST_CASE("centralities match the exhaustive-path oracle on random small graphs") {
    PairRng rng(404, 0, 0, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + rng.next_below(6); // <= 8 nodes
        std::vector<std::tuple<int, int, double>> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (rng.next_below(100) >= 45) continue;
                // mix of tie-prone discrete weights (forcing equal-length
                // geodesic multiplicities) and generic continuous ones
                double w;
                switch (rng.next_below(4)) {
                case 0: w = 1.0; break;
                case 1: w = 0.5; break;
                case 2: w = 0.25; break;
                default: w = 0.01 + 0.99 * rng.next_double();
                }
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
            }
        const ValidatedNetwork net = make_undirected(n, edges);
        const BruteCentrality oracle = brute_centrality(net);
        const auto close = weighted_closeness(net);
        const auto btw = weighted_betweenness(net);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(close[i] - oracle.closeness[i]) <= 1e-9);
            REQUIRE(std::abs(btw[i] - oracle.betweenness[i]) <= 1e-9);
        }
    }
}

TEST_CASE("zero-weight chains clamp distances instead of dividing by zero") {
    // two tau = +/-1 edges in a row: every pairwise distance is 0, clamped at 1e-12
    const ValidatedNetwork net = make_undirected(3, {{0, 1, 0.0}, {1, 2, 0.0}});
    const auto close = weighted_closeness(net);
    CHECK(close[0] == doctest::Approx(2e12).epsilon(1e-9));
    CHECK(close[1] == doctest::Approx(2e12).epsilon(1e-9));
    const auto btw = weighted_betweenness(net);
    CHECK(btw[1] == doctest::Approx(1.0));
    CHECK(btw[0] == doctest::Approx(0.0));
}

TEST_CASE("parallel and serial centralities are bitwise identical") {
    PairRng rng(505, 1, 1, 1);
    std::vector<std::tuple<int, int, double>> edges;
    const std::size_t n = 30;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.next_below(5) == 0)
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j), rng.next_double());
    const ValidatedNetwork net = make_undirected(n, edges);
    CHECK(weighted_closeness(net) == weighted_closeness_serial(net));
    CHECK(weighted_betweenness(net) == weighted_betweenness_serial(net));

    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto close1 = weighted_closeness(net);
    const auto btw1 = weighted_betweenness(net);
    omp_set_num_threads(max_threads);
    CHECK(weighted_closeness(net) == close1);
    CHECK(weighted_betweenness(net) == btw1);
}

TEST_CASE("compute_metrics ties the aggregates together") {
    const ValidatedNetwork net =
        make_undirected(4, {{0, 1, 0.5}, {1, 2, 0.5}, {0, 2, 0.5}});
    const MetricsReport r = compute_metrics(net);
    CHECK(r.n_edges == 3);
    CHECK(r.giant_size == 3);
    std::uint64_t deg_sum = 0;
    for (auto d : r.degree) deg_sum += d;
    CHECK(deg_sum == 2 * r.n_edges);
    CHECK(r.avg_degree == doctest::Approx(6.0 / 4.0));
    CHECK(r.density == doctest::Approx(3.0 / 6.0));

    std::ostringstream json;
    write_metrics_json(r, false, json);
    CHECK(json.str().find("\"giant_size\"") != std::string::npos);
    CHECK(json.str().find("N0") != std::string::npos);
}

TEST_CASE("edge list and ccdf exports are well formed") {
    const std::vector<std::vector<double>> taus{{0, 0.5}, {0.5, 0}};
    const std::vector<std::vector<int>> valid{{0, 1}, {1, 0}};
    const ValidatedNetwork net = build_network(matrix_from_taus(taus, valid));
    std::ostringstream edges;
    write_edge_list(net, edges);
    CHECK(edges.str().rfind("src,dst,stat,weight,z", 0) == 0);
    CHECK(edges.str().find("N0,N1") != std::string::npos);

    std::ostringstream cc;
    write_ccdf(ccdf({2, 1, 0}), cc);
    CHECK(cc.str().rfind("x,ccdf", 0) == 0);
}
