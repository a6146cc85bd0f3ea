#include "cryptonet/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <boost/math/distributions/students_t.hpp>

#include "cryptonet/errors.hpp"
#include "cryptonet/rankstats.hpp"

namespace cryptonet {

CentralityVector degree_centrality(const ValidatedNetwork& net, const std::string& tag) {
    MetricsReport report;
    degrees(net, report);
    CentralityVector cv;
    cv.tag = tag;
    if (net.directed || net.bipartite) {
        // impacting + impacted per asset, aligned by id
        std::map<std::string, double> total;
        for (std::size_t i = 0; i < net.n_rows(); ++i)
            total[net.row_nodes[i]] += report.impacting[i];
        for (std::size_t j = 0; j < net.n_cols(); ++j)
            total[net.col_nodes[j]] += report.impacted[j];
        for (const auto& [id, v] : total) {
            cv.node_ids.push_back(id);
            cv.values.push_back(v);
        }
    } else {
        cv.node_ids = net.row_nodes;
        cv.values.assign(report.degree.begin(), report.degree.end());
    }
    return cv;
}

CentralityVector combined_te_centrality(const ValidatedNetwork& te_s2p,
                                        const ValidatedNetwork& te_p2s) {
    CentralityVector a = degree_centrality(te_s2p, "TESP");
    CentralityVector b = degree_centrality(te_p2s, "TESP");
    std::map<std::string, double> bv;
    for (std::size_t i = 0; i < b.node_ids.size(); ++i) bv[b.node_ids[i]] = b.values[i];

    CentralityVector out;
    out.tag = "TESP";
    for (std::size_t i = 0; i < a.node_ids.size(); ++i) {
        auto it = bv.find(a.node_ids[i]);
        if (it == bv.end()) {
            out.dropped_nodes += 1;
            continue;
        }
        out.node_ids.push_back(a.node_ids[i]);
        out.values.push_back(a.values[i] + it->second);
        bv.erase(it);
    }
    out.dropped_nodes += bv.size();
    return out;
}

CompareResult compare_networks(const CentralityVector& a, const CentralityVector& b) {
    std::map<std::string, double> bv;
    for (std::size_t i = 0; i < b.node_ids.size(); ++i) bv[b.node_ids[i]] = b.values[i];
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < a.node_ids.size(); ++i) {
        auto it = bv.find(a.node_ids[i]);
        if (it == bv.end()) continue;
        xs.push_back(a.values[i]);
        ys.push_back(it->second);
    }
    if (xs.size() < 3)
        throw DegenerateSampleError("network comparison needs an overlap of at least 3 nodes");

    CompareResult result;
    result.n = xs.size();
    result.rho = spearman_rho(xs, ys);
    const double nf = static_cast<double>(result.n);
    if (std::abs(result.rho) >= 1.0) {
        result.t_p_value = 0.0;
    } else {
        const double t = result.rho * std::sqrt((nf - 2.0) / (1.0 - result.rho * result.rho));
        boost::math::students_t dist(nf - 2.0);
        result.t_p_value = 2.0 * boost::math::cdf(dist, -std::abs(t));
    }
    return result;
}

namespace {

std::optional<CentralityVector> drop_zero_nodes(const CentralityVector& cv, bool exclude) {
    if (!exclude) return cv;
    CentralityVector out;
    out.tag = cv.tag;
    for (std::size_t i = 0; i < cv.node_ids.size(); ++i) {
        if (cv.values[i] != 0.0) {
            out.node_ids.push_back(cv.node_ids[i]);
            out.values.push_back(cv.values[i]);
        }
    }
    if (out.node_ids.empty()) return std::nullopt;
    return out;
}

} // namespace

ThresholdSweep threshold_sweep(const SweepInputs& inputs, const std::vector<double>& z_values,
                               std::uint32_t min_obs_corr, std::uint32_t min_obs_te,
                               bool exclude_zero_degree) {
    if (!std::is_sorted(z_values.begin(), z_values.end()))
        throw ConfigError("sweep z values must be ascending");
    if (z_values.empty()) throw ConfigError("sweep needs at least one z value");

    ThresholdSweep sweep;
    for (double z : z_values) {
        SweepRow row;
        row.z = z;
        auto p = drop_zero_nodes(
            degree_centrality(build_network(*inputs.price, z, min_obs_corr), "P"),
            exclude_zero_degree);
        auto ps = drop_zero_nodes(
            degree_centrality(build_network(*inputs.pos, z, min_obs_corr), "pS"),
            exclude_zero_degree);
        auto ns = drop_zero_nodes(
            degree_centrality(build_network(*inputs.neg, z, min_obs_corr), "nS"),
            exclude_zero_degree);
        auto tesp = drop_zero_nodes(
            combined_te_centrality(build_network(*inputs.te_s2p, z, min_obs_te),
                                   build_network(*inputs.te_p2s, z, min_obs_te)),
            exclude_zero_degree);

        const std::array<std::pair<const std::optional<CentralityVector>*,
                                   const std::optional<CentralityVector>*>,
                         6>
            pairs = {{{&p, &ps}, {&p, &ns}, {&ps, &ns}, {&tesp, &p}, {&tesp, &ps}, {&tesp, &ns}}};
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto& [av, bv] = pairs[k];
            if (!av->has_value() || !bv->has_value()) continue;
            try {
                row.entries[k] = compare_networks(**av, **bv);
            } catch (const DegenerateSampleError&) {
                // edgeless (constant-degree) network at this threshold
            }
        }
        sweep.rows.push_back(std::move(row));
    }
    return sweep;
}

namespace {

void write_sweep_table(const ThresholdSweep& sweep, std::ostream& out, bool pvalues) {
    out << "z";
    for (const char* tag : kSweepPairs) out << ',' << tag;
    out << '\n';
    char buf[40];
    for (const auto& row : sweep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.z);
        out << buf;
        for (const auto& entry : row.entries) {
            if (entry) {
                std::snprintf(buf, sizeof buf, "%.17g", pvalues ? entry->t_p_value : entry->rho);
                out << ',' << buf;
            } else {
                out << ",undefined";
            }
        }
        out << '\n';
    }
}

} // namespace

void write_sweep_csv(const ThresholdSweep& sweep, std::ostream& out) {
    write_sweep_table(sweep, out, false);
}

void write_sweep_pvalues_csv(const ThresholdSweep& sweep, std::ostream& out) {
    write_sweep_table(sweep, out, true);
}

} // namespace cryptonet
