#include "cryptonet/permval.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <omp.h>

namespace cryptonet {

const char* stat_kind_name(StatKind k) {
    switch (k) {
    case StatKind::TauPrice: return "tau_price";
    case StatKind::TauPosSent: return "tau_pos";
    case StatKind::TauNegSent: return "tau_neg";
    case StatKind::TauCross: return "tau_cross";
    case StatKind::TeSentToPrice: return "te_s2p";
    case StatKind::TePriceToSent: return "te_p2s";
    case StatKind::GrangerSentToPrice: return "granger_s2p";
    case StatKind::GrangerPriceToSent: return "granger_p2s";
    }
    return "?";
}

StatKind stat_kind_from_name(const std::string& name) {
    for (StatKind k : {StatKind::TauPrice, StatKind::TauPosSent, StatKind::TauNegSent,
                       StatKind::TauCross, StatKind::TeSentToPrice, StatKind::TePriceToSent,
                       StatKind::GrangerSentToPrice, StatKind::GrangerPriceToSent}) {
        if (name == stat_kind_name(k)) return k;
    }
    throw ParseError("unknown statistic kind: '" + name + "'");
}

bool stat_kind_is_symmetric(StatKind k) {
    return k == StatKind::TauPrice || k == StatKind::TauPosSent || k == StatKind::TauNegSent;
}

bool stat_kind_is_directed(StatKind k) {
    return k == StatKind::TeSentToPrice || k == StatKind::TePriceToSent ||
           k == StatKind::GrangerSentToPrice || k == StatKind::GrangerPriceToSent;
}

bool stat_kind_is_te(StatKind k) {
    return k == StatKind::TeSentToPrice || k == StatKind::TePriceToSent;
}

void PermutationConfig::validate() const {
    if (n_permutations < 20)
        throw ConfigError("n_permutations must be >= 20");
    if (!(z_star > 0.0))
        throw ConfigError("z_star must be positive");
    if (min_obs < 2)
        throw ConfigError("min_obs must be >= 2");
}

bool edge_valid_at(const EdgeResult& e, double z_star, std::uint32_t min_obs) {
    return !e.degenerate && !std::isnan(e.statistic) && e.n_obs > min_obs &&
           e.null_std > 0.0 && e.z > z_star;
}

namespace {

EdgeResult sentinel_result(std::uint32_t src, std::uint32_t dst, std::size_t n_obs,
                           bool degenerate) {
    EdgeResult r;
    r.src = src;
    r.dst = dst;
    r.n_obs = static_cast<std::uint32_t>(n_obs);
    r.statistic = std::numeric_limits<double>::quiet_NaN();
    r.degenerate = degenerate;
    return r;
}

// One pair, optimized evaluators (shared bins / pre-sorted margins).
EdgeResult compute_cell_fast(const Panel& panel, std::uint32_t src, std::uint32_t dst,
                             StatKind kind, const PermutationConfig& cfg, const TEConfig& te_cfg) {
    const PairIdentity id{src, dst, kind};
    try {
        if (stat_kind_is_directed(kind)) {
            LaggedTriple triple = build_lagged_triple(panel, src, dst);
            if (triple.n() <= cfg.min_obs) return sentinel_result(src, dst, triple.n(), false);
            if (stat_kind_is_te(kind)) {
                TransferEntropyEvaluator ev(triple, te_cfg);
                return permutation_z_with(ev, triple.n(), cfg, id);
            }
            GrangerEvaluator ev(triple);
            return permutation_z_with(ev, triple.n(), cfg, id);
        }
        Overlap overlap = pairwise_overlap(panel, src, dst);
        if (overlap.n <= cfg.min_obs) return sentinel_result(src, dst, overlap.n, false);
        KendallEvaluator ev(overlap.xs, overlap.ys);
        return permutation_z_with(ev, overlap.n, cfg, id);
    } catch (const DegenerateSampleError&) {
        const std::size_t n_obs = stat_kind_is_directed(kind)
                                      ? build_lagged_triple(panel, src, dst).n()
                                      : overlap_count(panel, src, dst);
        return sentinel_result(src, dst, n_obs, true);
    }
}

// Reference path: plain scalar statistics recomputed from scratch on a
// cumulatively shuffled working copy. Must stay bitwise-equal to the fast
// path; the unit tests enforce that.
EdgeResult compute_cell_reference(const Panel& panel, std::uint32_t src, std::uint32_t dst,
                                  StatKind kind, const PermutationConfig& cfg,
                                  const TEConfig& te_cfg) {
    const PairIdentity id{src, dst, kind};
    try {
        if (stat_kind_is_directed(kind)) {
            LaggedTriple triple = build_lagged_triple(panel, src, dst);
            if (triple.n() <= cfg.min_obs) return sentinel_result(src, dst, triple.n(), false);
            struct TripleWrapper {
                LaggedTriple working;
                const TEConfig& te_cfg;
                bool use_te;
                double observed() const {
                    return use_te ? transfer_entropy(working, te_cfg) : granger_f(working);
                }
                double permuted(PairRng& rng) {
                    rng.shuffle(std::span<double>(working.x_now));
                    return observed();
                }
            };
            TripleWrapper w{triple, te_cfg, stat_kind_is_te(kind)};
            return permutation_z_with(w, triple.n(), cfg, id);
        }
        Overlap overlap = pairwise_overlap(panel, src, dst);
        PairedSample sample{std::move(overlap.xs), std::move(overlap.ys)};
        return permutation_z(
            [](const std::vector<double>& xs, const std::vector<double>& ys) {
                return kendall_tau(xs, ys);
            },
            sample, cfg, id);
    } catch (const DegenerateSampleError&) {
        const std::size_t n_obs = stat_kind_is_directed(kind)
                                      ? build_lagged_triple(panel, src, dst).n()
                                      : overlap_count(panel, src, dst);
        return sentinel_result(src, dst, n_obs, true);
    }
}

EdgeMatrix validate_impl(const Panel& panel, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols, StatKind kind,
                         const PermutationConfig& cfg, int n_bins, bool parallel,
                         bool reference) {
    cfg.validate();
    TEConfig te_cfg{n_bins};
    if (stat_kind_is_te(kind)) te_cfg.validate();
    if (rows.empty() || cols.empty())
        throw ConfigError("validate_all_pairs: empty series subset");
    if (stat_kind_is_symmetric(kind) && rows != cols)
        throw ConfigError("symmetric statistic requires identical row and column subsets");

    EdgeMatrix m;
    m.kind = kind;
    m.config = cfg;
    for (std::size_t r : rows) {
        m.row_nodes.push_back(panel.series_ids[r].asset_id);
        m.row_panel_rows.push_back(static_cast<std::uint32_t>(r));
    }
    for (std::size_t c : cols) {
        m.col_nodes.push_back(panel.series_ids[c].asset_id);
        m.col_panel_rows.push_back(static_cast<std::uint32_t>(c));
    }
    const std::size_t nr = rows.size(), nc = cols.size();
    m.cells.assign(nr * nc, EdgeResult{});

    auto compute = [&](std::uint32_t src, std::uint32_t dst) {
        return reference ? compute_cell_reference(panel, src, dst, kind, cfg, te_cfg)
                         : compute_cell_fast(panel, src, dst, kind, cfg, te_cfg);
    };

    if (stat_kind_is_symmetric(kind)) {
        // Upper triangle only; mirror afterwards. Keying the RNG stream by
        // the ordered (low, high) pair keeps the mirror exact.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> tasks;
        for (std::uint32_t i = 0; i < nr; ++i) {
            m.cells[i * nc + i] =
                sentinel_result(static_cast<std::uint32_t>(rows[i]),
                                static_cast<std::uint32_t>(rows[i]), 0, false);
            for (std::uint32_t j = i + 1; j < nc; ++j) tasks.emplace_back(i, j);
        }
        const std::int64_t n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
        for (std::int64_t t = 0; t < n_tasks; ++t) {
            const auto [i, j] = tasks[static_cast<std::size_t>(t)];
            m.cells[i * nc + j] = compute(static_cast<std::uint32_t>(rows[i]),
                                          static_cast<std::uint32_t>(cols[j]));
        }
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = i + 1; j < nc; ++j) {
                EdgeResult e = m.cells[i * nc + j];
                std::swap(e.src, e.dst);
                m.cells[j * nc + i] = e;
            }
        }
    } else {
        const std::int64_t n_tasks = static_cast<std::int64_t>(nr * nc);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
        for (std::int64_t t = 0; t < n_tasks; ++t) {
            const std::size_t i = static_cast<std::size_t>(t) / nc;
            const std::size_t j = static_cast<std::size_t>(t) % nc;
            m.cells[static_cast<std::size_t>(t)] = compute(
                static_cast<std::uint32_t>(rows[i]), static_cast<std::uint32_t>(cols[j]));
        }
    }
    return m;
}

} // namespace

EdgeMatrix validate_all_pairs(const Panel& panel, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols, StatKind kind,
                              const PermutationConfig& cfg, int n_bins) {
    return validate_impl(panel, rows, cols, kind, cfg, n_bins, true, false);
}

EdgeMatrix validate_all_pairs_serial(const Panel& panel, const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols, StatKind kind,
                                     const PermutationConfig& cfg, int n_bins) {
    return validate_impl(panel, rows, cols, kind, cfg, n_bins, false, true);
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_edge_csv(const EdgeMatrix& m, std::ostream& out) {
    out << "src,dst,kind,stat,null_mean,null_std,z,n_obs,valid\n";
    const char* kind = stat_kind_name(m.kind);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        for (std::size_t c = 0; c < m.n_cols(); ++c) {
            const EdgeResult& e = m.at(r, c);
            out << m.row_nodes[r] << ',' << m.col_nodes[c] << ',' << kind << ','
                << fmt_double(e.statistic) << ',' << fmt_double(e.null_mean) << ','
                << fmt_double(e.null_std) << ',' << fmt_double(e.z) << ',' << e.n_obs << ','
                << (e.valid ? 1 : 0) << '\n';
        }
    }
}

void save_edge_csv(const EdgeMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    write_edge_csv(m, out);
}

EdgeMatrix load_edge_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        (line != "src,dst,kind,stat,null_mean,null_std,z,n_obs,valid" &&
         line != "src,dst,kind,stat,null_mean,null_std,z,n_obs,valid\r"))
        throw ParseError("'" + path + "': bad edge file header");

    struct Row {
        std::string src, dst;
        EdgeResult e;
    };
    std::vector<Row> rows;
    EdgeMatrix m;
    bool first = true;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 9)
            throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                             ": expected 9 fields");
        StatKind kind = stat_kind_from_name(f[2]);
        if (first) {
            m.kind = kind;
            first = false;
        } else if (kind != m.kind) {
            throw ParseError("'" + path + "': mixed statistic kinds");
        }
        Row row;
        row.src = f[0];
        row.dst = f[1];
        try {
            row.e.statistic = std::stod(f[3]);
            row.e.null_mean = std::stod(f[4]);
            row.e.null_std = std::stod(f[5]);
            row.e.z = std::stod(f[6]);
            row.e.n_obs = static_cast<std::uint32_t>(std::stoul(f[7]));
            row.e.valid = f[8] == "1";
        } catch (const std::exception&) {
            throw ParseError("'" + path + "' line " + std::to_string(line_no) + ": bad number");
        }
        row.e.degenerate = std::isnan(row.e.statistic) && row.e.n_obs > 0;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("'" + path + "': no edge rows");

    std::map<std::string, std::uint32_t> row_index, col_index;
    for (const auto& r : rows) {
        if (row_index.emplace(r.src, static_cast<std::uint32_t>(m.row_nodes.size())).second)
            m.row_nodes.push_back(r.src);
        if (col_index.emplace(r.dst, static_cast<std::uint32_t>(m.col_nodes.size())).second)
            m.col_nodes.push_back(r.dst);
    }
    m.cells.assign(m.n_rows() * m.n_cols(), EdgeResult{});
    std::vector<std::uint8_t> seen(m.cells.size(), 0);
    for (const auto& r : rows) {
        const std::uint32_t i = row_index[r.src], j = col_index[r.dst];
        EdgeResult e = r.e;
        e.src = i;
        e.dst = j;
        const std::size_t cell = i * m.n_cols() + j;
        if (seen[cell]) throw ParseError("'" + path + "': duplicate pair " + r.src + "," + r.dst);
        seen[cell] = 1;
        m.cells[cell] = e;
    }
    for (std::size_t cell = 0; cell < m.cells.size(); ++cell) {
        if (!seen[cell]) throw ParseError("'" + path + "': incomplete pair grid");
    }
    return m;
}

} // namespace cryptonet
