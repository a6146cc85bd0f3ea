// Pipeline driver: ingest -> correlate -> causality -> metrics -> compare,
// plus the synthetic panel generator and the centrality-quartile report.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cryptonet/errors.hpp"
#include "cryptonet/pipeline.hpp"
#include "cryptonet/synth.hpp"

#include <nlohmann/json.hpp>

namespace {

using namespace cryptonet;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    return out;
}

void add_run_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--z-star", cfg.z_star, "validation threshold on the permutation Z score");
    cmd->add_option("--permutations", cfg.n_permutations, "permutations per pair");
    cmd->add_option("--min-obs-corr", cfg.min_obs_corr,
                    "correlations need strictly more common observations than this");
    cmd->add_option("--min-obs-te", cfg.min_obs_te,
                    "causality pairs need strictly more lag windows than this");
    cmd->add_option("--bins", cfg.n_bins, "histogram bins for transfer entropy");
    cmd->add_option("--seed", cfg.seed, "global seed for all permutation streams");
}

std::vector<double> parse_z_list(const std::string& csv) {
    std::vector<double> zs;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            zs.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad z value '" + tok + "'");
        }
    }
    return zs;
}

int run(int argc, char** argv) {
    CLI::App app{"Statistically validated dependency and causality networks "
                 "from panels of short noisy time series"};
    app.require_subcommand(1);

    RunConfig cfg;

    // --- synth ---
    auto* synth_cmd = app.add_subcommand("synth", "generate a ground-truth synthetic panel");
    SynthSpec spec;
    std::string synth_out, truth_out;
    synth_cmd->add_option("--assets", spec.n_assets, "number of assets");
    synth_cmd->add_option("--days", spec.n_days, "number of calendar days (>= 45)");
    synth_cmd->add_option("--factor-loading", spec.factor_loading, "common driver strength");
    synth_cmd->add_option("--loading-spread", spec.loading_spread, "per-asset loading jitter");
    synth_cmd->add_option("--factor-ar", spec.factor_ar, "AR(1) persistence of the driver");
    synth_cmd->add_option("--sentiment-loading", spec.sentiment_loading,
                          "sentiment series' loading on the driver");
    synth_cmd->add_option("--couple-fraction", spec.couple_fraction,
                          "fraction of assets with sentiment->price coupling");
    synth_cmd->add_option("--coupling", spec.coupling, "lag-1 coupling coefficient");
    synth_cmd->add_option("--missing-rate", spec.missing_rate, "mask thinning rate");
    synth_cmd->add_option("--seed", spec.seed, "generator seed");
    synth_cmd->add_option("-o,--output", synth_out, "panel document path")->required();
    synth_cmd->add_option("--truth", truth_out, "ground-truth JSON path");

    // --- ingest ---
    auto* ingest_cmd = app.add_subcommand("ingest", "raw hourly records -> panel document");
    std::string ingest_in, ingest_out, transform = "missing-zero";
    ingest_cmd->add_option("input", ingest_in, "record CSV file")->required();
    ingest_cmd->add_option("-o,--output", ingest_out, "panel document path")->required();
    ingest_cmd->add_option("--sentiment-transform", transform,
                           "zero-volume handling: missing-zero | shifted-log");

    // --- correlate ---
    auto* corr_cmd = app.add_subcommand("correlate", "validated Kendall correlation sweep");
    std::string corr_panel, corr_kind = "price", corr_out, corr_summary;
    corr_cmd->add_option("panel", corr_panel, "panel document")->required();
    corr_cmd->add_option("--kind", corr_kind, "price | pos | neg | cross");
    corr_cmd->add_option("-o,--output", corr_out, "edge results CSV")->required();
    corr_cmd->add_option("--summary", corr_summary, "summary JSON path");
    add_run_flags(corr_cmd, cfg);

    // --- causality ---
    auto* caus_cmd = app.add_subcommand("causality", "validated causality sweep");
    std::string caus_panel, direction = "both", caus_out, caus_summary, method = "te";
    caus_cmd->add_option("panel", caus_panel, "panel document")->required();
    caus_cmd->add_option("--direction", direction, "s2p | p2s | both");
    caus_cmd->add_option("--method", method, "te | granger");
    caus_cmd->add_option("-o,--output", caus_out,
                         "edge CSV path (direction=both appends .s2p.csv/.p2s.csv)")
        ->required();
    caus_cmd->add_option("--summary", caus_summary, "summary JSON path");
    add_run_flags(caus_cmd, cfg);

    // --- metrics ---
    auto* metrics_cmd = app.add_subcommand("metrics", "network metrics from an edge file");
    std::string metrics_in, metrics_out, ccdf_out, edgelist_out;
    bool no_centrality = false;
    metrics_cmd->add_option("edges", metrics_in, "edge results CSV")->required();
    metrics_cmd->add_option("-o,--output", metrics_out, "metrics JSON path")->required();
    metrics_cmd->add_option("--ccdf", ccdf_out, "degree CCDF output (x,ccdf)");
    metrics_cmd->add_option("--edge-list", edgelist_out, "valid-edge list CSV");
    metrics_cmd->add_flag("--no-centrality", no_centrality, "skip closeness/betweenness");

    // --- compare ---
    auto* cmp_cmd = app.add_subcommand("compare", "cross-network degree-centrality similarity");
    std::string p_edges, ps_edges, ns_edges, s2p_edges, p2s_edges, cmp_out;
    std::string z_list = "3,4,5,6";
    bool exclude_zero = false;
    cmp_cmd->add_option("--price-edges", p_edges)->required();
    cmp_cmd->add_option("--pos-edges", ps_edges)->required();
    cmp_cmd->add_option("--neg-edges", ns_edges)->required();
    cmp_cmd->add_option("--te-s2p", s2p_edges)->required();
    cmp_cmd->add_option("--te-p2s", p2s_edges)->required();
    cmp_cmd->add_option("--z-values", z_list, "comma-separated ascending thresholds");
    cmp_cmd->add_flag("--exclude-zero-degree", exclude_zero,
                      "drop zero-degree nodes before correlating");
    cmp_cmd->add_option("-o,--output", cmp_out, "similarity table CSV")->required();
    add_run_flags(cmp_cmd, cfg);

    // --- quartiles ---
    auto* quart_cmd = app.add_subcommand(
        "quartiles", "causality links of central vs peripheral price-network assets");
    std::string q_price, q_s2p, q_p2s, q_out;
    quart_cmd->add_option("--price-edges", q_price)->required();
    quart_cmd->add_option("--te-s2p", q_s2p)->required();
    quart_cmd->add_option("--te-p2s", q_p2s)->required();
    quart_cmd->add_option("-o,--output", q_out, "report JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    if (synth_cmd->parsed()) {
        SynthPanel sp = generate(spec);
        save_panel(sp.panel, synth_out);
        if (!truth_out.empty()) {
            nlohmann::json doc;
            doc["coupled_assets"] = sp.truth.coupled_assets;
            doc["factor_assets"] = sp.truth.factor_assets;
            open_out(truth_out) << doc.dump(2) << "\n";
        }
    } else if (ingest_cmd->parsed()) {
        ZeroVolumePolicy policy;
        if (transform == "missing-zero") policy = ZeroVolumePolicy::TreatMissing;
        else if (transform == "shifted-log") policy = ZeroVolumePolicy::ShiftedLog;
        else throw ConfigError("unknown sentiment transform '" + transform + "'");
        save_panel(ingest_csv(ingest_in, policy), ingest_out);
    } else if (corr_cmd->parsed()) {
        Panel panel = load_panel(corr_panel);
        EdgeMatrix edges = run_correlate(panel, correlate_kind_from_name(corr_kind), cfg);
        save_edge_csv(edges, corr_out);
        if (!corr_summary.empty()) open_out(corr_summary) << edge_summary_json(edges);
    } else if (caus_cmd->parsed()) {
        Panel panel = load_panel(caus_panel);
        CausalityMethod m;
        if (method == "te") m = CausalityMethod::TransferEntropy;
        else if (method == "granger") m = CausalityMethod::Granger;
        else throw ConfigError("unknown causality method '" + method + "'");
        nlohmann::json summary;
        auto run_one = [&](bool s2p, const std::string& path) {
            EdgeMatrix edges = run_causality(panel, s2p, cfg, m);
            save_edge_csv(edges, path);
            if (!caus_summary.empty())
                summary[s2p ? "sent_to_price" : "price_to_sent"] =
                    nlohmann::json::parse(edge_summary_json(edges));
        };
        if (direction == "s2p") run_one(true, caus_out);
        else if (direction == "p2s") run_one(false, caus_out);
        else if (direction == "both") {
            run_one(true, caus_out + ".s2p.csv");
            run_one(false, caus_out + ".p2s.csv");
        } else {
            throw ConfigError("unknown direction '" + direction + "' (s2p|p2s|both)");
        }
        if (!caus_summary.empty()) open_out(caus_summary) << summary.dump(2) << "\n";
    } else if (metrics_cmd->parsed()) {
        EdgeMatrix edges = load_edge_csv(metrics_in);
        ValidatedNetwork net = build_network(edges);
        MetricsReport report = compute_metrics(net, !no_centrality && net.square());
        save_metrics_json(report, net.directed || net.bipartite, metrics_out);
        if (!ccdf_out.empty()) {
            const auto& degs = report.degree.empty() ? report.impacting : report.degree;
            auto out = open_out(ccdf_out);
            write_ccdf(ccdf(degs), out);
        }
        if (!edgelist_out.empty()) {
            auto out = open_out(edgelist_out);
            write_edge_list(net, out);
        }
    } else if (cmp_cmd->parsed()) {
        EdgeMatrix p = load_edge_csv(p_edges);
        EdgeMatrix ps = load_edge_csv(ps_edges);
        EdgeMatrix ns = load_edge_csv(ns_edges);
        EdgeMatrix s2p = load_edge_csv(s2p_edges);
        EdgeMatrix p2s = load_edge_csv(p2s_edges);
        SweepInputs inputs{&p, &ps, &ns, &s2p, &p2s};
        ThresholdSweep sweep = threshold_sweep(inputs, parse_z_list(z_list), cfg.min_obs_corr,
                                               cfg.min_obs_te, exclude_zero);
        {
            auto out = open_out(cmp_out);
            write_sweep_csv(sweep, out);
        }
        auto pv = open_out(cmp_out + ".pvalues.csv");
        write_sweep_pvalues_csv(sweep, pv);
    } else if (quart_cmd->parsed()) {
        QuartileReport report = centrality_quartiles(
            load_edge_csv(q_price), load_edge_csv(q_s2p), load_edge_csv(q_p2s));
        open_out(q_out) << quartile_report_json(report);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cryptonet::Error& e) {
        std::cerr << "error: category=" << cryptonet::category_name(e.category()) << " "
                  << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: category=internal " << e.what() << "\n";
        return 1;
    }
}
