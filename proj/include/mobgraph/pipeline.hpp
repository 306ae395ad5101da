#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mobgraph/census.hpp"
#include "mobgraph/clustering.hpp"
#include "mobgraph/compare.hpp"
#include "mobgraph/error.hpp"
#include "mobgraph/export.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/ingest.hpp"
#include "mobgraph/metrics.hpp"
#include "mobgraph/regional.hpp"
#include "mobgraph/report.hpp"
#include "mobgraph/svg.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph::pipeline {

namespace fs = std::filesystem;

using KeyValues = std::map<std::string, std::string>;

/// Reads `key = value` lines; '#' starts a comment line.
inline KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    const std::string data = util::read_all(in);
    util::for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        line = util::trim(line);
        if (line.empty() || line.front() == '#') return;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(util::trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError(line_no, "empty key");
        kv[key] = std::string(util::trim(line.substr(eq + 1)));
    });
    return kv;
}

struct DatasetSource {
    std::string label;
    std::string checkins;        // path as written; empty when unset
    InputFormat checkins_format = InputFormat::Csv;
    std::string flows;
    std::string graph;           // analyze input override
};

struct RunConfig {
    std::vector<DatasetSource> datasets;  // [0] = a (compared side), [1] = b (baseline)
    std::uint64_t checkin_threshold = 1000;
    ParseMode parse_mode = ParseMode::Strict;
    std::vector<int> ks = {1, 2, 3};
    PageRankParams pagerank;
    std::uint64_t ensemble_size = 1000;
    std::uint64_t swaps_per_edge = 100;
    std::uint64_t seed = 0;
    RelevanceThresholds relevance;
    std::size_t n_clusters = 20;
    std::string regions;         // empty: built-in continent map
    std::string output_dir = "out";
    unsigned threads = 0;        // 0: hardware concurrency
    fs::path base_dir = ".";     // relative input paths resolve against this

    fs::path resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    }

    fs::path output_root() const { return resolve(output_dir); }

    unsigned worker_threads() const {
        if (threads > 0) return threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Every setting that can change output bytes, one `key=value` per line.
    /// Output location and thread count are excluded.
    std::string canonical() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            const auto& d = datasets[i];
            const std::string p = i == 0 ? "a." : "b.";
            os << p << "label=" << d.label << '\n'
               << p << "checkins=" << d.checkins << '\n'
               << p << "checkins_format=" << (d.checkins_format == InputFormat::Csv ? "csv" : "ndjson") << '\n'
               << p << "flows=" << d.flows << '\n'
               << p << "graph=" << d.graph << '\n';
        }
        os << "checkin_threshold=" << checkin_threshold << '\n'
           << "parse_mode=" << (parse_mode == ParseMode::Strict ? "strict" : "lenient") << '\n'
           << "k=";
        for (std::size_t i = 0; i < ks.size(); ++i) os << (i ? "," : "") << ks[i];
        os << '\n'
           << "pagerank.damping=" << util::format_full(pagerank.damping) << '\n'
           << "pagerank.tol=" << util::format_full(pagerank.tol) << '\n'
           << "pagerank.max_iter=" << pagerank.max_iter << '\n'
           << "ensemble.size=" << ensemble_size << '\n'
           << "ensemble.swaps_per_edge=" << swaps_per_edge << '\n'
           << "relevance.min_z=" << util::format_full(relevance.min_z) << '\n'
           << "relevance.min_count=" << relevance.min_count << '\n'
           << "seed=" << seed << '\n'
           << "n_clusters=" << n_clusters << '\n'
           << "regions=" << regions << '\n';
        return os.str();
    }

    std::string hash() const { return util::hex64(util::fnv1a64(canonical())); }

    report::Meta meta() const { return {hash(), seed}; }
};

namespace detail {

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
    const auto x = util::parse_int(v);
    if (!x || *x < 0) throw Error(ErrorCategory::Config, key + ": expected a non-negative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(*x);
}

inline double to_double(const std::string& key, const std::string& v) {
    const auto x = util::parse_double(v);
    if (!x) throw Error(ErrorCategory::Config, key + ": expected a number, got '" + v + "'");
    return *x;
}

}  // namespace detail

/// Builds a RunConfig from flat keys. Unknown keys are rejected.
inline RunConfig config_from(const KeyValues& kv, const fs::path& base_dir = ".") {
    RunConfig c;
    c.base_dir = base_dir;
    DatasetSource ds[2];
    bool present[2] = {false, false};
    for (const auto& [key, value] : kv) {
        if (key.size() > 2 && (key[0] == 'a' || key[0] == 'b') && key[1] == '.') {
            const int i = key[0] == 'a' ? 0 : 1;
            const std::string sub = key.substr(2);
            present[i] = true;
            if (sub == "label") ds[i].label = value;
            else if (sub == "checkins") ds[i].checkins = value;
            else if (sub == "checkins_format") ds[i].checkins_format = parse_input_format(value);
            else if (sub == "flows") ds[i].flows = value;
            else if (sub == "graph") ds[i].graph = value;
            else throw Error(ErrorCategory::Config, "unknown config key '" + key + "'");
        } else if (key == "checkin_threshold") {
            c.checkin_threshold = detail::to_u64(key, value);
        } else if (key == "parse_mode") {
            if (value == "strict") c.parse_mode = ParseMode::Strict;
            else if (value == "lenient") c.parse_mode = ParseMode::Lenient;
            else throw Error(ErrorCategory::Config, "parse_mode must be strict or lenient");
        } else if (key == "k") {
            c.ks.clear();
            for (const auto& part : util::split(value, ',')) {
                const auto k = detail::to_u64(key, part);
                if (k < 1) throw Error(ErrorCategory::Config, "k values must be >= 1");
                c.ks.push_back(static_cast<int>(k));
            }
            if (c.ks.empty()) throw Error(ErrorCategory::Config, "k list is empty");
        } else if (key == "pagerank.damping") {
            c.pagerank.damping = detail::to_double(key, value);
        } else if (key == "pagerank.tol") {
            c.pagerank.tol = detail::to_double(key, value);
        } else if (key == "pagerank.max_iter") {
            c.pagerank.max_iter = detail::to_u64(key, value);
        } else if (key == "ensemble.size") {
            c.ensemble_size = detail::to_u64(key, value);
        } else if (key == "ensemble.swaps_per_edge") {
            c.swaps_per_edge = detail::to_u64(key, value);
        } else if (key == "relevance.min_z") {
            c.relevance.min_z = detail::to_double(key, value);
        } else if (key == "relevance.min_count") {
            c.relevance.min_count = detail::to_u64(key, value);
        } else if (key == "seed") {
            c.seed = detail::to_u64(key, value);
        } else if (key == "n_clusters") {
            c.n_clusters = detail::to_u64(key, value);
        } else if (key == "regions") {
            c.regions = value;
        } else if (key == "output_dir") {
            c.output_dir = value;
        } else if (key == "threads") {
            c.threads = static_cast<unsigned>(detail::to_u64(key, value));
        } else {
            throw Error(ErrorCategory::Config, "unknown config key '" + key + "'");
        }
    }
    if (present[1] && !present[0]) throw Error(ErrorCategory::Config, "dataset b configured without dataset a");
    for (int i = 0; i < 2; ++i) {
        if (!present[i]) continue;
        if (ds[i].label.empty()) ds[i].label = i == 0 ? "a" : "b";
        c.datasets.push_back(ds[i]);
    }
    if (c.datasets.size() == 2 && c.datasets[0].label == c.datasets[1].label)
        throw Error(ErrorCategory::Config, "datasets a and b need distinct labels");
    if (c.ensemble_size < 2) throw Error(ErrorCategory::Config, "ensemble.size must be >= 2");
    return c;
}

/// Loads a config file and applies overrides on top (overrides win).
inline RunConfig load_config(const std::optional<fs::path>& file, const KeyValues& overrides = {}) {
    KeyValues kv;
    fs::path base = ".";
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error(ErrorCategory::Config, "cannot open config file " + file->string());
        try {
            kv = parse_key_values(in);
        } catch (const ParseError& e) {
            throw Error(ErrorCategory::Config, file->string() + ": " + e.what());
        }
        base = file->parent_path().empty() ? fs::path(".") : file->parent_path();
    }
    for (const auto& [k, v] : overrides) kv[k] = v;
    return config_from(kv, base);
}

/// Writes via a temporary file and rename so readers never see partial output.
inline void write_file_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCategory::Io, "cannot create directory " + path.parent_path().string());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCategory::Io, "cannot write " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorCategory::Io, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCategory::Io, "cannot rename " + tmp.string() + " to " + path.string());
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Input, "cannot open " + path.string());
    return util::read_all(in);
}

/// Files produced by one command, written under a root directory and listed
/// with checksums in a manifest.
class Bundle {
public:
    Bundle(fs::path root, report::Meta meta) : root_(std::move(root)), meta_(std::move(meta)) {}

    template <typename Fn>
    void emit(const std::string& rel, Fn&& writer) {
        std::ostringstream os;
        writer(os);
        const std::string content = os.str();
        write_file_atomic(root_ / rel, content);
        files_[rel] = util::hex64(util::fnv1a64(content));
    }

    const std::map<std::string, std::string>& files() const noexcept { return files_; }
    const report::Meta& meta() const noexcept { return meta_; }
    const fs::path& root() const noexcept { return root_; }

    void write_manifest(const std::string& rel, nlohmann::ordered_json extra = {}) {
        nlohmann::ordered_json j;
        j["meta"] = meta_.json();
        for (auto& [k, v] : extra.items()) j[k] = v;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [path, sum] : files_) arr.push_back({{"path", path}, {"fnv1a64", sum}});
        j["files"] = arr;
        write_file_atomic(root_ / rel, j.dump(2) + "\n");
    }

private:
    fs::path root_;
    report::Meta meta_;
    std::map<std::string, std::string> files_;
};

/// Runs `fn`, prefixing any library error with the module name.
template <typename Fn>
auto in_module(std::string_view module, const std::string& context, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.category(), "[" + std::string(module) + "] " + context + ": " + e.what());
    }
}

// build -------------------------------------------------------------------

struct BuiltDataset {
    std::string label;
    MobilityGraph graph;
    nlohmann::ordered_json manifest;
};

inline BuiltDataset build_dataset(const RunConfig& cfg, const DatasetSource& src) {
    const bool has_checkins = !src.checkins.empty();
    const bool has_flows = !src.flows.empty();
    if (has_checkins == has_flows)
        throw Error(ErrorCategory::Config,
                    "dataset '" + src.label + "': configure exactly one of checkins or flows");
    BuiltDataset out;
    out.label = src.label;
    auto& m = out.manifest;
    m["label"] = src.label;
    if (has_flows) {
        const auto path = cfg.resolve(src.flows);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorCategory::Input, "cannot open " + path.string());
        out.graph = in_module("ingest", path.string(), [&] { return parse_flow_matrix(in, src.label); });
        m["source"] = "flows";
        m["input"] = src.flows;
    } else {
        const auto path = cfg.resolve(src.checkins);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorCategory::Input, "cannot open " + path.string());
        const auto table = in_module("ingest", path.string(),
                                     [&] { return parse_checkins(in, src.checkins_format, cfg.parse_mode); });
        const auto homes = infer_homes(table);
        const auto allowed = filter_countries(table, cfg.checkin_threshold);
        out.graph = build_mobility_graph(table, homes, allowed, src.label);

        std::size_t dropped_users = 0;
        for (const auto& [user, home] : homes)
            if (!allowed.contains(home)) ++dropped_users;
        std::vector<std::string> dropped_countries;
        for (const auto& [country, n] : table.country_counts())
            if (!allowed.contains(country)) dropped_countries.push_back(country);
        m["source"] = "checkins";
        m["input"] = src.checkins;
        m["records"] = table.size();
        m["skipped_rows"] = table.skipped();
        m["skipped_lines"] = table.skipped_lines();
        m["users"] = homes.size();
        m["users_dropped_by_threshold"] = dropped_users;
        m["checkin_threshold"] = cfg.checkin_threshold;
        m["countries_seen"] = table.country_counts().size();
        m["countries_kept"] = allowed.size();
        m["countries_dropped"] = dropped_countries;
    }
    m["nodes"] = out.graph.node_count();
    m["edges"] = out.graph.edge_count();
    m["total_weight"] = out.graph.total_weight();
    return out;
}

inline std::string graph_path(const std::string& label) { return label + "/graph.csv"; }

/// Ingests every configured dataset and writes `<label>/graph.csv` plus
/// `<label>/build_manifest.json` under the output directory.
inline std::vector<BuiltDataset> cmd_build(const RunConfig& cfg) {
    if (cfg.datasets.empty()) throw Error(ErrorCategory::Config, "no dataset configured");
    Bundle bundle(cfg.output_root(), cfg.meta());
    std::vector<BuiltDataset> built;
    for (const auto& src : cfg.datasets) {
        auto ds = build_dataset(cfg, src);
        bundle.emit(graph_path(ds.label), [&](std::ostream& os) {
            report::csv_meta(os, bundle.meta());
            write_edge_csv(os, ds.graph);
        });
        bundle.emit(ds.label + "/build_manifest.json", [&](std::ostream& os) {
            nlohmann::ordered_json j;
            j["meta"] = bundle.meta().json();
            for (auto& [k, v] : ds.manifest.items()) j[k] = v;
            os << j.dump(2) << '\n';
        });
        built.push_back(std::move(ds));
    }
    return built;
}

// analyze -----------------------------------------------------------------

/// Everything computed for one (direction, k) subgraph.
struct SubgraphAnalysis {
    std::string tag;
    StructuralReport structure;
    CentralityTable centrality;
    ComponentAssignment components;
    DistanceMatrix distances;
    ClusterAssignment clusters;
    TriadCensus census;
    MotifZScores motifs;
    RegionalFlowMatrix regional_raw;
    RegionalFlowMatrix regional_share;
    FeatureMatrix features;
};

inline SubgraphAnalysis analyze_subgraph(const RunConfig& cfg, const TopKSubgraph& sg, const RegionMap& regions) {
    SubgraphAnalysis a;
    a.tag = sg.tag();
    const auto& g = sg.graph();
    const std::string ctx = g.label() + "/" + a.tag;
    a.structure = in_module("metrics", ctx, [&] { return structural_report(sg); });
    a.centrality = in_module("metrics", ctx, [&] { return centrality_table(g, cfg.pagerank); });
    a.components = scc(g);
    a.distances = distance_matrix(sg);
    a.clusters = in_module("clustering", ctx,
                           [&] { return filter_singletons(average_linkage(a.distances, cfg.n_clusters)); });
    a.census = in_module("census", ctx, [&] { return triad_census(g); });
    EnsembleParams ep;
    ep.ensemble_size = cfg.ensemble_size;
    // Keyed by subgraph tag, not dataset, so identical inputs share a null model.
    ep.seed = util::derive_seed(cfg.seed, "census/" + a.tag);
    ep.swaps_per_edge = cfg.swaps_per_edge;
    ep.threads = cfg.worker_threads();
    a.motifs = in_module("census", ctx, [&] { return motif_zscores(g, ep, cfg.relevance); });
    a.regional_raw = in_module("regional", ctx, [&] { return regional_flows(sg, regions); });
    a.regional_share = in_module("regional", ctx, [&] { return to_shares(a.regional_raw); });
    a.features = in_module("compare", ctx, [&] { return feature_matrix(sg, a.centrality, a.components); });
    return a;
}

inline void emit_subgraph(Bundle& b, const std::string& label, const SubgraphAnalysis& a) {
    const auto& meta = b.meta();
    const std::string dir = label + "/" + a.tag + "/";
    b.emit(dir + "structural.json", [&](std::ostream& os) { report::write_structural_json(os, a.structure, meta); });
    b.emit(dir + "structural.csv", [&](std::ostream& os) { report::write_structural_csv(os, a.structure, meta); });
    for (Measure m : kAllMeasures)
        b.emit(dir + "centrality_" + std::string(to_string(m)) + ".csv",
               [&](std::ostream& os) { report::write_centrality_csv(os, a.centrality, m, meta); });
    b.emit(dir + "scc.csv", [&](std::ostream& os) {
        report::write_components_csv(os, a.centrality.countries, a.components, meta);
    });
    b.emit(dir + "distance.csv", [&](std::ostream& os) { report::write_distance_csv(os, a.distances, meta); });
    b.emit(dir + "clusters.csv", [&](std::ostream& os) { report::write_clusters_csv(os, a.clusters, meta); });
    b.emit(dir + "triad_census.csv", [&](std::ostream& os) { report::write_census_csv(os, a.census, meta); });
    b.emit(dir + "motif_z.csv", [&](std::ostream& os) { report::write_zscores_csv(os, a.motifs, meta); });
    b.emit(dir + "regional_raw.csv", [&](std::ostream& os) { report::write_regional_csv(os, a.regional_raw, meta); });
    b.emit(dir + "regional_share.csv",
           [&](std::ostream& os) { report::write_regional_csv(os, a.regional_share, meta); });
}

struct DatasetAnalysis {
    std::string label;
    std::vector<SubgraphAnalysis> subgraphs;
    CountryMatrix avg_distance;
};

struct AnalysisResult {
    std::vector<DatasetAnalysis> datasets;
    std::optional<CorrelationReport> correlation;
    std::map<std::string, std::string> files;  // relative path -> checksum
};

inline MobilityGraph load_graph(const RunConfig& cfg, const DatasetSource& src) {
    const fs::path path = src.graph.empty() ? cfg.output_root() / graph_path(src.label) : cfg.resolve(src.graph);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Input, "graph file " + path.string() + " not found (run build first)");
    return in_module("ingest", path.string(), [&] { return parse_flow_matrix(in, src.label); });
}

inline RegionMap load_regions(const RunConfig& cfg) {
    if (cfg.regions.empty()) return default_region_map();
    const auto path = cfg.resolve(cfg.regions);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Input, "cannot open region map " + path.string());
    return in_module("regional", path.string(), [&] { return parse_region_map(in); });
}

/// Runs every analysis on every configured dataset and, with two datasets,
/// the cross-dataset comparisons. Writes the report bundle and manifest.
inline AnalysisResult cmd_analyze(const RunConfig& cfg) {
    if (cfg.datasets.empty()) throw Error(ErrorCategory::Config, "no dataset configured");
    const auto regions = load_regions(cfg);
    Bundle bundle(cfg.output_root(), cfg.meta());
    const auto& meta = bundle.meta();
    AnalysisResult result;

    for (const auto& src : cfg.datasets) {
        const auto g = load_graph(cfg, src);
        DatasetAnalysis da;
        da.label = src.label;
        for (int k : cfg.ks) {
            for (Direction dir : {Direction::In, Direction::Out}) {
                const auto sg = topk(g, dir, k);
                da.subgraphs.push_back(analyze_subgraph(cfg, sg, regions));
                emit_subgraph(bundle, src.label, da.subgraphs.back());
            }
        }
        std::vector<FeatureMatrix> fms;
        for (const auto& a : da.subgraphs) fms.push_back(a.features);
        da.avg_distance = in_module("compare", src.label, [&] { return avg_distance_matrix(fms); });
        bundle.emit(src.label + "/avg_distance.csv", [&](std::ostream& os) {
            report::write_square_csv(os, da.avg_distance.countries, da.avg_distance.values, true, meta);
        });
        result.datasets.push_back(std::move(da));
    }

    nlohmann::ordered_json summary;
    if (result.datasets.size() == 2) {
        const auto& a = result.datasets[0];
        const auto& b = result.datasets[1];
        auto regional = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < a.subgraphs.size(); ++i) {
            const auto& sa = a.subgraphs[i];
            const auto& sb = b.subgraphs[i];
            const std::string dir = "compare/" + sa.tag + "/";
            const auto zd = in_module("census", sa.tag, [&] { return z_percent_diff(sa.motifs, sb.motifs); });
            bundle.emit(dir + "z_diff.csv", [&](std::ostream& os) { report::write_zdiff_csv(os, zd, meta); });
            const auto sd =
                in_module("regional", sa.tag, [&] { return share_diff(sa.regional_share, sb.regional_share); });
            bundle.emit(dir + "share_diff.csv", [&](std::ostream& os) { report::write_share_diff_csv(os, sd, meta); });
            regional[sa.tag] = {{"mean_abs_diff_all_cells", sd.mean_abs_all},
                                {"mean_abs_diff_nonnull_cells", sd.mean_abs_nonnull},
                                {"null_cells", sd.null_cells}};
        }
        bundle.emit("compare/share_diff_summary.json", [&](std::ostream& os) {
            nlohmann::ordered_json j;
            j["meta"] = meta.json();
            j["compared"] = a.label;
            j["baseline"] = b.label;
            j["subgraphs"] = regional;
            os << j.dump(2) << '\n';
        });
        result.correlation =
            in_module("compare", "correlation", [&] { return country_correlations(a.avg_distance, b.avg_distance); });
        bundle.emit("compare/correlation.csv",
                    [&](std::ostream& os) { report::write_correlation_csv(os, *result.correlation, meta); });
        summary["compared"] = a.label;
        summary["baseline"] = b.label;
    }
    bundle.write_manifest("manifest.json", summary);
    result.files = bundle.files();
    return result;
}

// plot / export -----------------------------------------------------------

enum class PlotKind { Heatmap, Strip, Bar };

inline PlotKind parse_plot_kind(std::string_view s) {
    if (s == "heatmap") return PlotKind::Heatmap;
    if (s == "strip") return PlotKind::Strip;
    if (s == "bar") return PlotKind::Bar;
    throw Error(ErrorCategory::Config, "unknown plot kind '" + std::string(s) + "'");
}

/// Renders a report CSV as SVG. Heatmaps take square matrix CSVs, strip
/// plots take correlation reports, bar charts take z-score or z-diff CSVs.
inline std::string cmd_plot(const std::string& report_csv, PlotKind kind, const std::string& title = {}) {
    std::vector<std::vector<std::string>> rows;
    std::string comment;
    util::for_each_line(report_csv, [&](std::size_t, std::string_view line) {
        if (util::trim(line).empty()) return;
        if (line.front() == '#') {
            if (comment.empty()) comment = std::string(util::trim(line.substr(1)));
            return;
        }
        rows.push_back(util::split_csv_line(line));
    });
    if (rows.empty()) throw Error(ErrorCategory::Input, "report is empty");
    const auto& header = rows.front();
    const auto mismatch = [&](std::string_view want) {
        return Error(ErrorCategory::Config, "plot kind does not match report: expected " + std::string(want));
    };
    const std::uint64_t seed = util::fnv1a64(report_csv);

    switch (kind) {
        case PlotKind::Heatmap: {
            if (header.empty() || !header.front().empty()) throw mismatch("a square matrix CSV");
            const std::vector<std::string> cols(header.begin() + 1, header.end());
            std::vector<std::string> labels;
            std::vector<double> values;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() != cols.size() + 1) throw mismatch("a square matrix CSV");
                labels.push_back(rows[r][0]);
                for (std::size_t c = 1; c < rows[r].size(); ++c) {
                    const auto v = util::parse_double(rows[r][c]);
                    if (!v) throw Error(ErrorCategory::Input, "non-numeric matrix cell '" + rows[r][c] + "'");
                    values.push_back(*v);
                }
            }
            if (labels.size() != cols.size()) throw mismatch("a square matrix CSV");
            return svg::heatmap(labels, cols, values, title, comment);
        }
        case PlotKind::Strip: {
            if (header != std::vector<std::string>{"country", "rho", "flag"}) throw mismatch("country,rho,flag");
            std::vector<std::string> labels;
            std::vector<double> values;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() != 3 || rows[r][2] != "ok") continue;
                const auto v = util::parse_double(rows[r][1]);
                if (!v) continue;
                labels.push_back(rows[r][0]);
                values.push_back(*v);
            }
            return svg::strip(labels, values, title, seed, -1.0, 1.0, comment);
        }
        case PlotKind::Bar: {
            std::size_t value_col = 0;
            if (header == std::vector<std::string>{"class", "percent_diff", "flag"})
                value_col = 1;
            else if (header == std::vector<std::string>{"class", "real", "mean", "std", "z", "flag"})
                value_col = 4;
            else
                throw mismatch("class,percent_diff,flag or class,real,mean,std,z,flag");
            std::vector<std::string> labels;
            std::vector<std::optional<double>> values;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() != header.size()) throw Error(ErrorCategory::Input, "ragged report row");
                labels.push_back(rows[r][0]);
                const bool defined = rows[r].back() != "undefined";
                values.push_back(defined ? util::parse_double(rows[r][value_col]) : std::nullopt);
            }
            return svg::bar(labels, values, title, comment);
        }
    }
    throw Error(ErrorCategory::Config, "unknown plot kind");
}

/// Re-serializes a graph CSV, optionally restricted to a Top-k subgraph.
inline std::string cmd_export(const std::string& graph_csv, ExportFormat format,
                              std::optional<std::pair<Direction, int>> subgraph = std::nullopt) {
    std::istringstream in(graph_csv);
    auto g = in_module("ingest", "graph", [&] { return parse_flow_matrix(in); });
    if (subgraph) g = topk(g, subgraph->first, subgraph->second).graph();
    return export_graph(g, format);
}

}  // namespace mobgraph::pipeline
