#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobgraph/census.hpp"
#include "mobgraph/clustering.hpp"
#include "mobgraph/compare.hpp"
#include "mobgraph/metrics.hpp"
#include "mobgraph/regional.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph::report {

/// Provenance stamped on every output file.
struct Meta {
    std::string config_hash;
    std::uint64_t seed = 0;

    std::string line() const {
        return "tool=" + std::string(kToolName) + " version=" + std::string(kToolVersion) +
               " config=" + config_hash + " seed=" + std::to_string(seed);
    }

    nlohmann::ordered_json json() const {
        nlohmann::ordered_json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        return j;
    }
};

inline void csv_meta(std::ostream& out, const std::optional<Meta>& meta) {
    if (meta) out << "# " << meta->line() << '\n';
}

// Structural report ------------------------------------------------------

inline nlohmann::ordered_json structural_json(const StructuralReport& r) {
    nlohmann::ordered_json j;
    j["node_count"] = r.node_count;
    j["edge_count"] = r.edge_count;
    j["density"] = r.density;
    j["avg_geodesic"] = r.avg_geodesic;
    j["diameter"] = r.diameter;
    j["reachable_pairs"] = r.reachable_pairs;
    j["unreachable_pairs"] = r.unreachable_pairs;
    j["avg_degree"] = r.avg_degree;
    j["degree_centralization"] = {{"direction", to_string(r.centralization_direction)},
                                  {"value", r.degree_centralization}};
    j["avg_strength"] = r.avg_strength;
    j["dyads"] = {{"mutual", r.dyads.mutual}, {"asymmetric", r.dyads.asymmetric}, {"null", r.dyads.null}};
    j["reciprocity"] = r.reciprocity;
    j["transitivity"] = r.transitivity;
    return j;
}

inline void write_structural_json(std::ostream& out, const StructuralReport& r, const std::optional<Meta>& meta) {
    nlohmann::ordered_json j;
    if (meta) j["meta"] = meta->json();
    j["report"] = structural_json(r);
    out << j.dump(2) << '\n';
}

inline void write_structural_csv(std::ostream& out, const StructuralReport& r, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    const std::string cdir = std::string(to_string(r.centralization_direction));
    out << "metric,value\n"
        << "node_count," << r.node_count << '\n'
        << "edge_count," << r.edge_count << '\n'
        << "density," << util::format6(r.density) << '\n'
        << "avg_geodesic," << util::format6(r.avg_geodesic) << '\n'
        << "diameter," << r.diameter << '\n'
        << "unreachable_pairs," << r.unreachable_pairs << '\n'
        << "avg_degree," << util::format6(r.avg_degree) << '\n'
        << cdir << "_degree_centralization," << util::format6(r.degree_centralization) << '\n'
        << "avg_strength," << util::format6(r.avg_strength) << '\n'
        << "mutual_dyads," << r.dyads.mutual << '\n'
        << "asymmetric_dyads," << r.dyads.asymmetric << '\n'
        << "null_dyads," << r.dyads.null << '\n'
        << "reciprocity," << util::format6(r.reciprocity) << '\n'
        << "transitivity," << util::format6(r.transitivity) << '\n';
}

// Centralities -----------------------------------------------------------

/// `rank,country,value`, best rank first; equal ranks ordered by country.
inline void write_centrality_csv(std::ostream& out, const CentralityTable& t, Measure m,
                                 const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    const auto& vals = t.values(m);
    const auto ranks = t.ranks(m);
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
        return t.countries[a] < t.countries[b];
    });
    out << "rank,country,value\n";
    for (auto i : order) out << ranks[i] << ',' << t.countries[i] << ',' << util::format6(vals[i]) << '\n';
}

// Components and clusters ------------------------------------------------

/// `country,component_id,ignored`; single-country components are ignored.
inline void write_components_csv(std::ostream& out, const std::vector<std::string>& countries,
                                 const ComponentAssignment& ca, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "country,component_id,ignored\n";
    for (std::size_t v = 0; v < countries.size(); ++v) {
        const auto id = ca.component_of[v];
        out << countries[v] << ',' << id << ',' << (ca.components[id].size() == 1 ? "true" : "false") << '\n';
    }
}

inline void write_clusters_csv(std::ostream& out, const ClusterAssignment& ca, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "country,cluster_id,ignored\n";
    for (std::size_t v = 0; v < ca.countries.size(); ++v) {
        const auto id = ca.cluster_of[v];
        out << ca.countries[v] << ',' << id << ',' << (ca.ignored[id] ? "true" : "false") << '\n';
    }
}

/// Dense square matrix with a header row and a label column.
inline void write_square_csv(std::ostream& out, const std::vector<std::string>& labels,
                             const std::vector<double>& values, bool full_precision,
                             const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    const std::size_t n = labels.size();
    for (const auto& l : labels) out << ',' << util::csv_field(l);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << util::csv_field(labels[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values[i * n + j];
            out << ',' << (full_precision ? util::format_full(v) : util::format6(v));
        }
        out << '\n';
    }
}

inline void write_distance_csv(std::ostream& out, const DistanceMatrix& dm, const std::optional<Meta>& meta) {
    write_square_csv(out, dm.countries, dm.values, false, meta);
}

// Census -----------------------------------------------------------------

inline void write_census_csv(std::ostream& out, const TriadCensus& c, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "class,count\n";
    for (std::size_t i = 0; i < kTriadClasses; ++i) out << kTriadNames[i] << ',' << c.counts[i] << '\n';
}

inline std::string_view motif_flag(const MotifScore& s) {
    if (!s.defined) return "undefined";
    return s.relevant ? "relevant" : "ok";
}

inline void write_zscores_csv(std::ostream& out, const MotifZScores& z, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "class,real,mean,std,z,flag\n";
    for (const auto& s : z.scores)
        out << kTriadNames[s.triad_class] << ',' << s.real_count << ',' << util::format6(s.null_mean) << ','
            << util::format6(s.null_std) << ',' << (s.defined ? util::format6(s.z) : "nan") << ','
            << motif_flag(s) << '\n';
}

inline void write_zdiff_csv(std::ostream& out, const std::vector<PercentDiff>& d, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "class,percent_diff,flag\n";
    for (const auto& x : d)
        out << kTriadNames[x.triad_class] << ',' << (x.defined ? util::format6(x.value) : "nan") << ','
            << (x.defined ? "ok" : "undefined") << '\n';
}

// Regional ---------------------------------------------------------------

inline void write_regional_csv(std::ostream& out, const RegionalFlowMatrix& m, const std::optional<Meta>& meta) {
    write_square_csv(out, m.regions, m.values, m.mode == FlowMode::Share, meta);
}

inline void write_share_diff_csv(std::ostream& out, const ShareDiff& d, const std::optional<Meta>& meta) {
    write_square_csv(out, d.regions, d.values, false, meta);
}

// Comparison -------------------------------------------------------------

inline void write_correlation_csv(std::ostream& out, const CorrelationReport& r, const std::optional<Meta>& meta) {
    csv_meta(out, meta);
    out << "country,rho,flag\n";
    for (const auto& e : r.entries)
        out << e.country << ',' << (e.defined ? util::format6(e.rho) : "nan") << ','
            << (e.defined ? "ok" : "undefined") << '\n';
}

}  // namespace mobgraph::report
