#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph {

/// Country -> region. Regions keep the order in which they first appear.
class RegionMap {
public:
    void add(const std::string& country, const std::string& region) {
        if (region.empty()) throw Error(ErrorCategory::Input, "empty region for " + country);
        if (!map_.emplace(country, region).second)
            throw Error(ErrorCategory::Input, "country " + country + " mapped twice");
        if (std::find(regions_.begin(), regions_.end(), region) == regions_.end()) regions_.push_back(region);
    }

    const std::vector<std::string>& regions() const noexcept { return regions_; }
    const std::map<std::string, std::string>& entries() const noexcept { return map_; }

    const std::string* region_of(std::string_view country) const {
        const auto it = map_.find(std::string(country));
        return it == map_.end() ? nullptr : &it->second;
    }

    std::size_t region_index(const std::string& region) const {
        return static_cast<std::size_t>(std::find(regions_.begin(), regions_.end(), region) - regions_.begin());
    }

private:
    std::map<std::string, std::string> map_;
    std::vector<std::string> regions_;
};

/// Reads a `country,region` CSV.
inline RegionMap parse_region_map(std::istream& in) {
    const std::string data = util::read_all(in);
    RegionMap rm;
    bool header_seen = false;
    util::for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (util::trim(line).empty() || line.front() == '#') return;
        auto fields = util::split_csv_line(line);
        for (auto& f : fields) f = std::string(util::trim(f));
        if (!header_seen) {
            header_seen = true;
            if (fields != std::vector<std::string>{"country", "region"})
                throw ParseError(line_no, "expected header country,region");
            return;
        }
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw ParseError(line_no, "expected country,region");
        try {
            rm.add(fields[0], fields[1]);
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
    });
    if (!header_seen) throw ParseError(1, "missing header country,region");
    return rm;
}

/// The six continents and their member countries used by default
/// (117 countries; Kosovo uses the user-assigned code XK).
inline constexpr std::string_view kDefaultRegionsCsv =
    "country,region\n"
    "US,North America\nMX,North America\nCR,North America\nCA,North America\nDO,North America\n"
    "MQ,North America\nPA,North America\nSV,North America\nPR,North America\nNI,North America\n"
    "GT,North America\nHN,North America\nGP,North America\nJM,North America\nHT,North America\n"
    "AW,North America\nAG,North America\nTT,North America\nBS,North America\n"
    "BR,South America\nCL,South America\nPY,South America\nCO,South America\nPE,South America\n"
    "AR,South America\nVE,South America\nEC,South America\nUY,South America\nBO,South America\n"
    "RU,Europe\nGB,Europe\nES,Europe\nLV,Europe\nUA,Europe\nBE,Europe\nDE,Europe\nIT,Europe\n"
    "FR,Europe\nNL,Europe\nCY,Europe\nBY,Europe\nGR,Europe\nPT,Europe\nHU,Europe\nRS,Europe\n"
    "PL,Europe\nSE,Europe\nAT,Europe\nCZ,Europe\nFI,Europe\nRO,Europe\nCH,Europe\nIE,Europe\n"
    "BG,Europe\nDK,Europe\nMK,Europe\nXK,Europe\nHR,Europe\nVA,Europe\nNO,Europe\nLT,Europe\n"
    "GE,Europe\nEE,Europe\nBA,Europe\nSK,Europe\nSI,Europe\nME,Europe\n"
    "EG,Africa\nZA,Africa\nKE,Africa\nMA,Africa\nTN,Africa\nSD,Africa\nUG,Africa\nGH,Africa\n"
    "NG,Africa\nCM,Africa\nCI,Africa\n"
    "TR,Asia\nMY,Asia\nJP,Asia\nTH,Asia\nID,Asia\nPH,Asia\nSA,Asia\nKW,Asia\nSG,Asia\nKR,Asia\n"
    "IN,Asia\nAE,Asia\nCN,Asia\nLK,Asia\nHK,Asia\nJO,Asia\nLB,Asia\nTW,Asia\nMV,Asia\nAZ,Asia\n"
    "QA,Asia\nOM,Asia\nKZ,Asia\nVN,Asia\nPK,Asia\nBH,Asia\nIL,Asia\nIR,Asia\nKG,Asia\nUZ,Asia\n"
    "BN,Asia\nBD,Asia\nPS,Asia\nAM,Asia\nIQ,Asia\nNP,Asia\nKH,Asia\n"
    "AU,Oceania\nNZ,Oceania\n";

inline RegionMap default_region_map() {
    std::istringstream in{std::string(kDefaultRegionsCsv)};
    return parse_region_map(in);
}

enum class FlowMode { Raw, Share };

/// Square region x region matrix, row = origin region, column = destination.
struct RegionalFlowMatrix {
    std::vector<std::string> regions;
    std::vector<double> values;  // row-major
    FlowMode mode = FlowMode::Raw;

    std::size_t size() const noexcept { return regions.size(); }
    double at(std::size_t r, std::size_t s) const { return values[r * regions.size() + s]; }
    double& at(std::size_t r, std::size_t s) { return values[r * regions.size() + s]; }

    double total() const {
        double t = 0.0;
        for (double v : values) t += v;
        return t;
    }
};

/// Sums subgraph edge weights by (origin region, destination region),
/// intra-region cells included. Sums are exact integer arithmetic.
inline RegionalFlowMatrix regional_flows(const TopKSubgraph& sg, const RegionMap& rm) {
    const auto& g = sg.graph();
    const std::size_t r = rm.regions().size();
    std::vector<std::size_t> region_of(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto* reg = rm.region_of(g.node(v));
        if (!reg) throw Error(ErrorCategory::Domain, "country " + g.node(v) + " has no region");
        region_of[v] = rm.region_index(*reg);
    }
    std::vector<Weight> sums(r * r, 0);
    for (const auto& e : g.edges()) sums[region_of[e.src] * r + region_of[e.dst]] += e.weight;
    RegionalFlowMatrix m;
    m.regions = rm.regions();
    m.mode = FlowMode::Raw;
    m.values.reserve(sums.size());
    for (Weight w : sums) m.values.push_back(static_cast<double>(w));
    return m;
}

/// Divides every cell by the grand total.
inline RegionalFlowMatrix to_shares(const RegionalFlowMatrix& raw) {
    const double total = raw.total();
    if (!(total > 0.0)) throw Error(ErrorCategory::Domain, "cannot normalize an all-zero flow matrix");
    RegionalFlowMatrix m = raw;
    m.mode = FlowMode::Share;
    for (auto& v : m.values) v /= total;
    return m;
}

struct ShareDiff {
    std::vector<std::string> regions;
    std::vector<double> values;  // percentage points, a - b
    double mean_abs_all = 0.0;      // over every cell
    double mean_abs_nonnull = 0.0;  // over cells where a or b is nonzero
    std::size_t null_cells = 0;

    double at(std::size_t r, std::size_t s) const { return values[r * regions.size() + s]; }
};

/// Per cell 100 * (a - b): percentage-point difference of shares, with a
/// the social-sensing side and b the official side.
inline ShareDiff share_diff(const RegionalFlowMatrix& a, const RegionalFlowMatrix& b) {
    if (a.regions != b.regions) throw Error(ErrorCategory::Domain, "share matrices have different regions");
    if (a.mode != FlowMode::Share || b.mode != FlowMode::Share)
        throw Error(ErrorCategory::Domain, "share_diff expects share matrices");
    ShareDiff d;
    d.regions = a.regions;
    d.values.resize(a.values.size());
    double sum_all = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        d.values[i] = 100.0 * (a.values[i] - b.values[i]);
        sum_all += std::abs(d.values[i]);
        if (a.values[i] == 0.0 && b.values[i] == 0.0) ++d.null_cells;
    }
    if (!d.values.empty()) d.mean_abs_all = sum_all / static_cast<double>(d.values.size());
    const std::size_t nonnull = d.values.size() - d.null_cells;
    if (nonnull > 0) d.mean_abs_nonnull = sum_all / static_cast<double>(nonnull);
    return d;
}

}  // namespace mobgraph
