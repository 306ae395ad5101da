#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/metrics.hpp"

namespace mobgraph {

/// Standardized per-country features of one subgraph: five numeric columns
/// followed by a one-hot block over strongly connected component ids.
struct FeatureMatrix {
    std::vector<std::string> countries;
    std::vector<std::string> columns;
    std::vector<double> values;  // row-major, countries x columns
    Direction direction = Direction::In;
    int k = 0;

    std::size_t rows() const noexcept { return countries.size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * columns.size() + c]; }
};

/// Centers each column and scales it to unit population variance. Constant
/// columns become all zeros.
inline void standardize_columns(FeatureMatrix& fm) {
    const std::size_t n = fm.rows();
    if (n == 0) return;
    for (std::size_t c = 0; c < fm.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += fm.at(r, c);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = fm.at(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        for (std::size_t r = 0; r < n; ++r) fm.at(r, c) = sd > 0.0 ? (fm.at(r, c) - mean) / sd : 0.0;
    }
}

inline FeatureMatrix feature_matrix(const TopKSubgraph& sg, const CentralityTable& metrics,
                                    const ComponentAssignment& comps) {
    const auto& g = sg.graph();
    const std::size_t n = g.node_count();
    if (metrics.countries != g.nodes())
        throw Error(ErrorCategory::Domain, "centrality table does not cover the subgraph's countries");
    for (Measure m : kAllMeasures)
        if (metrics.values(m).size() != n)
            throw Error(ErrorCategory::Domain, "missing " + std::string(to_string(m)) + " values");
    if (comps.component_of.size() != n)
        throw Error(ErrorCategory::Domain, "component assignment does not cover the subgraph's countries");

    FeatureMatrix fm;
    fm.countries = g.nodes();
    fm.direction = sg.direction();
    fm.k = sg.k();
    const Measure degree = sg.direction() == Direction::Out ? Measure::InDegree : Measure::OutDegree;
    const std::vector<Measure> numeric = {Measure::InStrength, Measure::OutStrength, Measure::Betweenness,
                                          Measure::PageRank, degree};
    for (Measure m : numeric) fm.columns.emplace_back(to_string(m));
    for (std::size_t c = 0; c < comps.count(); ++c) fm.columns.push_back("component_" + std::to_string(c));

    fm.values.assign(n * fm.cols(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < numeric.size(); ++c) fm.at(r, c) = metrics.values(numeric[c])[r];
        fm.at(r, numeric.size() + comps.component_of[r]) = 1.0;
    }
    standardize_columns(fm);
    return fm;
}

/// Square matrix over an ordered country list.
struct CountryMatrix {
    std::vector<std::string> countries;
    std::vector<double> values;  // row-major

    std::size_t size() const noexcept { return countries.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * countries.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * countries.size() + j]; }
};

/// Euclidean distances between the feature rows of `fm`.
inline CountryMatrix feature_distances(const FeatureMatrix& fm) {
    CountryMatrix d;
    d.countries = fm.countries;
    const std::size_t n = fm.rows();
    d.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t c = 0; c < fm.cols(); ++c) {
                const double diff = fm.at(i, c) - fm.at(j, c);
                ss += diff * diff;
            }
            d.at(i, j) = d.at(j, i) = std::sqrt(ss);
        }
    return d;
}

/// Element-wise mean of the per-subgraph feature distance matrices over
/// the countries present in every subgraph (normally the six Top-{1,2,3}
/// In/Out subgraphs of one dataset).
inline CountryMatrix avg_distance_matrix(std::span<const FeatureMatrix> fms) {
    if (fms.empty()) throw Error(ErrorCategory::Domain, "no feature matrices to average");
    std::vector<std::string> common = fms.front().countries;
    std::sort(common.begin(), common.end());
    for (const auto& fm : fms.subspan(1)) {
        std::vector<std::string> other = fm.countries;
        std::sort(other.begin(), other.end());
        std::vector<std::string> both;
        std::set_intersection(common.begin(), common.end(), other.begin(), other.end(), std::back_inserter(both));
        common = std::move(both);
    }
    if (common.empty()) throw Error(ErrorCategory::Domain, "feature matrices share no countries");

    const std::size_t m = common.size();
    CountryMatrix avg;
    avg.countries = common;
    avg.values.assign(m * m, 0.0);
    for (const auto& fm : fms) {
        const auto d = feature_distances(fm);
        std::vector<std::size_t> pos(m);
        for (std::size_t i = 0; i < m; ++i)
            pos[i] = static_cast<std::size_t>(std::find(fm.countries.begin(), fm.countries.end(), common[i]) -
                                              fm.countries.begin());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) avg.at(i, j) += d.at(pos[i], pos[j]);
    }
    for (auto& v : avg.values) v /= static_cast<double>(fms.size());
    return avg;
}

/// Two-pass Pearson correlation; nullopt when fewer than 3 points or either
/// side has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CountryCorrelation {
    std::string country;
    double rho = 0.0;
    bool defined = false;
    std::size_t compared = 0;  // off-diagonal entries in the row
};

struct CorrelationReport {
    std::vector<CountryCorrelation> entries;  // sorted by country
    std::size_t common_count = 0;
};

/// For each country common to both matrices, Pearson correlation between its
/// rows in a and b over the other common countries (the zero self-distance
/// is excluded).
inline CorrelationReport country_correlations(const CountryMatrix& a, const CountryMatrix& b) {
    std::vector<std::string> sa = a.countries, sb = b.countries;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<std::string> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    if (common.size() < 3)
        throw Error(ErrorCategory::Domain,
                    "need at least 3 common countries, found " + std::to_string(common.size()));

    const auto positions = [&](const CountryMatrix& m) {
        std::vector<std::size_t> pos(common.size());
        for (std::size_t i = 0; i < common.size(); ++i)
            pos[i] = static_cast<std::size_t>(std::find(m.countries.begin(), m.countries.end(), common[i]) -
                                              m.countries.begin());
        return pos;
    };
    const auto pa = positions(a), pb = positions(b);

    CorrelationReport rep;
    rep.common_count = common.size();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < common.size(); ++i) {
        x.clear();
        y.clear();
        for (std::size_t j = 0; j < common.size(); ++j) {
            if (j == i) continue;
            x.push_back(a.at(pa[i], pa[j]));
            y.push_back(b.at(pb[i], pb[j]));
        }
        CountryCorrelation cc;
        cc.country = common[i];
        cc.compared = x.size();
        if (const auto r = pearson(x, y)) {
            cc.rho = *r;
            cc.defined = true;
        }
        rep.entries.push_back(cc);
    }
    return rep;
}

}  // namespace mobgraph
