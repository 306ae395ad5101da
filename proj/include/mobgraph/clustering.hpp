#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"

namespace mobgraph {

enum class Normalization { ByRow, ByColumn };

inline std::string_view to_string(Normalization n) { return n == Normalization::ByRow ? "by-row" : "by-column"; }

/// Dense row-major n x n matrix of flow distances 1 - n(w_ij).
struct DistanceMatrix {
    std::vector<std::string> countries;
    std::vector<double> values;
    Normalization normalization = Normalization::ByRow;

    std::size_t size() const noexcept { return countries.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * countries.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * countries.size() + j]; }
};

/// Out subgraphs are normalized by row (share of each origin's outflow),
/// In subgraphs by column (share of each destination's inflow). Rows or
/// columns with no weight stay at distance 1 everywhere, as does the diagonal.
inline DistanceMatrix distance_matrix(const TopKSubgraph& sg) {
    const auto& g = sg.graph();
    const std::size_t n = g.node_count();
    DistanceMatrix dm;
    dm.countries = g.nodes();
    dm.normalization = sg.direction() == Direction::Out ? Normalization::ByRow : Normalization::ByColumn;
    dm.values.assign(n * n, 1.0);

    std::vector<double> totals(n, 0.0);
    for (const auto& e : g.edges())
        totals[dm.normalization == Normalization::ByRow ? e.src : e.dst] += static_cast<double>(e.weight);
    for (const auto& e : g.edges()) {
        const double total = totals[dm.normalization == Normalization::ByRow ? e.src : e.dst];
        dm.at(e.src, e.dst) = 1.0 - static_cast<double>(e.weight) / total;
    }
    return dm;
}

/// One agglomeration step. Leaves carry ids 0..n-1; the cluster formed at
/// step s gets id n + s.
struct Merge {
    std::size_t left;
    std::size_t right;
    double height;
    std::size_t size;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

/// Average-linkage agglomeration on a possibly asymmetric matrix. The
/// linkage of clusters A and B is the mean of (d(i,j) + d(j,i)) / 2 over
/// i in A, j in B. Among equal linkages the pair with the smallest
/// (id, id) wins. Runs all n-1 merges.
inline Dendrogram agglomerate(const DistanceMatrix& dm) {
    const std::size_t n = dm.size();
    Dendrogram dg;
    dg.leaves = n;
    if (n == 0) return dg;

    // Cross sums of the symmetrized distances, indexed by slot.
    std::vector<double> sums(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sums[i * n + j] = 0.5 * (dm.at(i, j) + dm.at(j, i));
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    // Active slots kept in ascending id order; merged clusters go last.
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bp = 0, bq = 0;
        for (std::size_t x = 0; x < active.size(); ++x) {
            const std::size_t p = active[x];
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t q = active[y];
                const double link = sums[p * n + q] / static_cast<double>(size[p] * size[q]);
                if (link < best) {
                    best = link;
                    bp = x;
                    bq = y;
                }
            }
        }
        const std::size_t p = active[bp], q = active[bq];
        dg.merges.push_back({id[p], id[q], best, size[p] + size[q]});
        // Reuse slot p for the merged cluster.
        for (std::size_t r : active) {
            if (r == p || r == q) continue;
            const double s = sums[p * n + r] + sums[q * n + r];
            sums[p * n + r] = s;
            sums[r * n + p] = s;
        }
        size[p] += size[q];
        id[p] = n + step;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bq));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bp));
        active.push_back(p);
    }
    return dg;
}

struct ClusterAssignment {
    std::vector<std::string> countries;
    std::vector<std::size_t> cluster_of;              // country -> cluster id
    std::vector<std::vector<std::size_t>> clusters;   // id -> sorted member indices
    std::vector<bool> ignored;                        // per cluster

    std::size_t count() const noexcept { return clusters.size(); }
};

/// Cuts a dendrogram after n - n_clusters merges. Cluster ids are ordered by
/// descending size, then smallest member.
inline ClusterAssignment cut_dendrogram(const Dendrogram& dg, const std::vector<std::string>& countries,
                                        std::size_t n_clusters) {
    const std::size_t n = dg.leaves;
    if (n_clusters < 1 || n_clusters > n)
        throw Error(ErrorCategory::Config, "n_clusters must lie in [1, " + std::to_string(n) + "], got " +
                                               std::to_string(n_clusters));
    // Union-find over leaves and merged ids.
    std::vector<std::size_t> parent(2 * n);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t s = 0; s < n - n_clusters; ++s) {
        const auto& m = dg.merges[s];
        parent[find(m.left)] = n + s;
        parent[find(m.right)] = n + s;
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(2 * n, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == static_cast<std::size_t>(-1)) {
            slot[r] = groups.size();
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    ClusterAssignment ca;
    ca.countries = countries;
    ca.cluster_of.assign(n, 0);
    for (std::size_t c = 0; c < groups.size(); ++c)
        for (auto v : groups[c]) ca.cluster_of[v] = c;
    ca.clusters = std::move(groups);
    ca.ignored.assign(ca.clusters.size(), false);
    return ca;
}

inline ClusterAssignment average_linkage(const DistanceMatrix& dm, std::size_t n_clusters) {
    if (n_clusters < 1 || n_clusters > dm.size())
        throw Error(ErrorCategory::Config, "n_clusters must lie in [1, " + std::to_string(dm.size()) + "], got " +
                                               std::to_string(n_clusters));
    return cut_dendrogram(agglomerate(dm), dm.countries, n_clusters);
}

/// Single-country clusters are kept in the partition but flagged ignored.
inline ClusterAssignment filter_singletons(ClusterAssignment ca) {
    for (std::size_t c = 0; c < ca.clusters.size(); ++c) ca.ignored[c] = ca.clusters[c].size() == 1;
    return ca;
}

}  // namespace mobgraph
