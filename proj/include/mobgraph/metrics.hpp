#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"

namespace mobgraph {

struct DyadCensus {
    std::uint64_t mutual = 0;
    std::uint64_t asymmetric = 0;
    std::uint64_t null = 0;

    friend bool operator==(const DyadCensus&, const DyadCensus&) = default;
};

/// Classifies every unordered node pair by how many of its two arcs exist.
inline DyadCensus dyad_census(const MobilityGraph& g) {
    DyadCensus c;
    for (const auto& e : g.edges()) {
        if (g.has_edge(e.dst, e.src)) {
            if (e.src < e.dst) ++c.mutual;
        } else {
            ++c.asymmetric;
        }
    }
    const std::uint64_t n = g.node_count();
    c.null = n * (n - (n > 0 ? 1 : 0)) / 2 - c.mutual - c.asymmetric;
    return c;
}

/// Fraction of arcs whose reverse arc also exists; 0 for an edgeless graph.
inline double reciprocity(const MobilityGraph& g) {
    if (g.edge_count() == 0) return 0.0;
    const auto d = dyad_census(g);
    return static_cast<double>(2 * d.mutual) / static_cast<double>(2 * d.mutual + d.asymmetric);
}

/// Global clustering over successor neighbourhoods: closed ordered pairs
/// (w, u) with w, u successors of v and w -> u, divided by d+(v)(d+(v) - 1),
/// summed over v. On graphs where every node keeps a single in- or out-arc
/// (Top-1 subgraphs) this is always 0.
inline double transitivity(const MobilityGraph& g) {
    std::uint64_t closed = 0;
    std::uint64_t triads = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto out = g.out_edges(v);
        const std::uint64_t d = out.size();
        triads += d * (d - (d > 0 ? 1 : 0));
        for (const auto& vw : out)
            for (const auto& vu : out)
                if (vw.dst != vu.dst && g.has_edge(vw.dst, vu.dst)) ++closed;
    }
    return closed == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triads);
}

struct GeodesicStats {
    double average = 0.0;            // over reachable ordered pairs s != t
    std::uint64_t diameter = 0;      // longest finite shortest path
    std::uint64_t reachable_pairs = 0;
    std::uint64_t unreachable_pairs = 0;
};

/// Unweighted BFS distances from `s`; -1 marks unreachable nodes.
inline std::vector<std::int64_t> bfs_distances(const MobilityGraph& g, NodeId s) {
    std::vector<std::int64_t> dist(g.node_count(), -1);
    std::vector<NodeId> queue;
    queue.reserve(g.node_count());
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        for (const auto& e : g.out_edges(v)) {
            if (dist[e.dst] < 0) {
                dist[e.dst] = dist[v] + 1;
                queue.push_back(e.dst);
            }
        }
    }
    return dist;
}

inline GeodesicStats geodesic_stats(const MobilityGraph& g) {
    GeodesicStats st;
    std::uint64_t total = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        const auto dist = bfs_distances(g, s);
        for (NodeId t = 0; t < g.node_count(); ++t) {
            if (t == s) continue;
            if (dist[t] < 0) {
                ++st.unreachable_pairs;
            } else {
                ++st.reachable_pairs;
                total += static_cast<std::uint64_t>(dist[t]);
                st.diameter = std::max<std::uint64_t>(st.diameter, static_cast<std::uint64_t>(dist[t]));
            }
        }
    }
    if (st.reachable_pairs > 0) st.average = static_cast<double>(total) / static_cast<double>(st.reachable_pairs);
    return st;
}

/// Freeman-style degree centralization: sum over v of (d_max - d_v) / (n-1)^2.
inline double degree_centralization(const MobilityGraph& g, Direction dir) {
    const std::size_t n = g.node_count();
    if (n < 3) throw Error(ErrorCategory::Domain, "degree centralization needs at least 3 nodes");
    std::vector<std::size_t> deg(n);
    for (NodeId v = 0; v < n; ++v) deg[v] = dir == Direction::In ? g.in_degree(v) : g.out_degree(v);
    const std::size_t dmax = *std::max_element(deg.begin(), deg.end());
    std::uint64_t sum = 0;
    for (auto d : deg) sum += dmax - d;
    const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 1);
    return static_cast<double>(sum) / denom;
}

struct StructuralReport {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    double density = 0.0;
    double avg_geodesic = 0.0;
    std::uint64_t diameter = 0;
    std::uint64_t reachable_pairs = 0;
    std::uint64_t unreachable_pairs = 0;
    double avg_degree = 0.0;
    Direction centralization_direction = Direction::In;
    double degree_centralization = 0.0;
    double avg_strength = 0.0;
    DyadCensus dyads;
    double reciprocity = 0.0;
    double transitivity = 0.0;
};

/// The per-subgraph statistics table. Centralization is taken on the
/// unconstrained direction: out-degree for Top-k In, in-degree for Top-k Out.
inline StructuralReport structural_report(const TopKSubgraph& sg) {
    const auto& g = sg.graph();
    const std::size_t n = g.node_count();
    if (n < 2) throw Error(ErrorCategory::Domain, "structural report needs at least 2 nodes");
    StructuralReport r;
    r.node_count = n;
    r.edge_count = g.edge_count();
    r.density = static_cast<double>(r.edge_count) / (static_cast<double>(n) * static_cast<double>(n - 1));
    const auto geo = geodesic_stats(g);
    r.avg_geodesic = geo.average;
    r.diameter = geo.diameter;
    r.reachable_pairs = geo.reachable_pairs;
    r.unreachable_pairs = geo.unreachable_pairs;
    r.avg_degree = static_cast<double>(r.edge_count) / static_cast<double>(n);
    r.centralization_direction = opposite(sg.direction());
    r.degree_centralization = n >= 3 ? degree_centralization(g, r.centralization_direction) : 0.0;
    r.avg_strength = static_cast<double>(g.total_weight()) / static_cast<double>(n);
    r.dyads = dyad_census(g);
    r.reciprocity = reciprocity(g);
    r.transitivity = transitivity(g);
    return r;
}

struct PageRankParams {
    double damping = 0.85;
    double tol = 1e-9;
    std::uint64_t max_iter = 1'000'000;
};

struct PageRankResult {
    std::vector<double> values;  // aligned with graph nodes
    std::uint64_t iterations = 0;
    double residual = 0.0;
};

/// Weighted PageRank by power iteration. Transitions from i are proportional
/// to w_ij; nodes without out-arcs spread their mass uniformly. Stops once
/// the L1 change between iterates drops below `tol`.
inline PageRankResult pagerank(const MobilityGraph& g, const PageRankParams& p = {}) {
    if (!(p.damping > 0.0 && p.damping < 1.0))
        throw Error(ErrorCategory::Config, "pagerank damping must lie in (0, 1)");
    const std::size_t n = g.node_count();
    PageRankResult res;
    if (n == 0) return res;

    std::vector<double> out_strength(n, 0.0);
    for (const auto& e : g.edges()) out_strength[e.src] += static_cast<double>(e.weight);

    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, inv_n), next(n);
    for (std::uint64_t it = 1; it <= p.max_iter; ++it) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (out_strength[v] == 0.0) dangling += x[v];
        const double base = (1.0 - p.damping) * inv_n + p.damping * dangling * inv_n;
        std::fill(next.begin(), next.end(), base);
        for (const auto& e : g.edges())
            next[e.dst] += p.damping * x[e.src] * static_cast<double>(e.weight) / out_strength[e.src];
        double change = 0.0;
        for (NodeId v = 0; v < n; ++v) change += std::abs(next[v] - x[v]);
        x.swap(next);
        res.iterations = it;
        res.residual = change;
        if (change < p.tol) {
            const double sum = std::accumulate(x.begin(), x.end(), 0.0);
            for (auto& v : x) v /= sum;
            res.values = std::move(x);
            return res;
        }
    }
    throw Error(ErrorCategory::Numeric, "pagerank did not converge in " + std::to_string(p.max_iter) +
                                            " iterations (residual " + util::format_full(res.residual) + ")");
}

/// Directed betweenness over unweighted shortest paths, unnormalized:
/// for each v, the sum over ordered pairs (s, t), s != v != t, of the share
/// of s-t geodesics passing through v. Brandes dependency accumulation.
inline std::vector<double> betweenness(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<std::int64_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const NodeId v = order[head];
            for (const auto& e : g.out_edges(v)) {
                const NodeId w = e.dst;
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        // Predecessors of w are in-neighbours one level closer to s.
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (const auto& e : g.in_edges(w)) {
                const NodeId v = e.src;
                if (dist[v] >= 0 && dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) bc[w] += delta[w];
        }
    }
    return bc;
}

/// Strongly connected components. Ids are ordered by descending component
/// size, then by smallest member (node order is lexicographic by code).
struct ComponentAssignment {
    std::vector<std::size_t> component_of;             // node -> component id
    std::vector<std::vector<NodeId>> components;       // id -> sorted members

    std::size_t count() const noexcept { return components.size(); }
};

namespace detail {

inline ComponentAssignment canonical_components(std::vector<std::vector<NodeId>> comps, std::size_t n) {
    for (auto& c : comps) std::sort(c.begin(), c.end());
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    ComponentAssignment out;
    out.component_of.assign(n, 0);
    for (std::size_t id = 0; id < comps.size(); ++id)
        for (NodeId v : comps[id]) out.component_of[v] = id;
    out.components = std::move(comps);
    return out;
}

}  // namespace detail

/// Single-pass Tarjan with Nuutila's refinement: only nodes that are not
/// component roots go on the auxiliary stack. Iterative, so deep graphs do
/// not exhaust the call stack.
inline ComponentAssignment scc(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnvisited = 0;
    std::vector<std::size_t> preorder(n, kUnvisited), lowlink(n, 0), next_edge(n, 0);
    std::vector<bool> assigned(n, false);
    std::vector<NodeId> call_stack, pending;
    std::vector<std::vector<NodeId>> comps;
    std::size_t counter = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (preorder[root] != kUnvisited) continue;
        call_stack.push_back(root);
        while (!call_stack.empty()) {
            const NodeId v = call_stack.back();
            if (preorder[v] == kUnvisited) {
                preorder[v] = ++counter;
                lowlink[v] = preorder[v];
            }
            const auto out = g.out_edges(v);
            bool descended = false;
            while (next_edge[v] < out.size()) {
                const NodeId w = out[next_edge[v]].dst;
                if (preorder[w] == kUnvisited) {
                    call_stack.push_back(w);
                    descended = true;
                    break;
                }
                ++next_edge[v];
                if (!assigned[w]) lowlink[v] = std::min(lowlink[v], preorder[w] > preorder[v] ? lowlink[w] : preorder[w]);
            }
            if (descended) continue;

            call_stack.pop_back();
            if (!call_stack.empty()) {
                // Fold the finished child into its parent's low-link.
                const NodeId parent = call_stack.back();
                ++next_edge[parent];
                if (!assigned[v]) lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
            if (lowlink[v] == preorder[v]) {
                std::vector<NodeId> comp{v};
                assigned[v] = true;
                while (!pending.empty() && preorder[pending.back()] > preorder[v]) {
                    comp.push_back(pending.back());
                    assigned[pending.back()] = true;
                    pending.pop_back();
                }
                comps.push_back(std::move(comp));
            } else {
                pending.push_back(v);
            }
        }
    }
    return detail::canonical_components(std::move(comps), n);
}

/// Competition ranking in descending order of value: ties share the
/// smaller rank and the next rank skips.
inline std::vector<std::size_t> competition_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos > 0 && values[idx[pos]] == values[idx[pos - 1]])
            rank[idx[pos]] = rank[idx[pos - 1]];
        else
            rank[idx[pos]] = pos + 1;
    }
    return rank;
}

enum class Measure { InDegree, OutDegree, InStrength, OutStrength, PageRank, Betweenness };

inline constexpr Measure kAllMeasures[] = {Measure::InDegree,    Measure::OutDegree, Measure::InStrength,
                                           Measure::OutStrength, Measure::PageRank,  Measure::Betweenness};

inline std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::InDegree: return "in_degree";
        case Measure::OutDegree: return "out_degree";
        case Measure::InStrength: return "in_strength";
        case Measure::OutStrength: return "out_strength";
        case Measure::PageRank: return "pagerank";
        case Measure::Betweenness: return "betweenness";
    }
    return "";
}

/// Per-country centralities. All vectors are aligned with `countries`.
struct CentralityTable {
    std::vector<std::string> countries;
    std::vector<double> in_degree, out_degree, in_strength, out_strength, pagerank, betweenness;

    const std::vector<double>& values(Measure m) const {
        switch (m) {
            case Measure::InDegree: return in_degree;
            case Measure::OutDegree: return out_degree;
            case Measure::InStrength: return in_strength;
            case Measure::OutStrength: return out_strength;
            case Measure::PageRank: return pagerank;
            case Measure::Betweenness: return betweenness;
        }
        throw Error(ErrorCategory::Domain, "unknown measure");
    }

    std::vector<std::size_t> ranks(Measure m) const { return competition_ranks(values(m)); }
};

inline CentralityTable centrality_table(const MobilityGraph& g, const PageRankParams& p = {}) {
    const std::size_t n = g.node_count();
    CentralityTable t;
    t.countries = g.nodes();
    t.in_degree.assign(n, 0.0);
    t.out_degree.assign(n, 0.0);
    t.in_strength.assign(n, 0.0);
    t.out_strength.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        t.in_degree[v] = static_cast<double>(g.in_degree(v));
        t.out_degree[v] = static_cast<double>(g.out_degree(v));
    }
    for (const auto& e : g.edges()) {
        t.out_strength[e.src] += static_cast<double>(e.weight);
        t.in_strength[e.dst] += static_cast<double>(e.weight);
    }
    t.pagerank = pagerank(g, p).values;
    t.betweenness = betweenness(g);
    return t;
}

}  // namespace mobgraph
