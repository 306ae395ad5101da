#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph {

inline constexpr std::size_t kTriadClasses = 16;

/// Standard MAN labels in canonical order.
inline constexpr std::array<std::string_view, kTriadClasses> kTriadNames = {
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300"};

/// Classes 021D..300: the triads whose underlying graph is connected.
inline constexpr std::size_t kFirstConnectedClass = 3;

inline std::size_t triad_index(std::string_view name) {
    for (std::size_t i = 0; i < kTriadClasses; ++i)
        if (kTriadNames[i] == name) return i;
    throw Error(ErrorCategory::Domain, "unknown triad class '" + std::string(name) + "'");
}

struct TriadCensus {
    std::array<std::uint64_t, kTriadClasses> counts{};

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
    std::uint64_t operator[](std::string_view name) const { return counts[triad_index(name)]; }

    friend bool operator==(const TriadCensus&, const TriadCensus&) = default;
};

/// Unweighted digraph with a dense adjacency matrix; the working form for
/// census and rewiring.
class BinaryDigraph {
public:
    BinaryDigraph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> arcs) : n_(n), adj_(n * n, 0), nbrs_(n) {
        for (const auto& [s, t] : arcs) adj_[s * n_ + t] = 1;
        for (std::size_t v = 0; v < n_; ++v)
            for (std::size_t w = 0; w < n_; ++w)
                if (w != v && (adj_[v * n_ + w] || adj_[w * n_ + v])) nbrs_[v].push_back(w);
    }

    explicit BinaryDigraph(const MobilityGraph& g) : BinaryDigraph(g.node_count(), arcs_of(g)) {}

    std::size_t node_count() const noexcept { return n_; }
    bool arc(std::size_t s, std::size_t t) const { return adj_[s * n_ + t] != 0; }
    /// Nodes joined to v by an arc in either direction, ascending.
    const std::vector<std::size_t>& neighbours(std::size_t v) const { return nbrs_[v]; }

    static std::vector<std::pair<NodeId, NodeId>> arcs_of(const MobilityGraph& g) {
        std::vector<std::pair<NodeId, NodeId>> arcs;
        arcs.reserve(g.edge_count());
        for (const auto& e : g.edges()) arcs.emplace_back(e.src, e.dst);
        return arcs;
    }

private:
    std::size_t n_;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<std::size_t>> nbrs_;
};

namespace detail {

// Triad code -> 1-based class in kTriadNames order. The code of (v, u, w)
// sets bit 1 for v->u, 2 for u->v, 4 for v->w, 8 for w->v, 16 for u->w,
// 32 for w->u.
inline constexpr std::array<std::uint8_t, 64> kTricodeClass = {
    1, 2, 2, 3, 2, 4, 6, 8, 2, 6, 5, 7, 3, 8, 7, 11, 2, 6, 4, 8, 5, 9, 9, 13, 6, 10, 9, 14, 7, 14, 12, 15,
    2, 5, 6, 7, 6, 9, 10, 14, 4, 9, 9, 12, 8, 13, 14, 15, 3, 7, 8, 11, 7, 12, 14, 15, 8, 14, 13, 15, 11, 15, 15, 16};

inline unsigned tricode(const BinaryDigraph& g, std::size_t v, std::size_t u, std::size_t w) {
    return (g.arc(v, u) ? 1u : 0u) | (g.arc(u, v) ? 2u : 0u) | (g.arc(v, w) ? 4u : 0u) | (g.arc(w, v) ? 8u : 0u) |
           (g.arc(u, w) ? 16u : 0u) | (g.arc(w, u) ? 32u : 0u);
}

}  // namespace detail

/// Batagelj-Mrvar subquadratic triad census: each connected triad is
/// classified once from its smallest-id dyad; dyadic and empty triads are
/// counted in closed form.
inline TriadCensus triad_census(const BinaryDigraph& g) {
    const std::size_t n = g.node_count();
    if (n < 3) throw Error(ErrorCategory::Domain, "triad census needs at least 3 nodes");
    TriadCensus c;
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& nv = g.neighbours(v);
        for (std::size_t u : nv) {
            if (u <= v) continue;
            const auto& nu = g.neighbours(u);
            s.clear();
            std::set_union(nv.begin(), nv.end(), nu.begin(), nu.end(), std::back_inserter(s));
            s.erase(std::remove_if(s.begin(), s.end(), [&](std::size_t x) { return x == u || x == v; }), s.end());
            const std::size_t dyadic = (g.arc(v, u) && g.arc(u, v)) ? 2 : 1;  // 102 or 012
            c.counts[dyadic] += n - s.size() - 2;
            for (std::size_t w : s) {
                if (u < w || (v < w && w < u && !g.arc(v, w) && !g.arc(w, v)))
                    ++c.counts[detail::kTricodeClass[detail::tricode(g, v, u, w)] - 1];
            }
        }
    }
    const std::uint64_t nn = n;
    const std::uint64_t all = nn * (nn - 1) * (nn - 2) / 6;
    std::uint64_t rest = 0;
    for (std::size_t i = 1; i < kTriadClasses; ++i) rest += c.counts[i];
    c.counts[0] = all - rest;
    return c;
}

inline TriadCensus triad_census(const MobilityGraph& g) { return triad_census(BinaryDigraph(g)); }

namespace detail {

/// Performs `attempts` double-edge-swap attempts in place. A swap replaces
/// a->b, c->d with a->d, c->b and is skipped when it would create a
/// self-loop or an existing arc.
inline void rewire_arcs(std::vector<std::pair<NodeId, NodeId>>& arcs, std::size_t n, std::uint64_t attempts,
                        std::mt19937_64& rng) {
    const std::size_t m = arcs.size();
    if (m < 2) return;
    std::vector<std::uint8_t> adj(n * n, 0);
    for (const auto& [s, t] : arcs) adj[s * n + t] = 1;
    for (std::uint64_t it = 0; it < attempts; ++it) {
        const std::size_t i = util::uniform_below(rng, m);
        const std::size_t j = util::uniform_below(rng, m);
        if (i == j) continue;
        const auto [a, b] = arcs[i];
        const auto [c, d] = arcs[j];
        if (a == c || b == d) continue;            // swap would be a no-op
        if (a == d || c == b) continue;            // self-loop
        if (adj[a * n + d] || adj[c * n + b]) continue;  // parallel arc
        adj[a * n + b] = 0;
        adj[c * n + d] = 0;
        adj[a * n + d] = 1;
        adj[c * n + b] = 1;
        arcs[i] = {a, d};
        arcs[j] = {c, b};
    }
}

}  // namespace detail

/// Degree-preserving randomization. Exactly |E| * swaps_per_edge swap
/// attempts; every node keeps its in- and out-degree. Weights are dropped
/// (all arcs weigh 1). Graphs with fewer than 2 arcs come back unchanged.
inline MobilityGraph rewire(const MobilityGraph& g, std::uint64_t seed, std::uint64_t swaps_per_edge) {
    auto arcs = BinaryDigraph::arcs_of(g);
    std::mt19937_64 rng(seed);
    detail::rewire_arcs(arcs, g.node_count(), arcs.size() * swaps_per_edge, rng);
    std::vector<Edge> edges;
    edges.reserve(arcs.size());
    for (const auto& [s, t] : arcs) edges.push_back({s, t, 1});
    return MobilityGraph::from_indexed(g.nodes(), std::move(edges), g.label());
}

struct MotifScore {
    std::size_t triad_class = 0;  // index into kTriadNames
    std::uint64_t real_count = 0;
    double null_mean = 0.0;
    double null_std = 0.0;
    double z = 0.0;
    bool defined = false;   // false when null_std == 0
    bool relevant = false;  // z >= min_z and real_count >= min_count
};

struct RelevanceThresholds {
    double min_z = 2.0;
    std::uint64_t min_count = 4;
};

struct MotifZScores {
    std::vector<MotifScore> scores;  // the 13 connected classes, canonical order
    std::uint64_t ensemble_size = 0;
    std::uint64_t seed = 0;
    std::uint64_t swaps_per_edge = 0;
};

/// Z-scores of the connected classes of `real` against a given ensemble of
/// null censuses, using the population standard deviation.
inline MotifZScores zscores_from_ensemble(const TriadCensus& real, std::span<const TriadCensus> ensemble,
                                          const RelevanceThresholds& rel = {}) {
    if (ensemble.size() < 2) throw Error(ErrorCategory::Config, "ensemble needs at least 2 samples");
    MotifZScores out;
    out.ensemble_size = ensemble.size();
    const double count = static_cast<double>(ensemble.size());
    for (std::size_t c = kFirstConnectedClass; c < kTriadClasses; ++c) {
        MotifScore s;
        s.triad_class = c;
        s.real_count = real.counts[c];
        std::uint64_t sum = 0;
        for (const auto& t : ensemble) sum += t.counts[c];
        s.null_mean = static_cast<double>(sum) / count;
        double ss = 0.0;
        for (const auto& t : ensemble) {
            const double d = static_cast<double>(t.counts[c]) - s.null_mean;
            ss += d * d;
        }
        s.null_std = std::sqrt(ss / count);
        s.defined = s.null_std > 0.0;
        s.z = s.defined ? (static_cast<double>(s.real_count) - s.null_mean) / s.null_std : 0.0;
        s.relevant = s.defined && s.z >= rel.min_z && s.real_count >= rel.min_count;
        out.scores.push_back(s);
    }
    return out;
}

struct EnsembleParams {
    std::uint64_t ensemble_size = 1000;
    std::uint64_t seed = 0;
    std::uint64_t swaps_per_edge = 100;
    unsigned threads = 1;
};

/// Censuses `ensemble_size` rewired copies of g. Sample i draws from its own
/// generator seeded by (seed, i), so the result does not depend on how
/// samples are spread over threads.
inline std::vector<TriadCensus> null_ensemble(const MobilityGraph& g, const EnsembleParams& p) {
    const auto base = BinaryDigraph::arcs_of(g);
    const std::size_t n = g.node_count();
    std::vector<TriadCensus> out(p.ensemble_size);
    const auto work = [&](std::size_t first, std::size_t stride) {
        std::vector<std::pair<NodeId, NodeId>> arcs;
        for (std::size_t i = first; i < out.size(); i += stride) {
            arcs = base;
            std::mt19937_64 rng(util::derive_seed(p.seed, static_cast<std::uint64_t>(i)));
            detail::rewire_arcs(arcs, n, arcs.size() * p.swaps_per_edge, rng);
            out[i] = triad_census(BinaryDigraph(n, arcs));
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(p.threads, static_cast<unsigned>(out.size())));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }
    return out;
}

inline MotifZScores motif_zscores(const MobilityGraph& g, const EnsembleParams& p,
                                  const RelevanceThresholds& rel = {}) {
    if (p.ensemble_size < 2) throw Error(ErrorCategory::Config, "ensemble_size must be >= 2");
    const auto real = triad_census(g);
    const auto ensemble = null_ensemble(g, p);
    auto z = zscores_from_ensemble(real, ensemble, rel);
    z.seed = p.seed;
    z.swaps_per_edge = p.swaps_per_edge;
    return z;
}

struct PercentDiff {
    std::size_t triad_class = 0;
    double value = 0.0;
    bool defined = false;
};

/// Per class 100 * (z_a - z_b) / |z_b|, where b is the baseline dataset.
/// Undefined when z_b is 0 or either score is undefined.
inline std::vector<PercentDiff> z_percent_diff(const MotifZScores& a, const MotifZScores& b) {
    if (a.scores.size() != b.scores.size())
        throw Error(ErrorCategory::Domain, "motif score sets differ in size");
    std::vector<PercentDiff> out;
    for (std::size_t i = 0; i < a.scores.size(); ++i) {
        const auto& sa = a.scores[i];
        const auto& sb = b.scores[i];
        if (sa.triad_class != sb.triad_class) throw Error(ErrorCategory::Domain, "motif class sets differ");
        PercentDiff d;
        d.triad_class = sa.triad_class;
        d.defined = sa.defined && sb.defined && sb.z != 0.0;
        if (d.defined) d.value = 100.0 * (sa.z - sb.z) / std::abs(sb.z);
        out.push_back(d);
    }
    return out;
}

}  // namespace mobgraph
