#pragma once

// Slow, obviously-correct reference implementations used only by tests.
// None of these call into the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mobgraph/graph.hpp"

namespace oracle {

using mobgraph::Arc;
using mobgraph::MobilityGraph;

/// Two-letter codes AA, AB, ... in lexicographic order.
inline std::string code(std::size_t i) {
    return {static_cast<char>('A' + i / 26), static_cast<char>('A' + i % 26)};
}

inline std::vector<std::string> codes(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(code(i));
    return out;
}

/// Erdos-Renyi style digraph with arc probability p and weights in [1, max_w].
inline MobilityGraph random_graph(std::size_t n, double p, std::mt19937_64& rng, std::int64_t max_w = 50) {
    std::bernoulli_distribution coin(p);
    std::uniform_int_distribution<std::int64_t> w(1, max_w);
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng)) arcs.push_back({code(i), code(j), w(rng)});
    return MobilityGraph(codes(n), arcs, "random");
}

/// Complete digraph with random weights: every node has n-1 candidates in
/// both directions.
inline MobilityGraph dense_graph(std::size_t n, std::mt19937_64& rng, std::int64_t max_w = 10000) {
    return random_graph(n, 1.0, rng, max_w);
}

inline std::vector<std::vector<bool>> adjacency(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges()) a[e.src][e.dst] = true;
    return a;
}

/// Sparse random background plus feed-forward triads (a->b, b->c, a->c)
/// planted on disjoint node triples.
inline MobilityGraph planted_feed_forward(std::size_t n, std::size_t planted, double background,
                                          std::mt19937_64& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t t = 0; t < planted && 3 * t + 2 < n; ++t) {
        const auto a = perm[3 * t], b = perm[3 * t + 1], c = perm[3 * t + 2];
        arcs.insert({a, b});
        arcs.insert({b, c});
        arcs.insert({a, c});
    }
    std::bernoulli_distribution coin(background);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !arcs.contains({j, i}) && coin(rng)) arcs.insert({i, j});
    std::vector<Arc> out;
    for (const auto& [s, t] : arcs) out.push_back({code(s), code(t), 1});
    return MobilityGraph(codes(n), out, "planted");
}

// Triads ------------------------------------------------------------------

/// Classifies one triple by dyad counts and arc orientation rules.
inline std::string classify_triad(const std::vector<std::vector<bool>>& a, std::size_t x, std::size_t y,
                                  std::size_t z) {
    const std::size_t v[3] = {x, y, z};
    int m = 0, as = 0, nu = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const bool f = a[v[i]][v[j]], b = a[v[j]][v[i]];
            if (f && b) ++m;
            else if (f || b) ++as;
            else ++nu;
        }
    int outd[3] = {0, 0, 0}, ind[3] = {0, 0, 0};
    std::vector<std::pair<int, int>> asym;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && a[v[i]][v[j]]) {
                ++outd[i];
                ++ind[j];
                if (!a[v[j]][v[i]]) asym.emplace_back(i, j);
            }
    const std::string base = std::to_string(m) + std::to_string(as) + std::to_string(nu);
    const auto has2 = [](const int* d) { return d[0] == 2 || d[1] == 2 || d[2] == 2; };
    if (base == "021") return has2(outd) ? "021D" : has2(ind) ? "021U" : "021C";
    if (base == "030") return has2(outd) ? "030T" : "030C";
    if (base == "111") {
        const int t = asym[0].second;
        bool in_pair = false;
        for (int u = 0; u < 3; ++u)
            if (u != t && a[v[t]][v[u]] && a[v[u]][v[t]]) in_pair = true;
        return in_pair ? "111D" : "111U";
    }
    if (base == "120") {
        if (asym[0].first == asym[1].first) return "120D";
        if (asym[0].second == asym[1].second) return "120U";
        return "120C";
    }
    return base;
}

inline std::map<std::string, std::uint64_t> brute_census(const MobilityGraph& g) {
    const auto a = adjacency(g);
    const std::size_t n = g.node_count();
    std::map<std::string, std::uint64_t> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) ++out[classify_triad(a, i, j, k)];
    return out;
}

// Shortest paths ----------------------------------------------------------

/// Betweenness by counting geodesics per (s,t) pair: sigma_st(v) is the
/// number of shortest s-t paths through v, obtained as sigma_sv * sigma_vt
/// when d(s,v) + d(v,t) = d(s,t).
inline std::vector<double> brute_betweenness(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    const auto a = adjacency(g);
    const long inf = std::numeric_limits<long>::max() / 4;
    std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
        d[s][s] = 0;
        sigma[s][s] = 1;
        // Level-by-level relaxation.
        for (long level = 0; level < static_cast<long>(n); ++level)
            for (std::size_t u = 0; u < n; ++u)
                if (d[s][u] == level)
                    for (std::size_t w = 0; w < n; ++w)
                        if (a[u][w]) {
                            if (d[s][w] == inf) d[s][w] = level + 1;
                            if (d[s][w] == level + 1) sigma[s][w] += sigma[s][u];
                        }
    }
    std::vector<double> bc(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) {
            if (s == t || d[s][t] == inf) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (v == s || v == t || d[s][v] == inf || d[v][t] == inf) continue;
                if (d[s][v] + d[v][t] == d[s][t]) bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
            }
        }
    return bc;
}

/// All-pairs hop distances by Floyd-Warshall; -1 when unreachable.
inline std::vector<std::vector<long>> all_pairs(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    const long inf = std::numeric_limits<long>::max() / 4;
    std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : g.edges()) d[e.src][e.dst] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    for (auto& row : d)
        for (auto& x : row)
            if (x == inf) x = -1;
    return d;
}

// PageRank ----------------------------------------------------------------

/// Solves (I - d P^T) x = (1-d)/n + d * (dangling mass)/n directly. With
/// the dangling term folded into the matrix the system is linear in x.
inline std::vector<double> linear_pagerank(const MobilityGraph& g, double damping) {
    const std::size_t n = g.node_count();
    std::vector<double> out_w(n, 0.0);
    for (const auto& e : g.edges()) out_w[e.src] += static_cast<double>(e.weight);
    // M[j][i] = probability of moving i -> j.
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) M[e.dst][e.src] += static_cast<double>(e.weight) / out_w[e.src];
    for (std::size_t i = 0; i < n; ++i)
        if (out_w[i] == 0.0)
            for (std::size_t j = 0; j < n; ++j) M[j][i] = 1.0 / static_cast<double>(n);
    // A x = b with A = I - d M, b = (1-d)/n.
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A[i][j] = (i == j ? 1.0 : 0.0) - damping * M[i][j];
        A[i][n] = (1.0 - damping) / static_cast<double>(n);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

// Components --------------------------------------------------------------

/// Kosaraju: finishing order on g, then DFS on the transpose. Returns the
/// partition as a set of sorted member lists.
inline std::set<std::vector<std::size_t>> kosaraju(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    const auto a = adjacency(g);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> order;
    std::function<void(std::size_t)> dfs1 = [&](std::size_t v) {
        seen[v] = true;
        for (std::size_t w = 0; w < n; ++w)
            if (a[v][w] && !seen[w]) dfs1(w);
        order.push_back(v);
    };
    for (std::size_t v = 0; v < n; ++v)
        if (!seen[v]) dfs1(v);
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> members;
    std::function<void(std::size_t, int)> dfs2 = [&](std::size_t v, int c) {
        comp[v] = c;
        members.push_back(v);
        for (std::size_t w = 0; w < n; ++w)
            if (a[w][v] && comp[w] < 0) dfs2(w, c);
    };
    std::set<std::vector<std::size_t>> out;
    int c = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (comp[*it] < 0) {
            members.clear();
            dfs2(*it, c++);
            std::sort(members.begin(), members.end());
            out.insert(members);
        }
    return out;
}

// Clustering --------------------------------------------------------------

struct NaiveMerge {
    std::size_t left, right;
    double height;
};

/// Recomputes every cluster-pair linkage from scratch at each step.
inline std::vector<NaiveMerge> naive_average_linkage(const std::vector<double>& d, std::size_t n) {
    struct Cluster {
        std::size_t id;
        std::vector<std::size_t> members;
    };
    std::vector<Cluster> live;
    for (std::size_t i = 0; i < n; ++i) live.push_back({i, {i}});
    std::vector<NaiveMerge> out;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        std::pair<std::size_t, std::size_t> best_ids{~0ULL, ~0ULL};
        for (std::size_t i = 0; i < live.size(); ++i)
            for (std::size_t j = 0; j < live.size(); ++j) {
                if (i == j) continue;
                double s = 0.0;
                for (auto x : live[i].members)
                    for (auto y : live[j].members) s += d[x * n + y] + d[y * n + x];
                const double link = s / (2.0 * static_cast<double>(live[i].members.size() * live[j].members.size()));
                const std::pair<std::size_t, std::size_t> ids{std::min(live[i].id, live[j].id),
                                                              std::max(live[i].id, live[j].id)};
                if (link < best - 1e-12 || (std::abs(link - best) <= 1e-12 && ids < best_ids)) {
                    best = link;
                    bi = i;
                    bj = j;
                    best_ids = ids;
                }
            }
        out.push_back({best_ids.first, best_ids.second, best});
        Cluster merged{n + step, live[bi].members};
        merged.members.insert(merged.members.end(), live[bj].members.begin(), live[bj].members.end());
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::max(bi, bj)));
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::min(bi, bj)));
        live.push_back(merged);
    }
    return out;
}

// Statistics --------------------------------------------------------------

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double pop_variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

/// Textbook covariance / (sigma_x sigma_y).
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x), my = mean(y);
    double c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
    c /= static_cast<double>(x.size());
    return c / std::sqrt(pop_variance(x) * pop_variance(y));
}

// Degree-constrained families ---------------------------------------------

/// Every simple digraph on n nodes (no self-loops) whose in/out degree
/// sequences match, each encoded as a bitmask over the n(n-1) off-diagonal
/// cells in row-major order.
inline std::vector<std::uint64_t> degree_family(std::size_t n, const std::vector<int>& out_deg,
                                                const std::vector<int>& in_deg) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) cells.emplace_back(i, j);
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (1ULL << cells.size()); ++mask) {
        std::vector<int> o(n, 0), in(n, 0);
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (mask >> c & 1) {
                ++o[cells[c].first];
                ++in[cells[c].second];
            }
        if (o == out_deg && in == in_deg) out.push_back(mask);
    }
    return out;
}

inline std::uint64_t arc_mask(const MobilityGraph& g) {
    const std::size_t n = g.node_count();
    std::uint64_t mask = 0;
    for (const auto& e : g.edges()) {
        const std::size_t cell = e.src * (n - 1) + (e.dst < e.src ? e.dst : e.dst - 1);
        mask |= 1ULL << cell;
    }
    return mask;
}

}  // namespace oracle
