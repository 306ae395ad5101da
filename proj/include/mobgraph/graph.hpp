#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mobgraph/error.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph {

using Weight = std::int64_t;
using NodeId = std::size_t;

/// Edge between node indices of one graph.
struct Edge {
    NodeId src;
    NodeId dst;
    Weight weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge keyed by node names, used to build graphs.
struct Arc {
    std::string origin;
    std::string destination;
    Weight weight;
};

enum class Direction { In, Out };

inline std::string_view to_string(Direction d) { return d == Direction::In ? "in" : "out"; }

inline Direction opposite(Direction d) { return d == Direction::In ? Direction::Out : Direction::In; }

/// Weighted directed graph over a canonical (lexicographically sorted) node
/// set. No self-loops, no parallel edges, all weights >= 1. Immutable once
/// built; edges are stored sorted by (src, dst) with a second copy sorted by
/// (dst, src) for incoming scans.
class MobilityGraph {
public:
    MobilityGraph() = default;

    MobilityGraph(std::vector<std::string> nodes, const std::vector<Arc>& arcs, std::string label = {})
        : nodes_(std::move(nodes)), label_(std::move(label)) {
        std::sort(nodes_.begin(), nodes_.end());
        if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
            throw Error(ErrorCategory::Domain, "duplicate node name");
        for (const auto& n : nodes_)
            if (n.empty()) throw Error(ErrorCategory::Domain, "empty node name");

        std::vector<Edge> edges;
        edges.reserve(arcs.size());
        for (const auto& a : arcs) {
            const auto s = index_of(a.origin);
            const auto t = index_of(a.destination);
            if (!s || !t)
                throw Error(ErrorCategory::Domain,
                            "edge " + a.origin + "->" + a.destination + " references an unknown node");
            edges.push_back({*s, *t, a.weight});
        }
        init_edges(std::move(edges));
    }

    /// Builds from index-based edges over an already canonical node list.
    static MobilityGraph from_indexed(std::vector<std::string> sorted_nodes, std::vector<Edge> edges,
                                      std::string label = {}) {
        MobilityGraph g;
        g.nodes_ = std::move(sorted_nodes);
        g.label_ = std::move(label);
        if (!std::is_sorted(g.nodes_.begin(), g.nodes_.end()) ||
            std::adjacent_find(g.nodes_.begin(), g.nodes_.end()) != g.nodes_.end())
            throw Error(ErrorCategory::Domain, "node list must be sorted and unique");
        for (const auto& e : edges)
            if (e.src >= g.nodes_.size() || e.dst >= g.nodes_.size())
                throw Error(ErrorCategory::Domain, "edge index out of range");
        g.init_edges(std::move(edges));
        return g;
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::string& node(NodeId i) const { return nodes_.at(i); }
    const std::string& label() const noexcept { return label_; }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::optional<NodeId> index_of(std::string_view code) const {
        const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), code);
        if (it == nodes_.end() || *it != code) return std::nullopt;
        return static_cast<NodeId>(it - nodes_.begin());
    }

    /// Outgoing edges of `i`, sorted by destination.
    std::span<const Edge> out_edges(NodeId i) const {
        return std::span<const Edge>(edges_).subspan(out_offset_[i], out_offset_[i + 1] - out_offset_[i]);
    }

    /// Incoming edges of `i`, sorted by origin.
    std::span<const Edge> in_edges(NodeId i) const {
        return std::span<const Edge>(in_edges_).subspan(in_offset_[i], in_offset_[i + 1] - in_offset_[i]);
    }

    std::size_t out_degree(NodeId i) const { return out_offset_[i + 1] - out_offset_[i]; }
    std::size_t in_degree(NodeId i) const { return in_offset_[i + 1] - in_offset_[i]; }

    /// Edge weight, 0 when absent.
    Weight weight(NodeId s, NodeId t) const {
        const auto out = out_edges(s);
        const auto it = std::lower_bound(out.begin(), out.end(), t,
                                         [](const Edge& e, NodeId v) { return e.dst < v; });
        return (it != out.end() && it->dst == t) ? it->weight : 0;
    }

    bool has_edge(NodeId s, NodeId t) const { return weight(s, t) != 0; }

    Weight total_weight() const noexcept {
        Weight w = 0;
        for (const auto& e : edges_) w += e.weight;
        return w;
    }

    MobilityGraph with_label(std::string label) const {
        MobilityGraph g = *this;
        g.label_ = std::move(label);
        return g;
    }

    /// Structural equality: node set and weighted edges. The label is metadata.
    friend bool operator==(const MobilityGraph& a, const MobilityGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    void init_edges(std::vector<Edge> edges) {
        for (const auto& e : edges) {
            if (e.src == e.dst)
                throw Error(ErrorCategory::Domain, "self-loop on " + nodes_[e.src]);
            if (e.weight < 1)
                throw Error(ErrorCategory::Domain,
                            "non-positive weight on " + nodes_[e.src] + "->" + nodes_[e.dst]);
        }
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i].src == edges[i - 1].src && edges[i].dst == edges[i - 1].dst)
                throw Error(ErrorCategory::Domain,
                            "duplicate edge " + nodes_[edges[i].src] + "->" + nodes_[edges[i].dst]);
        edges_ = std::move(edges);

        in_edges_ = edges_;
        std::sort(in_edges_.begin(), in_edges_.end(),
                  [](const Edge& a, const Edge& b) { return std::tie(a.dst, a.src) < std::tie(b.dst, b.src); });

        const std::size_t n = nodes_.size();
        out_offset_.assign(n + 1, 0);
        in_offset_.assign(n + 1, 0);
        for (const auto& e : edges_) {
            ++out_offset_[e.src + 1];
            ++in_offset_[e.dst + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            out_offset_[i + 1] += out_offset_[i];
            in_offset_[i + 1] += in_offset_[i];
        }
    }

    std::vector<std::string> nodes_;
    std::string label_;
    std::vector<Edge> edges_;
    std::vector<Edge> in_edges_;
    std::vector<std::size_t> out_offset_{0};
    std::vector<std::size_t> in_offset_{0};
};

/// G_in,k or G_out,k: the base node set with, per node, its k heaviest
/// incoming (In) or outgoing (Out) edges.
class TopKSubgraph {
public:
    TopKSubgraph(MobilityGraph graph, Direction direction, int k)
        : graph_(std::move(graph)), direction_(direction), k_(k) {}

    const MobilityGraph& graph() const noexcept { return graph_; }
    Direction direction() const noexcept { return direction_; }
    int k() const noexcept { return k_; }

    /// e.g. "top3_in"
    std::string tag() const { return "top" + std::to_string(k_) + "_" + std::string(to_string(direction_)); }

private:
    MobilityGraph graph_;
    Direction direction_;
    int k_;
};

namespace detail {

inline TopKSubgraph topk(const MobilityGraph& g, int k, Direction dir) {
    if (k < 1) throw Error(ErrorCategory::Config, "k must be >= 1, got " + std::to_string(k));
    std::vector<Edge> kept;
    std::vector<Edge> candidates;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto span = dir == Direction::In ? g.in_edges(v) : g.out_edges(v);
        candidates.assign(span.begin(), span.end());
        // Heaviest first; equal weights resolved by the smaller opposite
        // endpoint, which is the smaller code since node order is lexicographic.
        std::sort(candidates.begin(), candidates.end(), [dir](const Edge& a, const Edge& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            return dir == Direction::In ? a.src < b.src : a.dst < b.dst;
        });
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
        kept.insert(kept.end(), candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return TopKSubgraph(MobilityGraph::from_indexed(g.nodes(), std::move(kept), g.label()), dir, k);
}

}  // namespace detail

inline TopKSubgraph topk_in(const MobilityGraph& g, int k) { return detail::topk(g, k, Direction::In); }

inline TopKSubgraph topk_out(const MobilityGraph& g, int k) { return detail::topk(g, k, Direction::Out); }

inline TopKSubgraph topk(const MobilityGraph& g, Direction dir, int k) { return detail::topk(g, k, dir); }

/// Writes the `origin,destination,count` edge list, rows sorted by
/// (origin, destination). Nodes without edges are listed on a leading
/// `# nodes:` comment so the node set survives a round trip.
inline void write_edge_csv(std::ostream& out, const MobilityGraph& g) {
    std::vector<std::string> isolated;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.in_degree(v) == 0 && g.out_degree(v) == 0) isolated.push_back(g.node(v));
    if (!isolated.empty()) {
        out << "# nodes:";
        for (const auto& n : isolated) out << ' ' << n;
        out << '\n';
    }
    out << "origin,destination,count\n";
    for (const auto& e : g.edges())
        out << util::csv_field(g.node(e.src)) << ',' << util::csv_field(g.node(e.dst)) << ',' << e.weight << '\n';
}

}  // namespace mobgraph
