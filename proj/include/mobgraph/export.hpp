#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"

namespace mobgraph {

enum class ExportFormat { Dot, GraphML, EdgeCsv };

inline ExportFormat parse_export_format(std::string_view s) {
    if (s == "dot") return ExportFormat::Dot;
    if (s == "graphml") return ExportFormat::GraphML;
    if (s == "csv") return ExportFormat::EdgeCsv;
    throw Error(ErrorCategory::Config, "unknown export format '" + std::string(s) + "'");
}

namespace detail {

inline std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline void write_dot(std::ostream& out, const MobilityGraph& g) {
    out << "digraph " << dot_quote(g.label().empty() ? "mobility" : g.label()) << " {\n";
    for (const auto& n : g.nodes()) out << "  " << dot_quote(n) << ";\n";
    for (const auto& e : g.edges())
        out << "  " << dot_quote(g.node(e.src)) << " -> " << dot_quote(g.node(e.dst)) << " [weight=" << e.weight
            << "];\n";
    out << "}\n";
}

inline void write_graphml(std::ostream& out, const MobilityGraph& g) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <graph id=\"" << xml_escape(g.label().empty() ? "mobility" : g.label())
        << "\" edgedefault=\"directed\">\n";
    for (const auto& n : g.nodes()) out << "    <node id=\"" << xml_escape(n) << "\"/>\n";
    for (const auto& e : g.edges())
        out << "    <edge source=\"" << xml_escape(g.node(e.src)) << "\" target=\"" << xml_escape(g.node(e.dst))
            << "\"><data key=\"weight\">" << e.weight << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
}

}  // namespace detail

/// Serializes nodes and weighted edges in sorted order; output bytes depend
/// only on the graph.
inline void export_graph(std::ostream& out, const MobilityGraph& g, ExportFormat format) {
    switch (format) {
        case ExportFormat::Dot: detail::write_dot(out, g); return;
        case ExportFormat::GraphML: detail::write_graphml(out, g); return;
        case ExportFormat::EdgeCsv: write_edge_csv(out, g); return;
    }
    throw Error(ErrorCategory::Config, "unknown export format");
}

inline std::string export_graph(const MobilityGraph& g, ExportFormat format) {
    std::ostringstream os;
    export_graph(os, g, format);
    return os.str();
}

}  // namespace mobgraph
