#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mobgraph/util.hpp"

// Minimal deterministic SVG charts: no timestamps, fixed number formatting,
// jitter drawn from a seeded generator.

namespace mobgraph::svg {

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string esc(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline void open(std::ostringstream& os, double w, double h, std::string_view comment) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) os << "<!-- " << esc(comment) << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
       << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

/// Diverging blue-white-red scale for t in [-1, 1].
inline std::string diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    int r = 255, g = 255, b = 255;
    if (t < 0) {
        r = g = static_cast<int>(std::lround(255.0 * (1.0 + t)));
    } else {
        g = b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

/// One rect per cell, signed color scale symmetric around 0.
inline std::string heatmap(const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                           const std::vector<double>& values, std::string_view title, std::string_view comment = {}) {
    constexpr double cell = 48, left = 120, top = 60;
    const double w = left + cell * static_cast<double>(cols.size()) + 20;
    const double h = top + cell * static_cast<double>(rows.size()) + 20;
    double maxabs = 0.0;
    for (double v : values)
        if (std::isfinite(v)) maxabs = std::max(maxabs, std::abs(v));
    std::ostringstream os;
    detail::open(os, w, h, comment);
    os << "<text x=\"" << detail::num(left) << "\" y=\"20\" font-size=\"14\">" << detail::esc(title) << "</text>\n";
    for (std::size_t c = 0; c < cols.size(); ++c)
        os << "<text x=\"" << detail::num(left + cell * (static_cast<double>(c) + 0.5)) << "\" y=\""
           << detail::num(top - 8) << "\" text-anchor=\"middle\">" << detail::esc(cols[c]) << "</text>\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double y = top + cell * static_cast<double>(r);
        os << "<text x=\"" << detail::num(left - 6) << "\" y=\"" << detail::num(y + cell / 2 + 4)
           << "\" text-anchor=\"end\">" << detail::esc(rows[r]) << "</text>\n";
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double v = values[r * cols.size() + c];
            const double t = (maxabs > 0 && std::isfinite(v)) ? v / maxabs : 0.0;
            const double x = left + cell * static_cast<double>(c);
            os << "<rect class=\"cell\" x=\"" << detail::num(x) << "\" y=\"" << detail::num(y) << "\" width=\""
               << detail::num(cell) << "\" height=\"" << detail::num(cell) << "\" fill=\"" << detail::diverging(t)
               << "\" stroke=\"#999\"/>\n";
            os << "<text x=\"" << detail::num(x + cell / 2) << "\" y=\"" << detail::num(y + cell / 2 + 4)
               << "\" text-anchor=\"middle\" font-size=\"9\">" << util::format6(v) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

/// One circle per labelled value; values on the y axis, x positions
/// jittered by a generator seeded with `seed`.
inline std::string strip(const std::vector<std::string>& labels, const std::vector<double>& values,
                         std::string_view title, std::uint64_t seed, double ymin = -1.0, double ymax = 1.0,
                         std::string_view comment = {}) {
    constexpr double w = 360, h = 420, left = 50, top = 40, plot_w = 280, plot_h = 340;
    std::mt19937_64 rng(seed);
    std::ostringstream os;
    detail::open(os, w, h, comment);
    os << "<text x=\"" << detail::num(left) << "\" y=\"20\" font-size=\"14\">" << detail::esc(title) << "</text>\n";
    const auto y_of = [&](double v) { return top + plot_h * (ymax - v) / (ymax - ymin); };
    os << "<line x1=\"" << detail::num(left) << "\" y1=\"" << detail::num(top) << "\" x2=\"" << detail::num(left)
       << "\" y2=\"" << detail::num(top + plot_h) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << detail::num(left - 6) << "\" y=\"" << detail::num(y_of(v) + 4)
           << "\" text-anchor=\"end\">" << util::format6(v) << "</text>\n";
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double x = left + 10 + (plot_w - 20) * util::uniform_unit(rng);
        os << "<circle class=\"mark\" cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y_of(values[i]))
           << "\" r=\"4\" fill=\"#3366cc\" fill-opacity=\"0.7\"><title>" << detail::esc(labels[i]) << ' '
           << util::format6(values[i]) << "</title></circle>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Horizontal bars around a zero line; missing values render as a gap.
inline std::string bar(const std::vector<std::string>& labels, const std::vector<std::optional<double>>& values,
                       std::string_view title, std::string_view comment = {}) {
    constexpr double left = 80, top = 40, row = 22, plot_w = 400;
    const double w = left + plot_w + 80;
    const double h = top + row * static_cast<double>(labels.size()) + 20;
    double maxabs = 0.0;
    for (const auto& v : values)
        if (v && std::isfinite(*v)) maxabs = std::max(maxabs, std::abs(*v));
    if (maxabs == 0.0) maxabs = 1.0;
    const double zero = left + plot_w / 2;
    std::ostringstream os;
    detail::open(os, w, h, comment);
    os << "<text x=\"" << detail::num(left) << "\" y=\"20\" font-size=\"14\">" << detail::esc(title) << "</text>\n";
    os << "<line x1=\"" << detail::num(zero) << "\" y1=\"" << detail::num(top) << "\" x2=\"" << detail::num(zero)
       << "\" y2=\"" << detail::num(h - 20) << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = top + row * static_cast<double>(i);
        os << "<text x=\"" << detail::num(left - 6) << "\" y=\"" << detail::num(y + row / 2 + 4)
           << "\" text-anchor=\"end\">" << detail::esc(labels[i]) << "</text>\n";
        if (!values[i]) {
            os << "<text x=\"" << detail::num(zero + 4) << "\" y=\"" << detail::num(y + row / 2 + 4)
               << "\" fill=\"#999\">n/a</text>\n";
            continue;
        }
        const double len = (plot_w / 2) * std::abs(*values[i]) / maxabs;
        const double x = *values[i] >= 0 ? zero : zero - len;
        os << "<rect class=\"bar\" x=\"" << detail::num(x) << "\" y=\"" << detail::num(y + 3) << "\" width=\""
           << detail::num(len) << "\" height=\"" << detail::num(row - 6) << "\" fill=\""
           << (*values[i] >= 0 ? "#cc3333" : "#3366cc") << "\"/>\n";
        os << "<text x=\"" << detail::num(w - 70) << "\" y=\"" << detail::num(y + row / 2 + 4) << "\">"
           << util::format6(*values[i]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mobgraph::svg
