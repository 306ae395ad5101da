#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mobgraph/graph.hpp"
#include "mobgraph/regional.hpp"

namespace fixture {

namespace fs = std::filesystem;

/// Fresh empty directory under the system temp dir.
inline fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mobgraph_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline void write_text(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// The first n countries of the built-in region map, in code order.
inline std::vector<std::string> real_countries(std::size_t n) {
    std::vector<std::string> out;
    const auto rm = mobgraph::default_region_map();
    for (const auto& [c, r] : rm.entries()) {
        if (out.size() == n) break;
        out.push_back(c);
    }
    return out;
}

/// Flow matrix over real country codes with arc probability p and
/// heavy-tailed weights; every country gets at least 3 in and 3 out arcs.
inline std::vector<mobgraph::Arc> flow_arcs(const std::vector<std::string>& countries, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::lognormal_distribution<double> w(3.0, 1.5);
    const std::size_t n = countries.size();
    std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng)) has[i][j] = true;
        for (std::size_t step = 1; step <= 3; ++step) {
            has[i][(i + step) % n] = true;
            has[(i + n - step) % n][i] = true;
        }
    }
    std::vector<mobgraph::Arc> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (has[i][j])
                arcs.push_back({countries[i], countries[j], 1 + static_cast<mobgraph::Weight>(w(rng))});
    return arcs;
}

inline std::string flow_csv(const std::vector<mobgraph::Arc>& arcs) {
    std::string s = "origin,destination,count\n";
    for (const auto& a : arcs) s += a.origin + "," + a.destination + "," + std::to_string(a.weight) + "\n";
    return s;
}

/// Check-in log where each user lives in one country and visits a few others.
inline std::string checkin_csv(const std::vector<std::string>& countries, std::size_t users, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, countries.size() - 1);
    std::uniform_int_distribution<int> home_n(3, 8), trips(0, 3), visits(1, 2);
    std::string s = "user_id,country,timestamp,venue_id\n";
    long t = 1396310400;  // 2014-04-01
    for (std::size_t u = 0; u < users; ++u) {
        const auto home = countries[pick(rng)];
        const std::string id = "user" + std::to_string(u);
        for (int i = home_n(rng); i > 0; --i) s += id + "," + home + "," + std::to_string(t++) + ",v" + std::to_string(u % 97) + "\n";
        for (int k = trips(rng); k > 0; --k) {
            const auto c = countries[pick(rng)];
            for (int i = visits(rng); i > 0; --i) s += id + "," + c + "," + std::to_string(t++) + ",\n";
        }
    }
    return s;
}

}  // namespace fixture
