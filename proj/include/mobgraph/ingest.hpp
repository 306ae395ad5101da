#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobgraph/error.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/util.hpp"

namespace mobgraph {

struct CheckinRecord {
    std::string user_id;
    std::string country;
    std::chrono::sys_seconds timestamp;
    std::optional<std::string> venue_id;
};

enum class InputFormat { Csv, Ndjson };
enum class ParseMode { Strict, Lenient };

inline InputFormat parse_input_format(std::string_view s) {
    if (s == "csv") return InputFormat::Csv;
    if (s == "ndjson" || s == "jsonl") return InputFormat::Ndjson;
    throw Error(ErrorCategory::Config, "unknown input format '" + std::string(s) + "'");
}

/// Check-in records plus the exact aggregations the pipeline needs.
class CheckinTable {
public:
    void add(CheckinRecord r) {
        ++country_counts_[r.country];
        ++user_counts_[r.user_id][r.country];
        records_.push_back(std::move(r));
    }

    void note_skipped(std::size_t line) { skipped_lines_.push_back(line); }

    const std::vector<CheckinRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// Total check-ins per country.
    const std::map<std::string, std::size_t>& country_counts() const noexcept { return country_counts_; }

    /// user -> (country -> check-ins).
    const std::map<std::string, std::map<std::string, std::size_t>>& user_country_counts() const noexcept {
        return user_counts_;
    }

    /// Rows rejected in lenient mode (1-based line numbers).
    const std::vector<std::size_t>& skipped_lines() const noexcept { return skipped_lines_; }
    std::size_t skipped() const noexcept { return skipped_lines_.size(); }

private:
    std::vector<CheckinRecord> records_;
    std::map<std::string, std::size_t> country_counts_;
    std::map<std::string, std::map<std::string, std::size_t>> user_counts_;
    std::vector<std::size_t> skipped_lines_;
};

using HomeAssignment = std::map<std::string, std::string>;

namespace detail {

inline bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline std::optional<int> fixed_int(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos + len > s.size()) return std::nullopt;
    const auto part = s.substr(pos, len);
    if (!all_digits(part)) return std::nullopt;
    return static_cast<int>(*util::parse_int(part));
}

}  // namespace detail

/// Accepts epoch seconds or ISO-8601 `YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|±HH:MM]`.
/// Fractional seconds are truncated.
inline std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    s = util::trim(s);
    if (detail::all_digits(s) || (s.size() > 1 && s.front() == '-' && detail::all_digits(s.substr(1)))) {
        const auto v = util::parse_int(s);
        if (!v) return std::nullopt;
        return sys_seconds{seconds{*v}};
    }
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        s[16] != ':')
        return std::nullopt;
    const auto y = detail::fixed_int(s, 0, 4), mo = detail::fixed_int(s, 5, 2), d = detail::fixed_int(s, 8, 2);
    const auto h = detail::fixed_int(s, 11, 2), mi = detail::fixed_int(s, 14, 2), se = detail::fixed_int(s, 17, 2);
    if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok() || *h > 23 || *mi > 59 || *se > 60) return std::nullopt;

    std::string_view rest = s.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
        if (i == 1) return std::nullopt;
        rest.remove_prefix(i);
    }
    seconds offset{0};
    if (rest == "Z" || rest.empty()) {
    } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
        const auto oh = detail::fixed_int(rest, 1, 2), om = detail::fixed_int(rest, 4, 2);
        if (!oh || !om || *oh > 23 || *om > 59) return std::nullopt;
        offset = hours{*oh} + minutes{*om};
        if (rest[0] == '-') offset = -offset;
    } else {
        return std::nullopt;
    }
    return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*se} - offset;
}

namespace detail {

/// Validates one logical record; returns an error message or nothing.
inline std::optional<std::string> make_record(std::string user, std::string country, std::string_view ts,
                                              std::optional<std::string> venue, CheckinRecord& out) {
    if (user.empty()) return "empty user_id";
    if (!util::is_country_code(country)) return "country '" + country + "' is not an ISO-3166 alpha-2 code";
    const auto t = parse_timestamp(ts);
    if (!t) return "unparseable timestamp '" + std::string(ts) + "'";
    out = CheckinRecord{std::move(user), std::move(country), *t, std::move(venue)};
    return std::nullopt;
}

inline void parse_checkins_csv(std::string_view data, ParseMode mode, CheckinTable& table) {
    bool header_seen = false;
    bool has_venue = false;
    util::for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (util::trim(line).empty()) return;
        auto fields = util::split_csv_line(line);
        for (auto& f : fields) f = std::string(util::trim(f));
        if (!header_seen) {
            header_seen = true;
            const bool base = fields.size() >= 3 && fields[0] == "user_id" && fields[1] == "country" &&
                              fields[2] == "timestamp";
            has_venue = fields.size() == 4 && fields[3] == "venue_id";
            if (!base || (fields.size() != 3 && !has_venue))
                throw ParseError(line_no, "expected header user_id,country,timestamp[,venue_id]");
            return;
        }
        std::optional<std::string> err;
        CheckinRecord rec;
        const std::size_t expected = has_venue ? 4 : 3;
        if (fields.size() != expected) {
            err = "expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size());
        } else {
            std::optional<std::string> venue;
            if (has_venue && !fields[3].empty()) venue = fields[3];
            err = make_record(fields[0], fields[1], fields[2], std::move(venue), rec);
        }
        if (err) {
            if (mode == ParseMode::Strict) throw ParseError(line_no, *err);
            table.note_skipped(line_no);
            return;
        }
        table.add(std::move(rec));
    });
    if (!header_seen) throw ParseError(1, "missing header user_id,country,timestamp[,venue_id]");
}

inline void parse_checkins_ndjson(std::string_view data, ParseMode mode, CheckinTable& table) {
    util::for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (util::trim(line).empty()) return;
        std::optional<std::string> err;
        CheckinRecord rec;
        const auto j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            err = "not a JSON object";
        } else if (!j.contains("user_id") || !j.contains("country") || !j.contains("timestamp")) {
            err = "missing one of user_id, country, timestamp";
        } else {
            const auto& u = j["user_id"];
            const auto& c = j["country"];
            const auto& t = j["timestamp"];
            std::string user = u.is_string() ? u.get<std::string>() : (u.is_number_integer() ? u.dump() : "");
            std::string ts = t.is_string() ? t.get<std::string>() : (t.is_number_integer() ? t.dump() : "");
            std::optional<std::string> venue;
            if (j.contains("venue_id") && j["venue_id"].is_string()) venue = j["venue_id"].get<std::string>();
            if (!c.is_string())
                err = "country is not a string";
            else
                err = make_record(std::move(user), c.get<std::string>(), ts, std::move(venue), rec);
        }
        if (err) {
            if (mode == ParseMode::Strict) throw ParseError(line_no, *err);
            table.note_skipped(line_no);
            return;
        }
        table.add(std::move(rec));
    });
}

}  // namespace detail

/// Parses a check-in log. Strict mode aborts on the first malformed row;
/// lenient mode skips it and records its line number in the table.
inline CheckinTable parse_checkins(std::istream& in, InputFormat format, ParseMode mode = ParseMode::Strict) {
    const std::string data = util::read_all(in);
    CheckinTable table;
    if (format == InputFormat::Csv)
        detail::parse_checkins_csv(data, mode, table);
    else
        detail::parse_checkins_ndjson(data, mode, table);
    return table;
}

/// Home country = the country with the most check-ins for that user; ties go
/// to the lexicographically smallest code.
inline HomeAssignment infer_homes(const CheckinTable& table) {
    HomeAssignment homes;
    for (const auto& [user, counts] : table.user_country_counts()) {
        // std::map iterates codes in ascending order, so strict '>' keeps the smallest on ties.
        const std::string* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [country, n] : counts) {
            if (best == nullptr || n > best_count) {
                best = &country;
                best_count = n;
            }
        }
        if (best) homes.emplace(user, *best);
    }
    return homes;
}

/// Countries with strictly more than `threshold` check-ins.
inline std::set<std::string> filter_countries(const CheckinTable& table, std::uint64_t threshold) {
    std::set<std::string> out;
    for (const auto& [country, n] : table.country_counts())
        if (n > threshold) out.insert(country);
    return out;
}

/// w_ij = number of distinct users living in i with at least one check-in in
/// j (i != j, both allowed). Users whose home is not allowed are dropped.
inline MobilityGraph build_mobility_graph(const CheckinTable& table, const HomeAssignment& homes,
                                          const std::set<std::string>& allowed, std::string label = {}) {
    std::vector<std::string> nodes(allowed.begin(), allowed.end());
    std::map<std::pair<std::string, std::string>, Weight> weights;
    for (const auto& [user, counts] : table.user_country_counts()) {
        const auto home = homes.find(user);
        if (home == homes.end())
            throw Error(ErrorCategory::Domain, "no home assigned for user '" + user + "'");
        if (!allowed.contains(home->second)) continue;
        for (const auto& [country, n] : counts) {
            if (country == home->second || !allowed.contains(country)) continue;
            ++weights[{home->second, country}];
        }
    }
    std::vector<Arc> arcs;
    arcs.reserve(weights.size());
    for (const auto& [key, w] : weights) arcs.push_back({key.first, key.second, w});
    return MobilityGraph(std::move(nodes), arcs, std::move(label));
}

/// Parses an `origin,destination,count` flow matrix. Lines starting with '#'
/// are metadata; a `# nodes:` line lists nodes that have no edges.
inline MobilityGraph parse_flow_matrix(std::istream& in, std::string label = {}) {
    const std::string data = util::read_all(in);
    std::set<std::string> nodes;
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<Arc> arcs;
    bool header_seen = false;
    util::for_each_line(data, [&](std::size_t line_no, std::string_view line) {
        if (util::trim(line).empty()) return;
        if (line.front() == '#') {
            constexpr std::string_view tag = "# nodes:";
            if (line.substr(0, tag.size()) == tag) {
                for (const auto& n : util::split(util::trim(line.substr(tag.size())), ' '))
                    if (!n.empty()) nodes.insert(n);
            }
            return;
        }
        auto fields = util::split_csv_line(line);
        for (auto& f : fields) f = std::string(util::trim(f));
        if (!header_seen) {
            header_seen = true;
            if (fields != std::vector<std::string>{"origin", "destination", "count"})
                throw ParseError(line_no, "expected header origin,destination,count");
            return;
        }
        if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
        if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty country code");
        if (fields[0] == fields[1]) throw ParseError(line_no, "self-loop row " + fields[0] + "," + fields[1]);
        const auto count = util::parse_int(fields[2]);
        if (!count) throw ParseError(line_no, "count '" + fields[2] + "' is not an integer");
        if (*count <= 0) throw ParseError(line_no, "non-positive count " + fields[2]);
        if (!seen.insert({fields[0], fields[1]}).second)
            throw ParseError(line_no, "duplicate pair " + fields[0] + "," + fields[1]);
        nodes.insert(fields[0]);
        nodes.insert(fields[1]);
        arcs.push_back({fields[0], fields[1], *count});
    });
    if (!header_seen) throw ParseError(1, "missing header origin,destination,count");
    return MobilityGraph(std::vector<std::string>(nodes.begin(), nodes.end()), arcs, std::move(label));
}

}  // namespace mobgraph
