#include "pumpstudy/eventstore.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "pumpstudy/csv.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/timeutil.hpp"

namespace pumpstudy {

static const char* kEventsHeader = "event_id,symbol,pair,exchange,announce_time_utc,source_channel,success";

std::vector<EventRecord> load_events(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open events file: " + path.string());
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty events file: " + path.string());
    ++line_no;

    std::vector<EventRecord> out;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(f.size()), line_no);
        EventRecord e;
        e.event_id = f[0];
        e.symbol = f[1];
        e.pair = f[2];
        e.exchange = f[3];
        std::int64_t sec;
        try {
            sec = parse_iso8601_utc(f[4]);
        } catch (const ParseError& err) {
            throw ParseError(std::string(err.what()), line_no);
        }
        e.announce_minute = sec / 60;
        e.source_channel = f[5];
        if (f[6] == "true") e.success = true;
        else if (f[6] == "false") e.success = false;
        else if (f[6].empty()) e.success = std::nullopt;
        else throw ParseError("success must be true/false/empty, got '" + f[6] + "'", line_no);

        if (e.event_id.empty()) throw ParseError("empty event_id", line_no);
        if (e.pair.size() < 4 || e.pair.substr(e.pair.size() - 3) != "BTC") {
            throw ParseError("pair must end with BTC, got '" + e.pair + "'", line_no);
        }
        if (e.announce_minute <= 0) throw ParseError("announce time must be after the epoch", line_no);
        if (!ids.insert(e.event_id).second) {
            throw IntegrityError("duplicate event_id '" + e.event_id + "' in " + path.string());
        }
        out.push_back(std::move(e));
    }
    return out;
}

void save_events(const std::vector<EventRecord>& events, const std::filesystem::path& path) {
    std::set<std::string> ids;
    for (const auto& e : events) {
        if (!ids.insert(e.event_id).second) {
            throw IntegrityError("duplicate event_id '" + e.event_id + "'");
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write events file: " + path.string());
    out << kEventsHeader << '\n';
    for (const auto& e : events) {
        out << csv_escape(e.event_id) << ',' << csv_escape(e.symbol) << ',' << csv_escape(e.pair)
            << ',' << csv_escape(e.exchange) << ',' << format_iso8601_utc(e.announce_minute * 60)
            << ',' << csv_escape(e.source_channel) << ','
            << (e.success ? (*e.success ? "true" : "false") : "") << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<CryptoCount> per_crypto_counts(const std::vector<EventRecord>& events, int top_n) {
    if (events.empty()) throw DataError("no events");
    std::map<std::string, int> counts;
    for (const auto& e : events) ++counts[e.symbol];
    std::vector<CryptoCount> all;
    all.reserve(counts.size());
    const double total = static_cast<double>(events.size());
    for (const auto& [sym, n] : counts) {
        all.push_back({sym, n, round_half_up(100.0 * n / total, 2)});
    }
    std::sort(all.begin(), all.end(), [](const CryptoCount& a, const CryptoCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.symbol < b.symbol;
    });
    if (top_n >= 0 && static_cast<std::size_t>(top_n) < all.size()) all.resize(top_n);
    return all;
}

std::vector<WeeklyCount> weekly_counts(const std::vector<EventRecord>& events) {
    if (events.empty()) return {};
    std::map<std::int64_t, int> by_week;
    std::int64_t first = 0, last = 0;
    bool init = false;
    for (const auto& e : events) {
        const std::int64_t week = week_start_day(e.announce_minute / 1440);
        ++by_week[week];
        if (!init || week < first) first = week;
        if (!init || week > last) last = week;
        init = true;
    }
    std::vector<WeeklyCount> out;
    for (std::int64_t w = first; w <= last; w += 7) {
        auto it = by_week.find(w);
        out.push_back({w, it == by_week.end() ? 0 : it->second});
    }
    return out;
}

EventsPerCryptoHistogram events_per_crypto_histogram(const std::vector<EventRecord>& events) {
    EventsPerCryptoHistogram h{{}, 0.0, 0.0};
    if (events.empty()) return h;
    std::map<std::string, int> counts;
    for (const auto& e : events) ++counts[e.symbol];
    std::vector<int> per_symbol;
    per_symbol.reserve(counts.size());
    for (const auto& [sym, n] : counts) {
        ++h.histogram[n];
        per_symbol.push_back(n);
    }
    std::sort(per_symbol.begin(), per_symbol.end());
    h.mean = static_cast<double>(events.size()) / static_cast<double>(per_symbol.size());
    const std::size_t n = per_symbol.size();
    h.median = (n % 2 == 1) ? per_symbol[n / 2]
                            : (per_symbol[n / 2 - 1] + per_symbol[n / 2]) / 2.0;
    return h;
}

}  // namespace pumpstudy
