#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pumpstudy {

/// One pump-and-dump announcement. success stays unset until classified.
struct EventRecord {
    std::string event_id;
    std::string symbol;    // base asset ticker, e.g. DREP
    std::string pair;      // trading pair, must end in BTC
    std::string exchange;
    std::int64_t announce_minute = 0;  // epoch minute UTC, > 0
    std::string source_channel;
    std::optional<bool> success;
};

/// Load events from CSV (`event_id,symbol,pair,exchange,announce_time_utc,
/// source_channel,success`, ISO-8601 times, success in {true,false,empty}).
/// Throws IntegrityError on duplicate event ids, ParseError with the line on
/// malformed rows.
std::vector<EventRecord> load_events(const std::filesystem::path& path);

/// Inverse of load_events; round-trip stable.
void save_events(const std::vector<EventRecord>& events, const std::filesystem::path& path);

struct CryptoCount {
    std::string symbol;
    int count;
    double percent;  // 100*count/total, half-up to 2 decimals
};

/// Events per symbol, descending by count with alphabetical tie-break,
/// truncated to the top_n symbols.
std::vector<CryptoCount> per_crypto_counts(const std::vector<EventRecord>& events, int top_n);

struct WeeklyCount {
    std::int64_t week_start_day;  // epoch day of the Monday starting the week
    int count;
};

/// Per-ISO-week event counts, zero-filled between the first and last event.
std::vector<WeeklyCount> weekly_counts(const std::vector<EventRecord>& events);

struct EventsPerCryptoHistogram {
    std::map<int, int> histogram;  // events-per-symbol -> number of symbols
    double mean;
    double median;
};

EventsPerCryptoHistogram events_per_crypto_histogram(const std::vector<EventRecord>& events);

}  // namespace pumpstudy
