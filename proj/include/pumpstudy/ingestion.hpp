#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pumpstudy/timeseries.hpp"

namespace pumpstudy {

/// One minute bar as stored in a klines CSV.
struct KlineRow {
    std::int64_t open_time;  // epoch minute UTC
    double open;
    double high;
    double low;
    double close;  // quote-currency price, > 0
    double volume; // base-asset quantity, >= 0
};

struct TweetRecord {
    std::int64_t created_at;  // epoch second UTC
    std::string text;
    std::string lang;
    bool is_retweet = false;
};

struct LoadReport {
    std::vector<std::string> warnings;
};

struct KlineData {
    MinuteSeries close;
    MinuteSeries volume;
    LoadReport report;
};

/// Load a klines CSV (header `open_time,open,high,low,close,volume`,
/// open_time in epoch milliseconds) into close and volume series on one
/// contiguous grid spanning min..max open_time. Minutes absent from the file
/// become gaps. Rows may arrive in any order; duplicates keep the last
/// occurrence and conflicting duplicates are reported as warnings.
KlineData load_klines(const std::filesystem::path& path, const std::string& pair);

/// Load a tweets JSONL file (`created_at` ISO-8601 string, `text`, `lang`,
/// `retweet`; unknown fields ignored). Records are deduplicated on
/// (created_at, text).
std::vector<TweetRecord> load_tweets(const std::filesystem::path& path);

/// Combined count of hashtag/cashtag tokens: a token counts when, after
/// stripping surrounding punctuation, it starts with '#' or '$' followed by a
/// letter ("$5" is a price, not a cashtag).
int tag_count(const std::string& text);

/// English-language gate plus the tag-stuffing budget (> 5 combined tags
/// excludes). Retweet status never excludes.
bool passes_filter(const TweetRecord& t);

/// True when the text carries the symbol's hashtag or cashtag as a whole
/// token, case-insensitive ("#DREPX" does not match DREP).
bool matches_symbol(const std::string& text, const std::string& symbol);

/// Per-minute counts over [anchor+tau1, anchor+tau2] of records that pass
/// passes_filter and matches_symbol, with created_at floored to the minute.
/// Minutes with no tweets are 0, not gaps.
MinuteSeries tweet_minute_counts(const std::vector<TweetRecord>& records, const std::string& symbol,
                                 std::int64_t anchor, RelativeWindow window = {-2880, 720});

}  // namespace pumpstudy
