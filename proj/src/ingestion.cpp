#include "pumpstudy/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "pumpstudy/csv.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/timeutil.hpp"

namespace pumpstudy {

KlineData load_klines(const std::filesystem::path& path, const std::string& pair) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open klines file for pair " + pair + ": " + path.string());

    LoadReport report;
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty klines file: " + path.string());
    ++line_no;

    std::map<std::int64_t, std::pair<double, double>> rows;  // minute -> (close, volume)
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(f.size()), line_no);
        const std::int64_t open_time_ms = parse_int_field(f[0], line_no);
        const std::int64_t minute = open_time_ms / 60000;
        const double close = parse_double_field(f[4], line_no);
        const double volume = parse_double_field(f[5], line_no);
        if (!std::isfinite(close) || close <= 0.0) {
            throw ParseError("non-positive close " + f[4] + " for " + pair, line_no);
        }
        if (!std::isfinite(volume) || volume < 0.0) {
            throw ParseError("negative volume " + f[5] + " for " + pair, line_no);
        }
        auto it = rows.find(minute);
        if (it != rows.end()) {
            if (it->second != std::make_pair(close, volume)) {
                report.warnings.push_back("conflicting duplicate row for minute " +
                                          std::to_string(minute) + " in " + path.string() +
                                          "; keeping the later row");
            }
            it->second = {close, volume};
        } else {
            rows.emplace(minute, std::make_pair(close, volume));
        }
    }
    if (rows.empty()) throw DataError("klines file has no data rows: " + path.string());

    const std::int64_t lo = rows.begin()->first;
    const std::int64_t hi = rows.rbegin()->first;
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<MinuteSeries::Value> closes(n), volumes(n);
    for (const auto& [minute, cv] : rows) {
        const std::size_t k = static_cast<std::size_t>(minute - lo);
        closes[k] = cv.first;
        volumes[k] = cv.second;
    }
    return KlineData{MinuteSeries(lo, std::move(closes), "price-in-BTC"),
                     MinuteSeries(lo, std::move(volumes), "base-asset volume"), std::move(report)};
}

std::vector<TweetRecord> load_tweets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tweets file: " + path.string());
    std::vector<TweetRecord> out;
    std::set<std::pair<std::int64_t, std::string>> seen;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ParseError("malformed JSON object", line_no);
        if (!j.contains("created_at") || !j.contains("text") || !j.contains("lang")) {
            throw ParseError("tweet object missing created_at/text/lang", line_no);
        }
        TweetRecord r;
        try {
            r.created_at = parse_iso8601_utc(j.at("created_at").get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), line_no);
        }
        r.text = j.at("text").get<std::string>();
        r.lang = j.at("lang").get<std::string>();
        r.is_retweet = j.value("retweet", false);
        if (r.text.empty()) throw ParseError("tweet with empty text", line_no);
        if (seen.emplace(r.created_at, r.text).second) out.push_back(std::move(r));
    }
    return out;
}

namespace {

bool is_strippable_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::ispunct(u) && c != '#' && c != '$';
}

// Strip surrounding punctuation, keeping a leading '#'/'$' sigil intact.
std::string_view trim_token(std::string_view tok) {
    while (!tok.empty() && is_strippable_punct(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && is_strippable_punct(tok.back())) tok.remove_suffix(1);
    return tok;
}

template <typename Fn>
void for_each_token(const std::string& text, Fn&& fn) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) fn(trim_token(std::string_view(text).substr(i, j - i)));
        i = j;
    }
}

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

}  // namespace

int tag_count(const std::string& text) {
    int count = 0;
    for_each_token(text, [&](std::string_view tok) {
        if (tok.size() >= 2 && (tok[0] == '#' || tok[0] == '$') &&
            std::isalpha(static_cast<unsigned char>(tok[1])))
            ++count;
    });
    return count;
}

bool passes_filter(const TweetRecord& t) { return t.lang == "en" && tag_count(t.text) <= 5; }

bool matches_symbol(const std::string& text, const std::string& symbol) {
    if (symbol.empty()) throw DataError("empty symbol");
    for (char c : symbol) {
        if (!std::isalnum(static_cast<unsigned char>(c)))
            throw DataError("symbol must be alphanumeric: '" + symbol + "'");
    }
    bool found = false;
    for_each_token(text, [&](std::string_view tok) {
        if (found || tok.size() != symbol.size() + 1) return;
        if (tok[0] != '#' && tok[0] != '$') return;
        if (iequal(tok.substr(1), symbol)) found = true;
    });
    return found;
}

MinuteSeries tweet_minute_counts(const std::vector<TweetRecord>& records, const std::string& symbol,
                                 std::int64_t anchor, RelativeWindow window) {
    const std::int64_t lo = anchor + window.tau1;
    const std::int64_t hi = anchor + window.tau2;
    std::vector<MinuteSeries::Value> counts(static_cast<std::size_t>(window.length()), 0.0);
    for (const auto& r : records) {
        const std::int64_t minute =
            r.created_at >= 0 ? r.created_at / 60 : (r.created_at - 59) / 60;
        if (minute < lo || minute > hi) continue;
        if (!passes_filter(r) || !matches_symbol(r.text, symbol)) continue;
        auto& slot = counts[static_cast<std::size_t>(minute - lo)];
        slot = *slot + 1.0;
    }
    return MinuteSeries(lo, std::move(counts), "tweet count");
}

}  // namespace pumpstudy
