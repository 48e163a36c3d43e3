#include "pumpstudy/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "pumpstudy/csv.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/timeutil.hpp"

namespace pumpstudy {

namespace {

// Stream layout: every event draws from generators keyed on
// (seed, event index, purpose), so generation order never matters.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 event_stream(std::uint64_t seed, int event_index, std::uint64_t purpose) {
    return std::mt19937_64(
        splitmix64(splitmix64(seed ^ (purpose * 0xD6E8FEB86659FD93ULL)) + event_index + 1));
}

constexpr int kGridBefore = 2890;  // kline minutes before the announcement
constexpr int kGridAfter = 1450;   // covers the classifier span [-1440, +1439]
constexpr int kTweetBefore = 2880;
constexpr int kTweetAfter = 720;

struct EventDraws {
    std::int64_t announce = 0;
    double exposure = 0.0;
    double price0 = 0.0;
    std::vector<double> eps;     // return noise for minutes (lo, hi]
    std::vector<double> volume;  // per grid minute, multipliers applied
    std::vector<double> tweets;  // integer counts on the tweet window
    double cat_pre = 0.0;
    bool cat_defined = false;
};

double ramp_shape(int tau, int ramp) {
    if (ramp <= 2 || tau < -ramp || tau > -2) return 0.0;
    return static_cast<double>(tau + ramp) / static_cast<double>(ramp - 2);
}

double volume_multiplier(int tau, int ramp) {
    double m = 1.0;
    m += 3.0 * ramp_shape(tau, ramp);
    if (tau == -1) m += 19.0;
    if (tau >= 0 && tau <= 4) m += 199.0;
    if (tau >= 5 && tau <= 31) m += 30.0 * std::exp(-(tau - 5) / 10.0);
    if (tau >= 32 && tau <= 240) m += 2.0 * std::exp(-(tau - 32) / 60.0);
    return m;
}

double tweet_intensity(int tau, double rate, double exposure, int ramp) {
    double lam = rate;
    lam += exposure * rate * 6.0 * ramp_shape(tau, ramp);
    if (tau >= -1 && tau <= 1) lam += exposure * rate * 10.0;
    if (tau >= 2 && tau <= 360) lam += exposure * rate * 4.0 * std::exp(-(tau - 2) / 120.0);
    return lam;
}

EventDraws draw_event(const SynthConfig& cfg, int i) {
    EventDraws d;
    auto rng = event_stream(cfg.seed, i, 1);

    // 2019-02-04 is a Monday; events land roughly one per week.
    const std::int64_t base_minute = days_from_civil(2019, 2, 4) * 1440 + 720;
    std::uniform_int_distribution<int> jitter(0, 1439);
    d.announce = base_minute + static_cast<std::int64_t>(i) * 10080 + jitter(rng);

    std::normal_distribution<double> expo_noise(0.0, 0.6);
    d.exposure = std::exp(expo_noise(rng));

    std::normal_distribution<double> price_noise(0.0, 0.3);
    d.price0 = 1e-5 * std::exp(price_noise(rng));

    const int n_returns = kGridBefore + kGridAfter;
    d.eps.resize(n_returns);
    std::normal_distribution<double> ret_noise(0.0, cfg.base_volatility);
    for (double& e : d.eps) e = ret_noise(rng);

    const int n_grid = kGridBefore + kGridAfter + 1;
    d.volume.resize(n_grid);
    std::normal_distribution<double> vol_noise(-0.125, 0.5);
    for (int k = 0; k < n_grid; ++k) {
        const int tau = k - kGridBefore;
        d.volume[k] = cfg.base_volume_mean * volume_multiplier(tau, cfg.vip_rampup_minutes) *
                      std::exp(vol_noise(rng));
    }

    const int n_tweets = kTweetBefore + kTweetAfter + 1;
    d.tweets.resize(n_tweets);
    for (int k = 0; k < n_tweets; ++k) {
        const int tau = k - kTweetBefore;
        const double lam =
            tweet_intensity(tau, cfg.tweet_base_rate, d.exposure, cfg.vip_rampup_minutes);
        if (lam <= 0.0) {
            d.tweets[k] = 0.0;
        } else {
            std::poisson_distribution<int> tw(lam);
            d.tweets[k] = static_cast<double>(tw(rng));
        }
    }

    // Training moments of the tweet counts, then the pre-event cumulative
    // abnormal tweets this event will realize in the pipeline.
    double sum = 0.0;
    const int t_lo = -kTweetBefore, t_hi = -721;
    const int n_train = t_hi - t_lo + 1;
    for (int tau = t_lo; tau <= t_hi; ++tau) sum += d.tweets[tau + kTweetBefore];
    const double mean = sum / n_train;
    double ss = 0.0;
    for (int tau = t_lo; tau <= t_hi; ++tau) {
        const double x = d.tweets[tau + kTweetBefore] - mean;
        ss += x * x;
    }
    const double sd = std::sqrt(ss / n_train);
    if (sd > 0.0) {
        d.cat_defined = true;
        double cat = 0.0;
        for (int tau = -31; tau <= -2; ++tau) cat += (d.tweets[tau + kTweetBefore] - mean) / sd;
        d.cat_pre = cat;
    }
    return d;
}

std::string event_symbol(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "SYM%04d", i);
    return buf;
}

}  // namespace

SynthCorpus generate_corpus(const SynthConfig& cfg) {
    if (cfg.n_events < 1) throw DataError("n_events must be >= 1");
    if (cfg.base_volatility <= 0.0) throw DataError("base_volatility must be > 0");
    if (cfg.dump_reversal_frac < 0.0 || cfg.dump_reversal_frac > 1.0) {
        throw DataError("dump_reversal_frac must be in [0, 1]");
    }

    std::vector<EventDraws> draws;
    draws.reserve(cfg.n_events);
    for (int i = 0; i < cfg.n_events; ++i) draws.push_back(draw_event(cfg, i));

    // Cross-sectional z-scores of the realized pre-event cumulative abnormal
    // tweets; the planted return drifts are linear in these, which makes the
    // population slope of the standardized regressions equal the configured
    // effect sizes.
    std::vector<double> zs(draws.size(), 0.0);
    {
        double sum = 0.0;
        int n = 0;
        for (const auto& d : draws) {
            if (d.cat_defined) {
                sum += d.cat_pre;
                ++n;
            }
        }
        if (n >= 2) {
            const double mean = sum / n;
            double ss = 0.0;
            for (const auto& d : draws) {
                if (d.cat_defined) ss += (d.cat_pre - mean) * (d.cat_pre - mean);
            }
            const double sd = std::sqrt(ss / (n - 1));
            if (sd > 0.0) {
                for (std::size_t i = 0; i < draws.size(); ++i) {
                    if (draws[i].cat_defined) zs[i] = (draws[i].cat_pre - mean) / sd;
                }
            }
        }
    }

    SynthCorpus corpus;
    corpus.config = cfg;
    corpus.truth = {cfg.beta_pre, 0.0, cfg.post_dump_tweet_loading};
    corpus.events.reserve(draws.size());

    for (std::size_t i = 0; i < draws.size(); ++i) {
        const EventDraws& d = draws[i];
        const double z = zs[i];
        const std::int64_t a = d.announce;
        const std::int64_t g_lo = a - kGridBefore;

        const int n_grid = kGridBefore + kGridAfter + 1;
        std::vector<MinuteSeries::Value> closes(n_grid), volumes(n_grid);
        double price = d.price0;
        closes[0] = price;
        volumes[0] = d.volume[0];
        for (int k = 1; k < n_grid; ++k) {
            const int tau = k - kGridBefore;
            double drift = 0.0;
            if (tau >= -720 && tau <= -2) {
                drift += 0.00001 * (tau + 720) / 718.0;
            }
            if (tau >= -31 && tau <= -2) drift += (cfg.beta_pre / 100.0) * z / 30.0;
            if (tau >= -1 && tau <= 1) drift += cfg.pump_jump / 3.0;
            if (tau >= 2 && tau <= 31) drift += -(cfg.pump_jump * cfg.dump_reversal_frac) / 30.0;
            if (tau >= 32 && tau <= 720) {
                drift += -(cfg.pump_jump * (1.0 - cfg.dump_reversal_frac) * 0.5) / 689.0;
                drift += (cfg.post_dump_tweet_loading / 100.0) * z / 689.0;
            }
            price *= std::exp(d.eps[k - 1] + drift);
            closes[k] = price;
            volumes[k] = d.volume[k];
        }

        std::vector<MinuteSeries::Value> tweets(d.tweets.size());
        for (std::size_t k = 0; k < d.tweets.size(); ++k) tweets[k] = d.tweets[k];

        SynthEvent ev{
            EventRecord{"EV" + std::to_string(i), event_symbol(static_cast<int>(i)),
                        event_symbol(static_cast<int>(i)) + "BTC", "BINANCE", a, "synthchan",
                        std::nullopt},
            MinuteSeries(g_lo, std::move(closes), "price-in-BTC"),
            MinuteSeries(g_lo, std::move(volumes), "base-asset volume"),
            MinuteSeries(a - kTweetBefore, std::move(tweets), "tweet count")};
        corpus.events.push_back(std::move(ev));
    }
    return corpus;
}

void write_klines_csv(const MinuteSeries& close, const MinuteSeries& volume,
                      const std::filesystem::path& path) {
    if (close.start_minute() != volume.start_minute() || close.size() != volume.size()) {
        throw DataError("close and volume must share one grid");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write klines file: " + path.string());
    out << "open_time,open,high,low,close,volume\n";
    double prev_close = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k < close.size(); ++k) {
        const auto& c = close[k];
        const auto& v = volume[k];
        if (!c || !v) continue;
        const double open = have_prev ? prev_close : *c;
        const double high = std::max(open, *c);
        const double low = std::min(open, *c);
        const std::int64_t ms = (close.start_minute() + static_cast<std::int64_t>(k)) * 60000;
        out << ms << ',' << format_double(open) << ',' << format_double(high) << ','
            << format_double(low) << ',' << format_double(*c) << ',' << format_double(*v) << '\n';
        prev_close = *c;
        have_prev = true;
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void write_tweet_line(std::ofstream& out, std::int64_t epoch_sec, const std::string& text,
                      const std::string& lang, bool retweet) {
    out << "{\"created_at\":\"" << format_iso8601_utc(epoch_sec) << "\",\"text\":\""
        << json_escape(text) << "\",\"lang\":\"" << lang << "\",\"retweet\":"
        << (retweet ? "true" : "false") << "}\n";
}

}  // namespace

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& data_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(data_dir / "klines");
    fs::create_directories(data_dir / "tweets");

    std::vector<EventRecord> records;
    records.reserve(corpus.events.size());
    for (const auto& ev : corpus.events) records.push_back(ev.record);
    save_events(records, data_dir / "events.csv");

    {
        std::ofstream truth(data_dir / "truth.csv", std::ios::binary);
        if (!truth) throw IoError("cannot write truth.csv");
        truth << "column,beta_cat\n";
        truth << "1," << format_double(corpus.truth.beta_pre) << '\n';
        truth << "2," << format_double(corpus.truth.beta_dump) << '\n';
        truth << "4," << format_double(corpus.truth.beta_post) << '\n';
    }

    for (std::size_t i = 0; i < corpus.events.size(); ++i) {
        const SynthEvent& ev = corpus.events[i];
        write_klines_csv(ev.close, ev.volume, data_dir / "klines" / (ev.record.pair + ".csv"));

        auto rng = event_stream(corpus.config.seed, static_cast<int>(i), 2);
        std::uniform_int_distribution<int> second(0, 59);
        std::bernoulli_distribution retweet(0.2);

        std::ofstream out(data_dir / "tweets" / (ev.record.symbol + ".jsonl"), std::ios::binary);
        if (!out) throw IoError("cannot write tweets for " + ev.record.symbol);
        const std::string& sym = ev.record.symbol;
        long uid = 0;
        for (std::size_t k = 0; k < ev.tweets.size(); ++k) {
            const std::int64_t minute = ev.tweets.start_minute() + static_cast<std::int64_t>(k);
            const int count = static_cast<int>(ev.tweets[k].value_or(0.0));
            for (int c = 0; c < count; ++c) {
                const std::int64_t sec = minute * 60 + second(rng);
                const bool rt = retweet(rng);
                write_tweet_line(
                    out, sec, "Pump watch $" + sym + " heading up " + std::to_string(++uid), "en",
                    rt);
            }
            // Decoys the ingestion filters must reject: wrong language,
            // tag-stuffed, and off-topic.
            const std::int64_t tau = minute - ev.record.announce_minute;
            if (tau % 37 == 0) {
                std::int64_t sec = minute * 60 + second(rng);
                write_tweet_line(out, sec, "gros pump sur $" + sym + " " + std::to_string(++uid),
                                 "fr", false);
                sec = minute * 60 + second(rng);
                write_tweet_line(out, sec,
                                 "$" + sym + " #gem #moon #altcoin #crypto #signal " +
                                     std::to_string(++uid),
                                 "en", false);
                sec = minute * 60 + second(rng);
                const bool rt = retweet(rng);
                write_tweet_line(out, sec, "unrelated market chatter " + std::to_string(++uid),
                                 "en", rt);
            }
        }
        if (!out) throw IoError("write failed for tweets of " + sym);
    }
}

AbnormalPanel brute_force_panel(const EventRecord& event, const MinuteSeries& close,
                                const MinuteSeries& volume, const MinuteSeries& tweets) {
    const std::int64_t a = event.announce_minute;
    if (!close.covers(a - 2881, a + 720)) {
        throw DataError("event " + event.event_id + ": close prices must cover minutes [" +
                        std::to_string(a - 2881) + ", " + std::to_string(a + 720) + "]");
    }
    if (!volume.covers(a - 2880, a + 720) || !tweets.covers(a - 2880, a + 720)) {
        throw DataError("event " + event.event_id + ": series must cover the event span");
    }

    // Observed values with the no-trade reading of a missing bar: the minute
    // return is 0 when either price of the pair is absent, volume is 0.
    auto minute_return = [&](std::int64_t t) -> double {
        const auto& p0 = close.at_minute(t - 1);
        const auto& p1 = close.at_minute(t);
        if (p0 && *p0 <= 0.0) throw DataError("non-positive price at minute " + std::to_string(t - 1));
        if (p1 && *p1 <= 0.0) throw DataError("non-positive price at minute " + std::to_string(t));
        if (!p0 || !p1) return 0.0;
        return std::log(*p1 / *p0);
    };
    auto minute_volume = [&](std::int64_t t) -> double {
        const auto& v = volume.at_minute(t);
        return v ? *v : 0.0;
    };
    auto minute_tweets = [&](std::int64_t t) -> double {
        const auto& v = tweets.at_minute(t);
        return v ? *v : 0.0;
    };

    double sum_r = 0.0, sum_v = 0.0, sum_t = 0.0;
    int n = 0;
    for (std::int64_t t = a - 2880; t <= a - 721; ++t) {
        sum_r += minute_return(t);
        sum_v += minute_volume(t);
        sum_t += minute_tweets(t);
        ++n;
    }
    TrainingStats stats;
    stats.n_valid = n;
    stats.mean_return = sum_r / n;
    stats.mean_volume = sum_v / n;
    stats.mean_tweets = sum_t / n;
    double ss = 0.0;
    for (std::int64_t t = a - 2880; t <= a - 721; ++t) {
        const double d = minute_tweets(t) - stats.mean_tweets;
        ss += d * d;
    }
    stats.std_tweets = std::sqrt(ss / n);

    std::vector<MinuteSeries::Value> ar(1441), av(1441), at(1441);
    for (int tau = -720; tau <= 720; ++tau) {
        const std::size_t k = static_cast<std::size_t>(tau + 720);
        ar[k] = minute_return(a + tau) - stats.mean_return;
        av[k] = minute_volume(a + tau) - stats.mean_volume;
        const double tw = minute_tweets(a + tau);
        if (stats.std_tweets > 0.0) {
            at[k] = (tw - stats.mean_tweets) / stats.std_tweets;
        } else if (tw == stats.mean_tweets) {
            at[k] = 0.0;
        }
    }

    return AbnormalPanel{event.event_id,
                         MinuteSeries(-720, std::move(ar), "abnormal return"),
                         MinuteSeries(-720, std::move(av), "abnormal volume"),
                         MinuteSeries(-720, std::move(at), "abnormal tweets"),
                         stats,
                         stats.std_tweets > 0.0};
}

}  // namespace pumpstudy
