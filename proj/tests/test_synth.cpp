#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pumpstudy/classifier.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/ingestion.hpp"
#include "pumpstudy/regression.hpp"
#include "pumpstudy/synth.hpp"

using namespace pumpstudy;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / "pumpstudy_test_synth" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool trees_identical(const fs::path& a, const fs::path& b) {
    std::vector<std::string> rel_a, rel_b;
    for (auto& e : fs::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a).string());
    }
    for (auto& e : fs::recursive_directory_iterator(b)) {
        if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b).string());
    }
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    if (rel_a != rel_b) return false;
    for (const auto& r : rel_a) {
        if (slurp(a / r) != slurp(b / r)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("corpus generation is deterministic per seed") {
    SynthConfig cfg;
    cfg.n_events = 4;
    cfg.seed = 1234;
    cfg.beta_pre = 0.3;
    auto c1 = generate_corpus(cfg);
    auto c2 = generate_corpus(cfg);
    REQUIRE(c1.events.size() == 4);
    for (std::size_t i = 0; i < c1.events.size(); ++i) {
        CHECK(c1.events[i].record.announce_minute == c2.events[i].record.announce_minute);
        CHECK(c1.events[i].close.values() == c2.events[i].close.values());
        CHECK(c1.events[i].volume.values() == c2.events[i].volume.values());
        CHECK(c1.events[i].tweets.values() == c2.events[i].tweets.values());
    }

    auto d1 = fresh_dir("det1");
    auto d2 = fresh_dir("det2");
    write_corpus(c1, d1);
    write_corpus(c2, d2);
    CHECK(trees_identical(d1, d2));

    SynthConfig other = cfg;
    other.seed = 1235;
    auto c3 = generate_corpus(other);
    CHECK(c1.events[0].close.values() != c3.events[0].close.values());
}

TEST_CASE("zero effect sizes give zero planted truth") {
    SynthConfig cfg;
    cfg.n_events = 2;
    cfg.beta_pre = 0.0;
    cfg.post_dump_tweet_loading = 0.0;
    auto c = generate_corpus(cfg);
    CHECK(c.truth.beta_pre == 0.0);
    CHECK(c.truth.beta_dump == 0.0);
    CHECK(c.truth.beta_post == 0.0);
}

TEST_CASE("brute force panel equals build_panel on synthetic events") {
    SynthConfig cfg;
    cfg.n_events = 8;
    cfg.seed = 77;
    cfg.beta_pre = 0.3;
    cfg.post_dump_tweet_loading = -2.0;
    auto corpus = generate_corpus(cfg);
    for (const auto& ev : corpus.events) {
        auto a = build_panel(ev.record, ev.close, ev.volume, ev.tweets);
        auto b = brute_force_panel(ev.record, ev.close, ev.volume, ev.tweets);
        CHECK(a.at_defined == b.at_defined);
        CHECK(std::fabs(a.training.mean_return - b.training.mean_return) < 1e-14);
        CHECK(std::fabs(a.training.std_tweets - b.training.std_tweets) < 1e-12);
        for (int tau = -720; tau <= 720; ++tau) {
            CHECK(std::fabs(*a.ar.at_minute(tau) - *b.ar.at_minute(tau)) < 1e-10);
            CHECK(std::fabs(*a.av.at_minute(tau) - *b.av.at_minute(tau)) < 1e-10);
            const auto& at_a = a.at.at_minute(tau);
            const auto& at_b = b.at.at_minute(tau);
            REQUIRE(at_a.has_value() == at_b.has_value());
            if (at_a) CHECK(std::fabs(*at_a - *at_b) < 1e-10);
        }
    }
}

TEST_CASE("brute force panel handles flat markets and zero tweets") {
    const std::int64_t a = 6000000;
    std::vector<MinuteSeries::Value> prices(3602, 1e-5), vol(3601, 3.0), tw(3601, 0.0);
    MinuteSeries close(a - 2881, prices, "price-in-BTC");
    MinuteSeries volume(a - 2880, vol, "base-asset volume");
    MinuteSeries tweets(a - 2880, tw, "tweet count");
    EventRecord ev{"E", "ABC", "ABCBTC", "BINANCE", a, "chan", std::nullopt};
    auto p = brute_force_panel(ev, close, volume, tweets);
    CHECK_FALSE(p.at_defined);
    for (int tau = -720; tau <= 720; ++tau) {
        CHECK(*p.ar.at_minute(tau) == 0.0);
        CHECK(*p.av.at_minute(tau) == 0.0);
        CHECK(*p.at.at_minute(tau) == 0.0);
    }
}

TEST_CASE("generated files feed the ingestion path with identical counts") {
    SynthConfig cfg;
    cfg.n_events = 3;
    cfg.seed = 99;
    auto corpus = generate_corpus(cfg);
    auto dir = fresh_dir("ingest");
    write_corpus(corpus, dir);

    auto events = load_events(dir / "events.csv");
    REQUIRE(events.size() == 3);
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = corpus.events[i];
        CHECK(events[i].event_id == ev.record.event_id);
        CHECK(events[i].announce_minute == ev.record.announce_minute);

        auto k = load_klines(dir / "klines" / (ev.record.pair + ".csv"), ev.record.pair);
        REQUIRE(k.close.size() == ev.close.size());
        CHECK(k.close.start_minute() == ev.close.start_minute());
        for (std::size_t j = 0; j < k.close.size(); ++j) {
            CHECK(*k.close[j] == *ev.close[j]);
            CHECK(*k.volume[j] == *ev.volume[j]);
        }

        auto tweets = load_tweets(dir / "tweets" / (ev.record.symbol + ".jsonl"));
        auto counts =
            tweet_minute_counts(tweets, ev.record.symbol, ev.record.announce_minute, {-2880, 720});
        REQUIRE(counts.size() == ev.tweets.size());
        for (std::size_t j = 0; j < counts.size(); ++j) {
            CHECK(*counts[j] == *ev.tweets[j]);
        }
    }
}

TEST_CASE("default corpus parameters guarantee a rank-one event chunk") {
    SynthConfig cfg;
    cfg.n_events = 6;
    cfg.seed = 2718;
    auto corpus = generate_corpus(cfg);
    for (const auto& ev : corpus.events) {
        auto r = qualify_event(ev.volume, ev.record.announce_minute, 3, ev.record.event_id);
        CHECK(r.rank == 1);
        CHECK(r.success);
    }
}

TEST_CASE("planted pre-event slope is recovered by the regressions") {
    SynthConfig cfg;
    cfg.n_events = 120;
    cfg.seed = 31415;
    cfg.beta_pre = 0.5;
    auto corpus = generate_corpus(cfg);
    std::vector<AbnormalPanel> panels;
    for (const auto& ev : corpus.events) {
        panels.push_back(build_panel(ev.record, ev.close, ev.volume, ev.tweets));
    }
    auto t = run_table3(panels);
    REQUIRE(t.columns[0].result.has_value());
    const auto& r = *t.columns[0].result;
    CHECK(r.coefficients[1] > 0.0);
    CHECK(std::fabs(r.coefficients[1] - 0.5) < 2.0 * r.standard_errors[1]);
}
