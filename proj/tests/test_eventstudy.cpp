#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pumpstudy/errors.hpp"
#include "pumpstudy/eventstudy.hpp"

using namespace pumpstudy;

namespace {

constexpr std::int64_t kAnchor = 5000000;

EventRecord test_event(std::int64_t announce = kAnchor) {
    return {"EV", "ABC", "ABCBTC", "BINANCE", announce, "chan", std::nullopt};
}

// Series over relative minutes [lo, hi] from a generator of tau.
template <typename Fn>
MinuteSeries rel_series(std::int64_t anchor, int lo, int hi, Fn&& fn, const char* label = "") {
    std::vector<MinuteSeries::Value> v;
    v.reserve(hi - lo + 1);
    for (int tau = lo; tau <= hi; ++tau) v.emplace_back(fn(tau));
    return MinuteSeries(anchor + lo, std::move(v), label);
}

MinuteSeries flat_prices(std::int64_t anchor, double level = 2e-5) {
    return rel_series(anchor, -2881, 720, [&](int) { return level; }, "price-in-BTC");
}

}  // namespace

TEST_CASE("WindowSet validates the regression partition") {
    WindowSet ws;
    CHECK(ws.pre_event_late.tau2 + 1 == ws.pump.tau1);
    CHECK(ws.pump.tau2 + 1 == ws.dump.tau1);
    CHECK(ws.dump.tau2 + 1 == ws.post_dump.tau1);
    CHECK(ws.pre_event_late.tau1 == -31);
    CHECK(ws.post_dump.tau2 == 720);
    // 30 + 3 + 30 + 689 minutes tile (-31, 720).
    CHECK(ws.pre_event_late.length() + ws.pump.length() + ws.dump.length() +
              ws.post_dump.length() ==
          RelativeWindow{-31, 720}.length());

    WindowSet bad;
    bad.dump = {3, 31};  // leaves a hole after the pump window
    CHECK_THROWS_AS(WindowSet(bad.training, bad.pre_event, bad.pre_event_late, bad.pump, bad.dump,
                              bad.post_dump),
                    DataError);
    CHECK_THROWS_AS(WindowSet({-2880, -600}, {-720, -1}, {-31, -2}, {-1, 1}, {2, 31}, {32, 720}),
                    DataError);
}

TEST_CASE("training_stats fixtures") {
    auto returns = rel_series(kAnchor, -2880, 720, [](int) { return 0.001; });
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 10.0; });

    SUBCASE("constant return and zero tweets") {
        auto tweets = rel_series(kAnchor, -2880, 720, [](int) { return 0.0; });
        auto s = training_stats(returns, volume, tweets, kAnchor);
        CHECK(s.mean_return == doctest::Approx(0.001).epsilon(1e-12));
        CHECK(s.mean_volume == doctest::Approx(10.0));
        CHECK(s.mean_tweets == 0.0);
        CHECK(s.std_tweets == 0.0);
        CHECK(s.n_valid == 2160);
    }
    SUBCASE("alternating tweet counts, population deviation") {
        auto tweets = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 2 == 0 ? 0.0 : 2.0; });
        auto s = training_stats(returns, volume, tweets, kAnchor);
        CHECK(s.mean_tweets == doctest::Approx(1.0));
        CHECK(s.std_tweets == doctest::Approx(1.0));
    }
    SUBCASE("gaps are skipped in the means") {
        auto gappy = rel_series(kAnchor, -2880, 720, [](int tau) -> MinuteSeries::Value {
            if (tau < -721 && tau % 3 == 0) return std::nullopt;
            return 0.002;
        });
        auto tweets = rel_series(kAnchor, -2880, 720, [](int) { return 1.0; });
        auto s = training_stats(gappy, volume, tweets, kAnchor);
        CHECK(s.mean_return == doctest::Approx(0.002));
        CHECK(s.n_valid < 2160);
    }
    SUBCASE("insufficient data") {
        auto sparse = rel_series(kAnchor, -2880, 720, [](int tau) -> MinuteSeries::Value {
            if (tau <= -721) return std::nullopt;
            return 0.0;
        });
        auto tweets = rel_series(kAnchor, -2880, 720, [](int) { return 0.0; });
        CHECK_THROWS_AS(training_stats(sparse, volume, tweets, kAnchor), DataError);
    }
    SUBCASE("window not covered") {
        auto small = rel_series(kAnchor, -100, 100, [](int) { return 0.0; });
        CHECK_THROWS_AS(training_stats(small, volume, volume, kAnchor), DataError);
    }
}

TEST_CASE("abnormality measures") {
    TrainingStats s;
    s.mean_return = 0.005;
    s.mean_volume = 10.0;
    s.mean_tweets = 1.0;
    s.std_tweets = 2.0;

    CHECK(abnormal_return(0.005, s) == 0.0);
    CHECK(abnormal_return(0.02, s) == doctest::Approx(0.015));
    CHECK(abnormal_volume(0.0, s) == doctest::Approx(-10.0));
    CHECK(*abnormal_tweets(1.0, s) == 0.0);
    CHECK(*abnormal_tweets(5.0, s) == doctest::Approx(2.0));

    TrainingStats zero = s;
    zero.std_tweets = 0.0;
    zero.mean_tweets = 0.0;
    CHECK(*abnormal_tweets(0.0, zero) == 0.0);
    CHECK_FALSE(abnormal_tweets(3.0, zero).has_value());
}

TEST_CASE("cumulative sums") {
    auto zeros = rel_series(0, -720, 720, [](int) { return 0.0; });
    CHECK(cumulative(zeros, {-31, -2}) == 0.0);
    CHECK(cumulative(zeros, {-720, 720}) == 0.0);

    auto constant = rel_series(0, -720, 720, [](int) { return 0.001; });
    CHECK(cumulative(constant, {-31, -2}) == doctest::Approx(0.030).epsilon(1e-12));
    CHECK(100.0 * cumulative(constant, {-31, -2}) == doctest::Approx(3.0));

    CHECK_THROWS_AS(cumulative(constant, {-800, 0}), RangeError);

    SUBCASE("additivity on adjacent windows") {
        std::mt19937_64 rng(5);
        // Dyadic values keep every partial sum exact in binary64.
        std::uniform_int_distribution<int> numer(-(1 << 20), 1 << 20);
        for (int rep = 0; rep < 100; ++rep) {
            auto s = rel_series(0, -720, 720, [&](int) {
                return static_cast<double>(numer(rng)) / static_cast<double>(1 << 20);
            });
            std::uniform_int_distribution<int> pick(-720, 720);
            int a = pick(rng), b = pick(rng), c = pick(rng);
            int lo = std::min({a, b, c}), hi = std::max({a, b, c});
            int mid = a + b + c - lo - hi;
            if (mid == hi) continue;
            CHECK(cumulative(s, {lo, mid}) + cumulative(s, {mid + 1, hi}) ==
                  cumulative(s, {lo, hi}));
        }
    }
}

TEST_CASE("build_panel on a flat market") {
    auto close = flat_prices(kAnchor);
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 10.0; });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int) { return 0.0; });
    auto p = build_panel(test_event(), close, volume, tweets);

    CHECK(p.ar.start_minute() == -720);
    CHECK(p.ar.size() == 1441);
    CHECK_FALSE(p.at_defined);
    for (int tau = -720; tau <= 720; ++tau) {
        CHECK(*p.ar.at_minute(tau) == 0.0);
        CHECK(*p.av.at_minute(tau) == 0.0);
        CHECK(*p.at.at_minute(tau) == 0.0);
    }
}

TEST_CASE("build_panel with a planted pump step") {
    // Price drifts upward during training only, then a +10% log jump at the
    // announcement: CAR(-1,1) = 0.10 - 3 * mean_return by construction.
    const double c = 0.0001;
    auto close = rel_series(kAnchor, -2881, 720, [&](int tau) {
        double log_p = std::log(2e-5);
        if (tau <= -721) log_p += c * (tau + 2881);
        else log_p += c * (-721 + 2881);
        if (tau >= 0) log_p += 0.10;
        return std::exp(log_p);
    });
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 2 ? 1.0 : 0.0; });
    auto p = build_panel(test_event(), close, volume, tweets);

    CHECK(p.training.mean_return == doctest::Approx(c).epsilon(1e-6));
    const double car_pump = cumulative(p.ar, {-1, 1});
    CHECK(car_pump == doctest::Approx(0.10 - 3 * p.training.mean_return).epsilon(1e-9));
    CHECK(p.at_defined);
}

TEST_CASE("build_panel gap policy: missing bars read as zero activity") {
    // A gap at tau=100 zeroes that minute's return and volume observation and
    // the return of the following minute (its base price is absent).
    auto close = rel_series(kAnchor, -2881, 720, [](int tau) -> MinuteSeries::Value {
        if (tau == 100) return std::nullopt;
        return 2e-5;
    });
    auto volume = rel_series(kAnchor, -2880, 720, [](int tau) -> MinuteSeries::Value {
        if (tau == 100) return std::nullopt;
        return 7.0;
    });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 3 ? 1.0 : 0.0; });
    auto p = build_panel(test_event(), close, volume, tweets);

    CHECK(*p.ar.at_minute(100) == doctest::Approx(0.0 - p.training.mean_return));
    CHECK(*p.ar.at_minute(101) == doctest::Approx(0.0 - p.training.mean_return));
    CHECK(*p.av.at_minute(100) == doctest::Approx(0.0 - p.training.mean_volume));
    CHECK(*p.av.at_minute(99) == doctest::Approx(7.0 - p.training.mean_volume));
}

TEST_CASE("build_panel coverage errors") {
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int) { return 0.0; });
    SUBCASE("price grid short by one leading minute") {
        auto close = rel_series(kAnchor, -2880, 720, [](int) { return 2e-5; });
        CHECK_THROWS_AS(build_panel(test_event(), close, volume, tweets), DataError);
    }
    SUBCASE("tweets not covering the span") {
        auto close = flat_prices(kAnchor);
        auto short_tweets = rel_series(kAnchor, -100, 720, [](int) { return 0.0; });
        CHECK_THROWS_AS(build_panel(test_event(), close, volume, short_tweets), DataError);
    }
}

TEST_CASE("training boundary: minute -720 belongs to the event window") {
    // A price jump exactly at -720 must not contaminate the training mean.
    auto close = rel_series(kAnchor, -2881, 720, [](int tau) {
        return tau >= -720 ? 2e-5 * std::exp(0.05) : 2e-5;
    });
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 2 ? 2.0 : 0.0; });
    auto p = build_panel(test_event(), close, volume, tweets);
    CHECK(p.training.mean_return == 0.0);
    CHECK(*p.ar.at_minute(-720) == doctest::Approx(0.05));
    CHECK(*p.ar.at_minute(-719) == doctest::Approx(0.0));
}

TEST_CASE("abnormal tweets are affine invariant") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> noise(0.0, 6.0);
    auto close = flat_prices(kAnchor);
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });
    std::vector<double> base;
    for (int tau = -2880; tau <= 720; ++tau) base.push_back(std::floor(noise(rng)));
    auto tweets = rel_series(kAnchor, -2880, 720,
                             [&](int tau) { return base[static_cast<std::size_t>(tau + 2880)]; });
    const double a = 3.7, b = 11.0;
    auto scaled = rel_series(kAnchor, -2880, 720, [&](int tau) {
        return a * base[static_cast<std::size_t>(tau + 2880)] + b;
    });
    auto p1 = build_panel(test_event(), close, volume, tweets);
    auto p2 = build_panel(test_event(), close, volume, scaled);
    REQUIRE(p1.at_defined);
    REQUIRE(p2.at_defined);
    for (int tau = -720; tau <= 720; ++tau) {
        CHECK(std::fabs(*p1.at.at_minute(tau) - *p2.at.at_minute(tau)) <= 1e-12);
    }
}

TEST_CASE("abnormal returns are drift invariant") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> noise(0.0, 0.002);
    std::vector<double> rets;
    for (int i = 0; i < 3601; ++i) rets.push_back(noise(rng));
    auto price_from = [&](double drift) {
        double log_p = std::log(3e-5);
        std::vector<MinuteSeries::Value> v;
        v.reserve(3602);
        v.emplace_back(std::exp(log_p));
        for (int i = 0; i < 3601; ++i) {
            log_p += rets[static_cast<std::size_t>(i)] + drift;
            v.emplace_back(std::exp(log_p));
        }
        return MinuteSeries(kAnchor - 2881, std::move(v), "price-in-BTC");
    };
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });
    auto tweets = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 2 ? 1.0 : 0.0; });
    auto p1 = build_panel(test_event(), price_from(0.0), volume, tweets);
    auto p2 = build_panel(test_event(), price_from(0.003), volume, tweets);
    for (int tau = -720; tau <= 720; ++tau) {
        CHECK(std::fabs(*p1.ar.at_minute(tau) - *p2.ar.at_minute(tau)) <= 1e-9);
    }
}

TEST_CASE("average_curves") {
    auto close = flat_prices(kAnchor);
    auto volume = rel_series(kAnchor, -2880, 720, [](int) { return 5.0; });

    auto tweets1 = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 2 ? 1.0 : 0.0; });
    auto jumpy = rel_series(kAnchor, -2881, 720, [](int tau) {
        return tau >= 0 ? 2e-5 * std::exp(0.10) : 2e-5;
    });
    auto p1 = build_panel(test_event(), jumpy, volume, tweets1);

    SUBCASE("single panel equals its own cumulative series") {
        auto c = average_curves({p1});
        CHECK(c.n_car == 1);
        CHECK(c.n_cat == 1);
        for (int tau : {-720, -100, 0, 1, 360, 720}) {
            CHECK(c.car_mean[static_cast<std::size_t>(tau + 720)] ==
                  doctest::Approx(cumulative(p1.ar, {-720, tau})).epsilon(1e-12));
        }
    }
    SUBCASE("two panels average and the tweet curve drops undefined panels") {
        auto stronger = rel_series(kAnchor, -2881, 720, [](int tau) {
            return tau >= 0 ? 2e-5 * std::exp(0.30) : 2e-5;
        });
        auto zero_tweets = rel_series(kAnchor, -2880, 720, [](int) { return 0.0; });
        auto p2 = build_panel(test_event(), stronger, volume, zero_tweets);
        CHECK_FALSE(p2.at_defined);

        auto c = average_curves({p1, p2});
        CHECK(c.n_car == 2);
        CHECK(c.n_cat == 1);
        const double at0 = c.car_mean[720];
        const double expected = (cumulative(p1.ar, {-720, 0}) + cumulative(p2.ar, {-720, 0})) / 2;
        CHECK(at0 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(c.cat_mean[720] ==
              doctest::Approx(cumulative(p1.at, {-720, 0})).epsilon(1e-12));
    }
    SUBCASE("permutation invariance") {
        auto tweets2 = rel_series(kAnchor, -2880, 720, [](int tau) { return tau % 5 ? 0.0 : 2.0; });
        auto p2 = build_panel(test_event(), close, volume, tweets2);
        auto p3 = build_panel(test_event(), jumpy, volume, tweets2);
        auto c1 = average_curves({p1, p2, p3});
        auto c2 = average_curves({p3, p1, p2});
        for (std::size_t k = 0; k < c1.car_mean.size(); ++k) {
            CHECK(std::fabs(c1.car_mean[k] - c2.car_mean[k]) <= 1e-12);
            CHECK(std::fabs(c1.cav_mean[k] - c2.cav_mean[k]) <= 1e-12);
            CHECK(std::fabs(c1.cat_mean[k] - c2.cat_mean[k]) <= 1e-12);
        }
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(average_curves({}), DataError);
    }
}
