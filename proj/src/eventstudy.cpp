#include "pumpstudy/eventstudy.hpp"

#include <cmath>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

WindowSet::WindowSet()
    : WindowSet({-2880, -721}, {-720, -1}, {-31, -2}, {-1, 1}, {2, 31}, {32, 720}) {}

WindowSet::WindowSet(RelativeWindow training_, RelativeWindow pre_event_,
                     RelativeWindow pre_event_late_, RelativeWindow pump_, RelativeWindow dump_,
                     RelativeWindow post_dump_)
    : training(training_),
      pre_event(pre_event_),
      pre_event_late(pre_event_late_),
      pump(pump_),
      dump(dump_),
      post_dump(post_dump_) {
    const RelativeWindow parts[4] = {pre_event_late, pump, dump, post_dump};
    for (const auto& w : parts) {
        if (w.tau1 > w.tau2) throw DataError("window endpoints out of order");
    }
    for (int i = 0; i + 1 < 4; ++i) {
        if (parts[i].tau2 + 1 != parts[i + 1].tau1) {
            throw DataError("regression windows must tile without overlap");
        }
    }
    if (training.tau2 >= pre_event.tau1) throw DataError("training window overlaps pre-event");
}

namespace {

struct WindowMean {
    double mean = 0.0;
    int n = 0;
};

WindowMean mean_over(const MinuteSeries& s, std::int64_t lo, std::int64_t hi) {
    WindowMean m;
    double sum = 0.0;
    for (std::int64_t t = lo; t <= hi; ++t) {
        const auto& v = s.at_minute(t);
        if (v) {
            sum += *v;
            ++m.n;
        }
    }
    if (m.n > 0) m.mean = sum / m.n;
    return m;
}

}  // namespace

TrainingStats training_stats(const MinuteSeries& returns, const MinuteSeries& volume,
                             const MinuteSeries& tweets, std::int64_t anchor,
                             const WindowSet& windows) {
    const std::int64_t lo = anchor + windows.training.tau1;
    const std::int64_t hi = anchor + windows.training.tau2;
    for (const MinuteSeries* s : {&returns, &volume, &tweets}) {
        if (!s->covers(lo, hi)) {
            throw DataError("training window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] not covered by " +
                            (s->unit_label().empty() ? "series" : s->unit_label()) + " grid [" +
                            std::to_string(s->start_minute()) + ", " +
                            std::to_string(s->end_minute()) + "]");
        }
    }

    const WindowMean r = mean_over(returns, lo, hi);
    const WindowMean v = mean_over(volume, lo, hi);
    const WindowMean t = mean_over(tweets, lo, hi);

    TrainingStats stats;
    stats.n_valid = std::min({r.n, v.n, t.n});
    if (stats.n_valid < 60) {
        throw DataError("insufficient training data: only " + std::to_string(stats.n_valid) +
                        " valid minutes");
    }
    stats.mean_return = r.mean;
    stats.mean_volume = v.mean;
    stats.mean_tweets = t.mean;

    double ss = 0.0;
    for (std::int64_t m = lo; m <= hi; ++m) {
        const auto& x = tweets.at_minute(m);
        if (x) {
            const double d = *x - t.mean;
            ss += d * d;
        }
    }
    stats.std_tweets = t.n > 0 ? std::sqrt(ss / t.n) : 0.0;
    return stats;
}

std::optional<double> abnormal_tweets(double t, const TrainingStats& s) {
    if (s.std_tweets > 0.0) return (t - s.mean_tweets) / s.std_tweets;
    if (t == s.mean_tweets) return 0.0;
    return std::nullopt;
}

double cumulative(const MinuteSeries& series, RelativeWindow window) {
    if (!series.covers(window.tau1, window.tau2)) {
        throw RangeError("window [" + std::to_string(window.tau1) + ", " +
                         std::to_string(window.tau2) + "] outside relative grid [" +
                         std::to_string(series.start_minute()) + ", " +
                         std::to_string(series.end_minute()) + "]");
    }
    double sum = 0.0;
    for (int tau = window.tau1; tau <= window.tau2; ++tau) {
        const auto& v = series.at_minute(tau);
        if (v) sum += *v;
    }
    return sum;
}

namespace {

// Missing-bar policy: a gap means no trade, so the minute contributes a 0
// observation (returns and volume alike).
MinuteSeries fill_gaps_with_zero(const MinuteSeries& s) {
    std::vector<MinuteSeries::Value> v = s.values();
    for (auto& x : v) {
        if (!x) x = 0.0;
    }
    return MinuteSeries(s.start_minute(), std::move(v), s.unit_label());
}

}  // namespace

AbnormalPanel build_panel(const EventRecord& event, const MinuteSeries& close,
                          const MinuteSeries& volume, const MinuteSeries& tweets,
                          const WindowSet& windows) {
    const std::int64_t a = event.announce_minute;
    const RelativeWindow full{windows.training.tau1, windows.post_dump.tau2};

    if (!close.covers(a + full.tau1 - 1, a + full.tau2)) {
        throw DataError("event " + event.event_id + ": close prices must cover minutes [" +
                        std::to_string(a + full.tau1 - 1) + ", " + std::to_string(a + full.tau2) +
                        "], have [" + std::to_string(close.start_minute()) + ", " +
                        std::to_string(close.end_minute()) + "]");
    }
    for (const MinuteSeries* s : {&volume, &tweets}) {
        if (!s->covers(a + full.tau1, a + full.tau2)) {
            throw DataError("event " + event.event_id + ": " +
                            (s->unit_label().empty() ? "series" : s->unit_label()) +
                            " must cover minutes [" + std::to_string(a + full.tau1) + ", " +
                            std::to_string(a + full.tau2) + "]");
        }
    }

    const MinuteSeries returns_raw =
        slice_relative(log_returns(close), a, full);
    const MinuteSeries returns = fill_gaps_with_zero(returns_raw);
    const MinuteSeries vol = fill_gaps_with_zero(slice_relative(volume, a, full));
    const MinuteSeries tw = fill_gaps_with_zero(slice_relative(tweets, a, full));

    const TrainingStats stats = training_stats(returns, vol, tw, a, windows);

    const RelativeWindow panel{windows.pre_event.tau1, windows.post_dump.tau2};
    const std::size_t n = static_cast<std::size_t>(panel.length());
    std::vector<MinuteSeries::Value> ar(n), av(n), at(n);
    for (int tau = panel.tau1; tau <= panel.tau2; ++tau) {
        const std::size_t k = static_cast<std::size_t>(tau - panel.tau1);
        ar[k] = abnormal_return(*returns.at_minute(a + tau), stats);
        av[k] = abnormal_volume(*vol.at_minute(a + tau), stats);
        at[k] = abnormal_tweets(*tw.at_minute(a + tau), stats);
    }

    AbnormalPanel p{event.event_id,
                    MinuteSeries(panel.tau1, std::move(ar), "abnormal return"),
                    MinuteSeries(panel.tau1, std::move(av), "abnormal volume"),
                    MinuteSeries(panel.tau1, std::move(at), "abnormal tweets"),
                    stats,
                    stats.std_tweets > 0.0};
    return p;
}

CurveSet average_curves(const std::vector<AbnormalPanel>& panels) {
    if (panels.empty()) throw DataError("average_curves needs at least one panel");
    CurveSet c;
    const std::size_t n = static_cast<std::size_t>(c.tau_max - c.tau_min + 1);
    c.car_mean.assign(n, 0.0);
    c.cav_mean.assign(n, 0.0);
    c.cat_mean.assign(n, 0.0);
    for (const auto& p : panels) {
        double car = 0.0, cav = 0.0, cat = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::int64_t tau = c.tau_min + static_cast<std::int64_t>(k);
            const auto& ar = p.ar.at_minute(tau);
            const auto& av = p.av.at_minute(tau);
            if (ar) car += *ar;
            if (av) cav += *av;
            c.car_mean[k] += car;
            c.cav_mean[k] += cav;
            if (p.at_defined) {
                const auto& at = p.at.at_minute(tau);
                if (at) cat += *at;
                c.cat_mean[k] += cat;
            }
        }
        ++c.n_car;
        if (p.at_defined) ++c.n_cat;
    }
    for (std::size_t k = 0; k < n; ++k) {
        c.car_mean[k] /= c.n_car;
        c.cav_mean[k] /= c.n_car;
        if (c.n_cat > 0) c.cat_mean[k] /= c.n_cat;
    }
    return c;
}

}  // namespace pumpstudy
