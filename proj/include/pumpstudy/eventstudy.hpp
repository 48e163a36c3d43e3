#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pumpstudy/eventstore.hpp"
#include "pumpstudy/timeseries.hpp"

namespace pumpstudy {

/// The relative-minute periods of the study. Construction asserts that the
/// four regression windows partition (-31, 720) with no overlap.
struct WindowSet {
    RelativeWindow training{-2880, -721};
    RelativeWindow pre_event{-720, -1};
    RelativeWindow pre_event_late{-31, -2};
    RelativeWindow pump{-1, 1};
    RelativeWindow dump{2, 31};
    RelativeWindow post_dump{32, 720};

    WindowSet();
    WindowSet(RelativeWindow training, RelativeWindow pre_event, RelativeWindow pre_event_late,
              RelativeWindow pump, RelativeWindow dump, RelativeWindow post_dump);
};

/// Expected ("normal") per-minute behavior estimated on the training window.
struct TrainingStats {
    double mean_return = 0.0;
    double mean_volume = 0.0;
    double mean_tweets = 0.0;
    double std_tweets = 0.0;  // population standard deviation
    int n_valid = 0;
};

/// Means of return/volume/tweets over non-gap minutes of the training window,
/// plus the population standard deviation of the per-minute tweet counts.
/// Throws DataError when the window is not covered or fewer than 60 valid
/// minutes remain.
TrainingStats training_stats(const MinuteSeries& returns, const MinuteSeries& volume,
                             const MinuteSeries& tweets, std::int64_t anchor,
                             const WindowSet& windows = WindowSet());

inline double abnormal_return(double r, const TrainingStats& s) { return r - s.mean_return; }
inline double abnormal_volume(double v, const TrainingStats& s) { return v - s.mean_volume; }

/// Deviation-scaled abnormal tweets. With zero training deviation the value
/// is 0 when the observation equals the mean and undefined otherwise; the
/// undefined case is encoded as nullopt, never thrown.
std::optional<double> abnormal_tweets(double t, const TrainingStats& s);

/// Inclusive sum of a relative-grid series over the window; gaps add 0.
/// Throws RangeError when the window leaves the grid. Multiply abnormal
/// returns by 100 to express the result in percent.
double cumulative(const MinuteSeries& series, RelativeWindow window);

/// Per-event abnormality panel on relative minutes [-720, +720]. The ar/av/at
/// series share one grid (start_minute is the relative minute -720).
struct AbnormalPanel {
    std::string event_id;
    MinuteSeries ar;
    MinuteSeries av;
    MinuteSeries at;
    TrainingStats training;
    bool at_defined = false;  // std_tweets > 0
};

/// Assemble the panel for one event. Requires close prices over
/// [-2881, +720] relative to the announcement (one extra leading minute to
/// seed the first return) and volume/tweets over [-2880, +720]. Missing
/// price bars imply no trade: gap returns and gap volumes enter as 0
/// observations, in the training means as well as the event window.
AbnormalPanel build_panel(const EventRecord& event, const MinuteSeries& close,
                          const MinuteSeries& volume, const MinuteSeries& tweets,
                          const WindowSet& windows = WindowSet());

/// Cross-event mean cumulative curves: curve[tau] is the mean over events of
/// cumulative(series, (-720, tau)). The tweet curve averages only events with
/// a defined tweet deviation; return/volume curves keep every event.
struct CurveSet {
    int tau_min = -720;
    int tau_max = 720;
    std::vector<double> car_mean;  // indexed by tau - tau_min
    std::vector<double> cav_mean;
    std::vector<double> cat_mean;  // meaningful only when n_cat > 0
    int n_car = 0;
    int n_cat = 0;
};

CurveSet average_curves(const std::vector<AbnormalPanel>& panels);

}  // namespace pumpstudy
