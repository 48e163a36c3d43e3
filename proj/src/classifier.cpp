#include "pumpstudy/classifier.hpp"

#include <algorithm>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

SuccessReport qualify_event(const MinuteSeries& volume, std::int64_t announce_minute,
                            int threshold_rank, const std::string& event_id) {
    if (threshold_rank < 1) throw DataError("threshold_rank must be >= 1");
    const MinuteSeries span = slice_relative(volume, announce_minute, {-1440, 1439});
    if (span.gap_count() == span.size()) {
        throw DataError("volume is all gaps around minute " + std::to_string(announce_minute) +
                        (event_id.empty() ? "" : " for event " + event_id));
    }

    const auto chunks = chunk_sums(span, announce_minute, 5);
    double event_sum = 0.0;
    bool found = false;
    int rank = 1;
    for (const auto& c : chunks) {
        if (c.start_minute == announce_minute) {
            event_sum = c.sum;
            found = true;
            break;
        }
    }
    if (!found) throw RangeError("anchored chunk missing from the two-day span");
    for (const auto& c : chunks) {
        if (c.sum > event_sum) ++rank;
    }

    SuccessReport r;
    r.event_id = event_id;
    r.event_chunk_volume = event_sum;
    r.rank = rank;
    r.total_chunks = static_cast<int>(chunks.size());
    r.threshold_rank = threshold_rank;
    r.success = rank <= threshold_rank;
    return r;
}

}  // namespace pumpstudy
