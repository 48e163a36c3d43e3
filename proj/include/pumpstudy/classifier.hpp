#pragma once

#include <cstdint>
#include <string>

#include "pumpstudy/timeseries.hpp"

namespace pumpstudy {

struct SuccessReport {
    std::string event_id;
    double event_chunk_volume = 0.0;
    int rank = 0;           // 1 = largest five-minute chunk
    int total_chunks = 0;
    bool success = false;
    int threshold_rank = 3;
};

/// Success qualification: sum volume into five-minute chunks anchored at the
/// announcement over the surrounding two days [-1440, +1439], rank the
/// anchored chunk among all chunks by descending sum, and succeed when that
/// rank is within threshold_rank. Ties share the better (smaller) rank.
/// Throws RangeError on insufficient coverage, DataError on all-gap volume.
SuccessReport qualify_event(const MinuteSeries& volume, std::int64_t announce_minute,
                            int threshold_rank = 3, const std::string& event_id = "");

}  // namespace pumpstudy
