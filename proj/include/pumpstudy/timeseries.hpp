#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pumpstudy {

/// Inclusive window of minutes relative to an event anchor.
struct RelativeWindow {
    int tau1;
    int tau2;

    constexpr int length() const { return tau2 - tau1 + 1; }
};

/// A value per minute on a contiguous UTC minute grid. The value at index k
/// belongs to minute start_minute + k; no per-point timestamps are stored.
/// Missing data is an explicit gap (std::nullopt), never a sentinel number.
class MinuteSeries {
public:
    using Value = std::optional<double>;

    MinuteSeries(std::int64_t start_minute, std::vector<Value> values, std::string unit_label = "");

    std::int64_t start_minute() const { return start_minute_; }
    std::int64_t end_minute() const {
        return start_minute_ + static_cast<std::int64_t>(values_.size()) - 1;
    }
    std::size_t size() const { return values_.size(); }
    const std::string& unit_label() const { return unit_label_; }
    const std::vector<Value>& values() const { return values_; }

    bool covers(std::int64_t lo, std::int64_t hi) const {
        return lo >= start_minute_ && hi <= end_minute() && lo <= hi;
    }
    const Value& operator[](std::size_t k) const { return values_[k]; }

    /// Value at an absolute minute. Throws RangeError when outside the grid.
    const Value& at_minute(std::int64_t minute) const;

    std::size_t gap_count() const;

private:
    std::int64_t start_minute_;
    std::vector<Value> values_;
    std::string unit_label_;
};

/// One-minute log returns: out[k] = ln(p[k+1] / p[k]). The output grid starts
/// one minute after the input grid, so the return at minute t compares the
/// price at t against the price at t-1. Pairs touching a gap yield a gap.
/// Throws DataError on a non-positive price at a non-gap minute, naming it.
MinuteSeries log_returns(const MinuteSeries& prices);

/// Inclusive sub-series over [anchor+tau1, anchor+tau2]. Gaps are preserved.
/// Throws RangeError, reporting the missing span, when the window is not
/// fully covered.
MinuteSeries slice_relative(const MinuteSeries& series, std::int64_t anchor, RelativeWindow window);

struct ChunkSum {
    std::int64_t start_minute;
    double sum;
};

/// Fixed-width chunk sums tiling the series in both directions from the
/// anchor so that one chunk starts exactly at the anchor. Partial chunks at
/// either edge are dropped; gaps count as 0 within a chunk.
std::vector<ChunkSum> chunk_sums(const MinuteSeries& series, std::int64_t anchor, int width);

}  // namespace pumpstudy
