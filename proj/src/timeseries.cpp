#include "pumpstudy/timeseries.hpp"

#include <cmath>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

MinuteSeries::MinuteSeries(std::int64_t start_minute, std::vector<Value> values,
                           std::string unit_label)
    : start_minute_(start_minute), values_(std::move(values)), unit_label_(std::move(unit_label)) {
    if (values_.empty()) throw DataError("MinuteSeries must contain at least one minute");
}

const MinuteSeries::Value& MinuteSeries::at_minute(std::int64_t minute) const {
    if (minute < start_minute_ || minute > end_minute()) {
        throw RangeError("minute " + std::to_string(minute) + " outside grid [" +
                         std::to_string(start_minute_) + ", " + std::to_string(end_minute()) + "]");
    }
    return values_[static_cast<std::size_t>(minute - start_minute_)];
}

std::size_t MinuteSeries::gap_count() const {
    std::size_t n = 0;
    for (const auto& v : values_)
        if (!v) ++n;
    return n;
}

MinuteSeries log_returns(const MinuteSeries& prices) {
    if (prices.size() < 2) throw DataError("log_returns needs at least two minutes");
    std::vector<MinuteSeries::Value> out(prices.size() - 1);
    for (std::size_t k = 0; k + 1 < prices.size(); ++k) {
        const auto& a = prices[k];
        const auto& b = prices[k + 1];
        if (a && *a <= 0.0) {
            throw DataError("non-positive price at minute " +
                            std::to_string(prices.start_minute() + static_cast<std::int64_t>(k)));
        }
        if (b && *b <= 0.0) {
            throw DataError(
                "non-positive price at minute " +
                std::to_string(prices.start_minute() + static_cast<std::int64_t>(k) + 1));
        }
        if (a && b) out[k] = std::log(*b / *a);
    }
    return MinuteSeries(prices.start_minute() + 1, std::move(out), "log-return");
}

MinuteSeries slice_relative(const MinuteSeries& series, std::int64_t anchor,
                            RelativeWindow window) {
    if (window.tau1 > window.tau2) throw RangeError("window tau1 > tau2");
    const std::int64_t lo = anchor + window.tau1;
    const std::int64_t hi = anchor + window.tau2;
    if (!series.covers(lo, hi)) {
        throw RangeError("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] not covered by grid [" + std::to_string(series.start_minute()) + ", " +
                         std::to_string(series.end_minute()) + "]");
    }
    const std::size_t off = static_cast<std::size_t>(lo - series.start_minute());
    std::vector<MinuteSeries::Value> out(series.values().begin() + off,
                                         series.values().begin() + off + window.length());
    return MinuteSeries(lo, std::move(out), series.unit_label());
}

std::vector<ChunkSum> chunk_sums(const MinuteSeries& series, std::int64_t anchor, int width) {
    if (width < 1) throw DataError("chunk width must be >= 1");
    const std::int64_t start = series.start_minute();
    const std::int64_t end = series.end_minute();
    // Chunk j covers [anchor + j*width, anchor + j*width + width - 1].
    const std::int64_t j_min = ceil_div(start - anchor, width);
    const std::int64_t j_max = floor_div(end - anchor - width + 1, width);
    std::vector<ChunkSum> out;
    if (j_max < j_min) return out;
    out.reserve(static_cast<std::size_t>(j_max - j_min + 1));
    for (std::int64_t j = j_min; j <= j_max; ++j) {
        const std::int64_t c = anchor + j * width;
        double sum = 0.0;
        for (int k = 0; k < width; ++k) {
            const auto& v = series[static_cast<std::size_t>(c - start + k)];
            if (v) sum += *v;
        }
        out.push_back({c, sum});
    }
    return out;
}

}  // namespace pumpstudy
