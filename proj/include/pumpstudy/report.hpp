#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pumpstudy/eventstore.hpp"
#include "pumpstudy/eventstudy.hpp"
#include "pumpstudy/regression.hpp"

namespace pumpstudy {

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // sample (n-1)
    double min = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double max = 0.0;
};

/// Seven-number summary with percentiles linearly interpolated between order
/// statistics. Throws DataError on empty input.
SummaryStats summary_stats(const std::vector<double>& values);

/// Coefficient cell: 3-decimal half-up rounding with trailing zeros trimmed
/// ("-0.47"), keeping the full "0.000" form when every decimal is zero, plus
/// significance stars.
std::string format_coefficient(double coef, double p);

/// Fixed-width text rendering of the five-column regression table: one line
/// per term with the coefficient and stars, the standard error in parentheses
/// beneath, and an adjusted R-squared row in percent.
std::string render_regression_table(const Table3& table);

void write_table3_csv(const Table3& table, const std::filesystem::path& path);
void write_table1_csv(const std::vector<CryptoCount>& counts, const std::filesystem::path& path);
void write_table2_csv(const SummaryStats& stats, const std::filesystem::path& path);
void write_weekly_csv(const std::vector<WeeklyCount>& weeks, const std::filesystem::path& path);
void write_histogram_csv(const EventsPerCryptoHistogram& hist, const std::filesystem::path& path);
void write_curves_csv(const CurveSet& curves, const std::filesystem::path& path);
void write_panel_csv(const AbnormalPanel& panel, const std::filesystem::path& path);

}  // namespace pumpstudy
