#include "pumpstudy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "pumpstudy/csv.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/timeutil.hpp"

namespace pumpstudy {

SummaryStats summary_stats(const std::vector<double>& values) {
    if (values.empty()) throw DataError("summary_stats on empty input");
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();

    auto percentile = [&](double p) {
        if (n == 1) return v[0];
        const double h = p * (n - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = h - lo;
        return v[lo] + frac * (v[hi] - v[lo]);
    };

    SummaryStats s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / n;
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    s.min = v.front();
    s.max = v.back();
    s.p25 = percentile(0.25);
    s.p50 = percentile(0.50);
    s.p75 = percentile(0.75);
    return s;
}

namespace {

// Round half-up to `decimals`, then trim trailing zeros from the fraction;
// an all-zero fraction is kept in full ("0.000") so a true zero is visible.
std::string trimmed_fixed(double v, int decimals) {
    const double r = round_half_up(v, decimals);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, r);
    std::string s = buf;
    if (s == "-0.000" || s == "-0.00" || s == "-0") s = s.substr(1);
    const auto dot = s.find('.');
    if (dot == std::string::npos) return s;
    bool all_zero = true;
    for (std::size_t i = dot + 1; i < s.size(); ++i) {
        if (s[i] != '0') {
            all_zero = false;
            break;
        }
    }
    if (all_zero) return s;
    while (s.back() == '0') s.pop_back();
    return s;
}

}  // namespace

std::string format_coefficient(double coef, double p) {
    return trimmed_fixed(coef, 3) + significance_stars(p);
}

std::string render_regression_table(const Table3& table) {
    // Canonical row order: intercept, then tweet, return and volume variables
    // grouped with earlier windows first.
    auto kind_rank = [](const std::string& t) {
        if (t == "Intercept") return 0;
        if (t.rfind("CAT", 0) == 0) return 1;
        if (t.rfind("CAR", 0) == 0) return 2;
        if (t.rfind("CAV", 0) == 0) return 3;
        return 4;
    };
    auto window_rank = [](const std::string& t) {
        const auto open = t.find('(');
        if (open == std::string::npos) return 0;
        return atoi(t.c_str() + open + 1);
    };
    std::vector<std::string> terms;
    for (const auto& col : table.columns) {
        if (!col.result) continue;
        for (const auto& t : col.result->terms) {
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
        }
    }
    std::stable_sort(terms.begin(), terms.end(), [&](const std::string& a, const std::string& b) {
        if (kind_rank(a) != kind_rank(b)) return kind_rank(a) < kind_rank(b);
        return window_rank(a) < window_rank(b);
    });

    constexpr int kTermWidth = 12;
    constexpr int kCellWidth = 14;
    auto pad_left = [](const std::string& s, int w) {
        return s.size() >= static_cast<std::size_t>(w) ? s
                                                       : std::string(w - s.size(), ' ') + s;
    };
    auto pad_right = [](const std::string& s, int w) {
        return s.size() >= static_cast<std::size_t>(w) ? s
                                                       : s + std::string(w - s.size(), ' ');
    };

    std::string out;
    out += pad_right("", kTermWidth);
    for (const auto& col : table.columns) out += pad_left(col.name, kCellWidth);
    out += '\n';
    const std::string rule(kTermWidth + 5 * kCellWidth, '-');
    out += rule + '\n';

    for (const auto& term : terms) {
        std::string coef_line = pad_right(term, kTermWidth);
        std::string se_line = pad_right("", kTermWidth);
        for (const auto& col : table.columns) {
            std::string coef_cell, se_cell;
            if (col.result) {
                const auto& r = *col.result;
                auto it = std::find(r.terms.begin(), r.terms.end(), term);
                if (it != r.terms.end()) {
                    const std::size_t j = static_cast<std::size_t>(it - r.terms.begin());
                    coef_cell = format_coefficient(r.coefficients[j], r.p_values[j]);
                    se_cell = "(" + trimmed_fixed(r.standard_errors[j], 3) + ")";
                }
            }
            coef_line += pad_left(coef_cell, kCellWidth);
            se_line += pad_left(se_cell, kCellWidth);
        }
        out += coef_line + '\n';
        out += se_line + '\n';
    }

    out += rule + '\n';
    std::string adj_line = pad_right("Adj. R2 (%)", kTermWidth);
    std::string n_line = pad_right("N", kTermWidth);
    std::string drop_line = pad_right("Dropped", kTermWidth);
    for (const auto& col : table.columns) {
        adj_line += pad_left(col.result ? trimmed_fixed(100.0 * col.result->adj_r2, 2) : "",
                             kCellWidth);
        n_line += pad_left(col.result ? std::to_string(col.result->n) : "", kCellWidth);
        drop_line +=
            pad_left(col.result ? std::to_string(col.result->dropped_events) : "", kCellWidth);
    }
    out += adj_line + '\n' + n_line + '\n' + drop_line + '\n';

    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (!table.columns[c].error.empty()) {
            out += "note: column (" + std::to_string(c + 1) + ") failed: " +
                   table.columns[c].error + '\n';
        }
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace

void write_table3_csv(const Table3& table, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "column,term,coef,se,t,p,stars\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const auto& col = table.columns[c];
        if (!col.result) continue;
        const auto& r = *col.result;
        for (std::size_t j = 0; j < r.terms.size(); ++j) {
            out << (c + 1) << ',' << csv_escape(r.terms[j]) << ',' << format_double(r.coefficients[j])
                << ',' << format_double(r.standard_errors[j]) << ',' << format_double(r.t_stats[j])
                << ',' << format_double(r.p_values[j]) << ',' << significance_stars(r.p_values[j])
                << '\n';
        }
    }
}

void write_table1_csv(const std::vector<CryptoCount>& counts, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "symbol,events,percent\n";
    char buf[32];
    for (const auto& c : counts) {
        std::snprintf(buf, sizeof(buf), "%.2f", c.percent);
        out << csv_escape(c.symbol) << ',' << c.count << ',' << buf << '\n';
    }
}

void write_table2_csv(const SummaryStats& s, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "statistic,value\n";
    const std::pair<const char*, double> rows[] = {{"mean", s.mean}, {"std", s.std},
                                                   {"min", s.min},   {"p25", s.p25},
                                                   {"p50", s.p50},   {"p75", s.p75},
                                                   {"max", s.max}};
    for (const auto& [name, v] : rows) out << name << ',' << format_double(round_half_up(v, 2)) << '\n';
}

void write_weekly_csv(const std::vector<WeeklyCount>& weeks, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "week_start,count\n";
    for (const auto& w : weeks) out << format_date(w.week_start_day) << ',' << w.count << '\n';
}

void write_histogram_csv(const EventsPerCryptoHistogram& hist, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "events_per_crypto,num_cryptos\n";
    for (const auto& [k, v] : hist.histogram) out << k << ',' << v << '\n';
}

void write_curves_csv(const CurveSet& curves, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "tau,car_mean,cav_mean,cat_mean,n_car,n_cat\n";
    for (int tau = curves.tau_min; tau <= curves.tau_max; ++tau) {
        const std::size_t k = static_cast<std::size_t>(tau - curves.tau_min);
        out << tau << ',' << format_double(curves.car_mean[k]) << ','
            << format_double(curves.cav_mean[k]) << ',';
        if (curves.n_cat > 0) out << format_double(curves.cat_mean[k]);
        out << ',' << curves.n_car << ',' << curves.n_cat << '\n';
    }
}

void write_panel_csv(const AbnormalPanel& panel, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "tau,ar,av,at\n";
    for (std::int64_t tau = panel.ar.start_minute(); tau <= panel.ar.end_minute(); ++tau) {
        const auto& ar = panel.ar.at_minute(tau);
        const auto& av = panel.av.at_minute(tau);
        const auto& at = panel.at.at_minute(tau);
        out << tau << ',' << (ar ? format_double(*ar) : "") << ','
            << (av ? format_double(*av) : "") << ',' << (at ? format_double(*at) : "") << '\n';
    }
}

}  // namespace pumpstudy
