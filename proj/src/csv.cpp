#include "pumpstudy/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF input
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& field, long line_number) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || field.empty()) {
        throw ParseError("expected a number, got '" + field + "'", line_number);
    }
    return v;
}

std::int64_t parse_int_field(const std::string& field, long line_number) {
    std::int64_t v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || field.empty()) {
        throw ParseError("expected an integer, got '" + field + "'", line_number);
    }
    return v;
}

double round_half_up(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    double scaled = v * scale;
    double r = std::floor(std::fabs(scaled) + 0.5);
    return std::copysign(r, v) / scale;
}

}  // namespace pumpstudy
