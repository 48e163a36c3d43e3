#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pumpstudy {

/// Split one CSV line on commas. Double-quoted fields may contain commas;
/// embedded quotes are doubled ("").
std::vector<std::string> split_csv_line(const std::string& line);

/// Quote a field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// Locale-independent double parse of a full field. Throws ParseError.
double parse_double_field(const std::string& field, long line_number);

/// Integer parse of a full field. Throws ParseError.
std::int64_t parse_int_field(const std::string& field, long line_number);

/// Round half away from zero to `decimals` places.
double round_half_up(double v, int decimals);

}  // namespace pumpstudy
