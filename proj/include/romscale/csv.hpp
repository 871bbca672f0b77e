#pragma once

#include <optional>
#include <string>
#include <vector>

namespace romscale {

/// Round-trip formatting: "%.17g" with '.' as decimal mark.
/// Non-finite values print as nan, inf, -inf.
std::string format_double(double v);
/// Empty string for nullopt.
std::string format_optional(const std::optional<double>& v);

/// RFC 4180: fields containing comma, quote, CR or LF are quoted, quotes
/// doubled; records end in CRLF.
std::string csv_field(const std::string& s);
std::string csv_record(const std::vector<std::string>& fields);

/// Inverse of csv_record over a whole document. Accepts LF or CRLF.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Exact inverse of format_double; ValidationError otherwise.
double parse_double(const std::string& s);

}  // namespace romscale
