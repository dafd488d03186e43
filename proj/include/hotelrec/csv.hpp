#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hotelrec::csv {

// Minimal comma-separated format: no quoting, fields must not contain
// commas or newlines. All files are UTF-8 with a mandatory header row.

std::vector<std::string> split_fields(std::string_view line);

// strips a trailing \r and a leading UTF-8 BOM on the first line
std::string normalize_line(std::string line, bool first_line);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

// shortest decimal form that round-trips the double exactly
std::string format_double(double v);

}  // namespace hotelrec::csv
