#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

std::string_view trim(std::string_view s);

// "[+-]?digits[.digits]" scaled by 10^scale_digits; digits beyond the scale
// round half away from zero. Exact integer arithmetic, no floating point.
std::optional<std::int64_t> parse_scaled_decimal(std::string_view s, int scale_digits);

// Strict "[+-]?digits".
std::optional<std::int64_t> parse_int(std::string_view s);

std::string format_micro_degrees(std::int64_t micro);  // "40.751000" / "-73.993000"

// Splits one delimited line. Double-quoted fields may contain the delimiter
// and "" escapes; unescaped content for those lands in scratch, so the views
// are valid only while line and scratch are alive.
void split_csv_line(std::string_view line, char delim, std::vector<std::string_view>& fields,
                    std::string& scratch);

}  // namespace evograph
