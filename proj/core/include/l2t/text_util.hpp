#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace l2t::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
// Trims and collapses every whitespace run to a single space.
std::string collapse_ws(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_digit(char c) noexcept;

// Shortest decimal rendering: integers print without a fractional part,
// other values with up to 10 significant fractional digits, trailing zeros
// removed.
std::string format_number(double value);

// English ordinal suffix: 1 -> "1st", 2 -> "2nd", 11 -> "11th".
std::string ordinal(long n);

}  // namespace l2t::text
