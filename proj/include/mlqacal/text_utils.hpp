#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mlqacal {

/// Number of Unicode code points in a UTF-8 string. Malformed bytes count
/// as one code point each.
std::size_t utf8_length(std::string_view text);

/// Substring by code-point range [begin, end). Indices past the end clamp.
std::string utf8_slice(std::string_view text, std::size_t begin, std::size_t end);

std::vector<std::string> split(std::string_view text, char delimiter);
std::string join(const std::vector<std::string>& parts, std::string_view separator);
std::string trim(std::string_view text);

/// Fixed-point formatting with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace mlqacal
