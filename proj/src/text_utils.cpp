#include "mlqacal/text_utils.hpp"

#include <unicode/utf8.h>

#include <cstdint>
#include <cstdio>

namespace mlqacal {

namespace {

// Byte offset of the code point with index `cp_index`, or text.size().
std::size_t byte_offset(std::string_view text, std::size_t cp_index) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  for (std::size_t cp = 0; cp < cp_index && i < length; ++cp) {
    U8_FWD_1(s, i, length);
  }
  return static_cast<std::size_t>(i);
}

}  // namespace

std::size_t utf8_length(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::size_t count = 0;
  for (std::int32_t i = 0; i < length; ++count) {
    U8_FWD_1(s, i, length);
  }
  return count;
}

std::string utf8_slice(std::string_view text, std::size_t begin, std::size_t end) {
  if (end <= begin) return {};
  const std::size_t b = byte_offset(text, begin);
  const std::size_t e = b + byte_offset(text.substr(b), end - begin);
  return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      break;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += separator;
    out += parts[i];
  }
  return out;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // avoid "-0.00"
  if (s.find_first_not_of("-0.") == std::string::npos && !s.empty() && s[0] == '-') s.erase(0, 1);
  return s;
}

}  // namespace mlqacal
