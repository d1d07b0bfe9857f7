#pragma once

// Helpers shared by the JSON-lines readers. Not part of the public API.

#include "json.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "mlqacal/errors.hpp"

namespace mlqacal::detail {

using json = nlohmann::json;

inline constexpr std::string_view kNonFiniteMarker = "\x01nonfinite:";

/// Python's json module writes NaN, Infinity and -Infinity as bare tokens.
/// Rewrite them to marker strings so the parser accepts the line and the
/// field validator can report which field held the non-finite value.
inline std::string quote_nonfinite_tokens(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) {
        out += line[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    bool replaced = false;
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (line.substr(i, token.size()) == token) {
        out += "\"\\u0001nonfinite:";
        out += token;
        out += '"';
        i += token.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out += c;
  }
  return out;
}

inline bool is_nonfinite_marker(const json& value) {
  return value.is_string() && value.get_ref<const std::string&>().starts_with(kNonFiniteMarker);
}

/// Typed field access on one JSON object with line/field-aware errors.
class FieldReader {
 public:
  FieldReader(const json& object, std::size_t line, std::string prefix = {})
      : object_(object), line_(line), prefix_(std::move(prefix)) {
    if (!object_.is_object()) fail("", "expected a JSON object");
  }

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    throw SchemaError(line_, prefix_ + std::string(key), what);
  }

  void require_known_keys(std::initializer_list<std::string_view> allowed) const {
    for (const auto& item : object_.items()) {
      bool known = false;
      for (auto k : allowed) known = known || item.key() == k;
      if (!known) fail(item.key(), "unknown field");
    }
  }

  bool has(std::string_view key) const {
    auto it = object_.find(std::string(key));
    return it != object_.end() && !it->is_null();
  }

  const json& at(std::string_view key) const {
    auto it = object_.find(std::string(key));
    if (it == object_.end() || it->is_null()) fail(key, "missing required field");
    return *it;
  }

  std::string string(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_string() || is_nonfinite_marker(v)) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return string(key);
  }

  double number(std::string_view key) const { return number_value(at(key), key); }

  double number_value(const json& v, std::string_view key) const {
    if (is_nonfinite_marker(v)) fail(key, "value is not finite");
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "value is not finite");
    return d;
  }

  std::size_t index(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::optional<std::size_t> optional_index(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return index(key);
  }

  const json& array(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

  std::size_t line() const noexcept { return line_; }
  const std::string& prefix() const noexcept { return prefix_; }

 private:
  const json& object_;
  std::size_t line_;
  std::string prefix_;
};

/// Parses one physical line; malformed JSON becomes a SchemaError.
inline json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(quote_nonfinite_tokens(line));
  } catch (const json::exception& e) {
    throw SchemaError(line_no, "", std::string("malformed JSON: ") + e.what());
  }
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace mlqacal::detail
