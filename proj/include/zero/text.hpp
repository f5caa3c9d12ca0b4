#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zero {

std::vector<std::string_view> split_whitespace(std::string_view line);

std::string_view trim(std::string_view s);

/// ASCII lowercase; bytes outside ASCII are left alone.
std::string to_lower(std::string_view s);

std::optional<double> parse_double(std::string_view s);

template <typename Int>
std::optional<Int> parse_integer(std::string_view s) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

/// Shortest decimal form that parses back to the identical double.
std::string format_exact(double value);

/// Fixed-point with `digits` decimals, used for report tables.
std::string format_fixed(double value, int digits = 6);

/// True for code points in the Unicode punctuation (P*) categories we recognise.
bool is_unicode_punctuation(char32_t cp);

/// Strips leading and trailing punctuation code points from UTF-8 text.
std::string_view strip_punctuation(std::string_view utf8);

std::string read_file(const std::string& path);

}  // namespace zero
