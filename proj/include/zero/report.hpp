#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zero {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;

/// FNV-1a 64-bit, chainable through `state`.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = kFnvOffset);

std::string hex64(std::uint64_t value);

/// Ordered `key: value` metadata emitted as `# key: value` comment lines.
using ReportHeader = std::vector<std::pair<std::string, std::string>>;

void write_report_header(std::ostream& out, const ReportHeader& header);

/// Lines of `text` with leading `#` comment lines removed.
std::vector<std::string> strip_comment_lines(std::string_view text);

/// Value of a `# key: value` line, empty when absent.
std::string find_header_value(std::string_view text, std::string_view key);

}  // namespace zero
