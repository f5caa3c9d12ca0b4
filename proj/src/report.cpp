#include "zero/report.hpp"

#include <array>
#include <ostream>

#include "zero/text.hpp"

namespace zero {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 1099511628211ULL;
  }
  return state;
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

void write_report_header(std::ostream& out, const ReportHeader& header) {
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
}

std::vector<std::string> strip_comment_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty() && trim(line).front() != '#') lines.emplace_back(line);
    pos = end + 1;
  }
  return lines;
}

std::string find_header_value(std::string_view text, std::string_view key) {
  const std::string prefix = "# " + std::string(key) + ": ";
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (line.starts_with(prefix)) return std::string(trim(line.substr(prefix.size())));
    pos = end + 1;
  }
  return {};
}

}  // namespace zero
