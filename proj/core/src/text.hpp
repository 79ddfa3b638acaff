#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oneshot::text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_trimmed(std::string_view s, char sep) {
  std::vector<std::string> out;
  for (auto part : split(s, sep)) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

/// Finite double, or nullopt.
inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  // strtod handles hex floats and every locale-free decimal form we write.
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Splits "key = value"; returns false when no '=' is present.
inline bool split_key_value(std::string_view line, std::string_view& key,
                            std::string_view& value) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return false;
  key = trim(line.substr(0, eq));
  value = trim(line.substr(eq + 1));
  return true;
}

/// Splits "a -> b".
inline bool split_arrow(std::string_view s, std::string_view& lhs, std::string_view& rhs) {
  const auto pos = s.find("->");
  if (pos == std::string_view::npos) return false;
  lhs = trim(s.substr(0, pos));
  rhs = trim(s.substr(pos + 2));
  return true;
}

inline std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(trim(hash == std::string_view::npos ? line : line.substr(0, hash)));
}

}  // namespace oneshot::text
