// SPDX-License-Identifier: Apache-2.0
#include "tempo/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace tempo {

std::string format_time(Timepoint t) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), t);
  if (ec != std::errc{}) throw Error("cannot format timepoint");
  return std::string(buf.data(), end);
}

Timepoint parse_time(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ParseError("invalid timepoint '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace tempo
