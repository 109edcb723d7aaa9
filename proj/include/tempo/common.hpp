// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tempo {

/// Strictly positive activation time. The engine's virtual start time is 0.
using Timepoint = double;

using NodeIndex = std::int32_t;
using EdgeIndex = std::int32_t;

inline constexpr std::int32_t kUnbound = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV rows, pattern files, automaton files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A row refers to a node or edge that does not exist.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

/// Shortest decimal text that round-trips the value ("1.1", "2").
std::string format_time(Timepoint t);

/// Parses decimal text into a finite timepoint; throws ParseError.
Timepoint parse_time(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace tempo
