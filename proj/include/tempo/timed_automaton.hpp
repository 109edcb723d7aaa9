// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "tempo/common.hpp"

namespace tempo {

/// Bit j is set iff the edge bound to edge variable j is active. In text,
/// character j of a letter is bit j, so "10" means only y1 is active.
using Letter = std::uint64_t;

struct LetterPattern {
  Letter care = 0;   // bits that must take the value below
  Letter value = 0;  // subset of care

  bool matches(Letter l) const { return (l & care) == value; }
  bool concrete(std::size_t width) const;
  friend bool operator==(const LetterPattern&, const LetterPattern&) = default;
};

/// Parses `10`, `*1`, `00|11` or `true` for the given width.
std::vector<LetterPattern> parse_letter_predicate(std::string_view text, std::size_t width);
std::string format_pattern(const LetterPattern& p, std::size_t width);
std::string format_letter(Letter l, std::size_t width);
Letter parse_letter(std::string_view text);

enum class Comparator { Less, LessEq, Greater, GreaterEq };

struct ClockConstraint {
  int clock = 0;
  Comparator op = Comparator::Less;
  double bound = 0.0;

  bool holds(double value) const;
};

struct ClockValuation {
  /// Time of the most recent reset per clock; the value at `now` is
  /// now - last_reset[c].
  boost::container::small_vector<Timepoint, 4> last_reset;

  double value(int clock, Timepoint now) const { return now - last_reset[clock]; }
  friend auto operator<=>(const ClockValuation& a, const ClockValuation& b) {
    return std::lexicographical_compare_three_way(a.last_reset.begin(), a.last_reset.end(),
                                                  b.last_reset.begin(), b.last_reset.end());
  }
  friend bool operator==(const ClockValuation& a, const ClockValuation& b) {
    return a.last_reset == b.last_reset;
  }
};

/// Conjunction of clock constraints; empty means `true`.
struct ClockGuard {
  std::vector<ClockConstraint> conjuncts;

  bool is_true() const { return conjuncts.empty(); }
  bool holds(const ClockValuation& v, Timepoint now) const;
};

ClockGuard parse_guard(std::string_view text, int n_clocks);
std::string format_guard(const ClockGuard& g);

struct Transition {
  int from = 0;
  std::vector<LetterPattern> theta;
  ClockGuard guard;
  std::vector<int> resets;
  int to = 0;
};

struct Configuration {
  int state = 0;
  ClockValuation clocks;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

using TimedWord = std::vector<std::pair<Timepoint, Letter>>;

class TimedAutomaton {
 public:
  /// Automaton text:
  ///   states <n> / initial <id> / accepting <id>... / clocks <k>
  ///   trans <from> <pattern> <guard> <resets> <to>
  static TimedAutomaton parse(std::string_view text, std::size_t width);
  static TimedAutomaton load(const std::filesystem::path& path, std::size_t width);

  TimedAutomaton(int n_states, int initial, std::vector<int> accepting, int n_clocks,
                 std::size_t width, std::vector<Transition> transitions);

  int num_states() const { return n_states_; }
  int initial() const { return initial_; }
  int num_clocks() const { return n_clocks_; }
  std::size_t width() const { return width_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::vector<int> accepting_states() const;

  bool is_accepting(int s) const { return accepting_[s]; }
  bool is_early_accept(int s) const { return early_accept_[s]; }
  bool is_early_reject(int s) const { return early_reject_[s]; }
  std::vector<int> early_accept_states() const;
  std::vector<int> early_reject_states() const;

  /// Initial state self-loops on the empty letter without guard or reset and
  /// has no other transition on it, so runs may start at a matching's first
  /// active timepoint.
  bool dead_start() const { return dead_start_; }

  Configuration initial_configuration() const;

  /// Successor configurations on `letter` at time `now`, sorted and
  /// deduplicated, appended to `out` (which is cleared first).
  void step(std::span<const Configuration> configs, Letter letter, Timepoint now,
            std::vector<Configuration>& out) const;
  std::vector<Configuration> step(std::span<const Configuration> configs, Letter letter,
                                  Timepoint now) const;

  bool accepts(const TimedWord& word) const;
  bool any_accepting(std::span<const Configuration> configs) const;

  std::string to_text() const;

 private:
  void index();
  void classify();
  std::span<const int> candidates(int state, Letter letter) const;

  int n_states_;
  int initial_;
  std::vector<char> accepting_;
  int n_clocks_;
  std::size_t width_;
  std::vector<Transition> transitions_;

  std::vector<std::unordered_map<Letter, std::vector<int>>> concrete_;
  std::vector<std::vector<int>> wildcard_;
  std::vector<char> early_accept_;
  std::vector<char> early_reject_;
  bool dead_start_ = false;
};

/// Same automaton over a wider alphabet; the new letter bits are ignored.
TimedAutomaton widen(const TimedAutomaton& ta, std::size_t width);

/// Equivalent automaton with twice the states: a parity bit flips on every
/// transition to a lower-numbered state (the back edge of a cycle).
TimedAutomaton unfold(const TimedAutomaton& ta);

/// Adds `k` clocks that every transition resets and no guard reads.
TimedAutomaton add_reset_clocks(const TimedAutomaton& ta, int k);

}  // namespace tempo
